#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "sbm/covariates.hpp"
#include "sbm/graph.hpp"

namespace sbm {

// One edge per line, two whitespace-separated 0-based node ids; `#` starts a
// comment line. Node count = max id + 1 unless n_nodes overrides it.
struct EdgeListData {
    int n_nodes = 0;
    std::vector<std::pair<int, int>> edges;
};
EdgeListData read_edge_list(std::istream& in, int n_nodes = -1);
EdgeListData read_edge_list_file(const std::string& path, int n_nodes = -1);

// Header `node,<name1>,<name2>,...`; every node id 0..N-1 exactly once; string
// levels become indices by first appearance in node-id order.
CovariateTable read_covariates_csv(std::istream& in);
CovariateTable read_covariates_csv_file(const std::string& path);

// Class labels, one integer per line in node order.
std::vector<int> read_labels(std::istream& in);
std::vector<int> read_labels_file(const std::string& path);

}  // namespace sbm
