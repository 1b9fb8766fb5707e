#include "sbm/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "sbm/csv.hpp"

namespace sbm {

namespace {

[[noreturn]] void parse_fail(const std::string& what, int line) {
    throw std::runtime_error(what + " (line " + std::to_string(line) + ")");
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return in;
}

}  // namespace

EdgeListData read_edge_list(std::istream& in, int n_nodes) {
    EdgeListData data;
    std::string line;
    int line_no = 0;
    int max_id = -1;
    while (std::getline(in, line)) {
        ++line_no;
        size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;
        std::istringstream ls(line);
        long long u, v;
        if (!(ls >> u >> v)) parse_fail("edge list: expected two integer node ids", line_no);
        std::string rest;
        if (ls >> rest) parse_fail("edge list: trailing token '" + rest + "'", line_no);
        if (u < 0 || v < 0) parse_fail("edge list: negative node id", line_no);
        if (u == v) parse_fail("edge list: self-edge " + std::to_string(u), line_no);
        max_id = std::max(max_id, static_cast<int>(std::max(u, v)));
        data.edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    }
    data.n_nodes = n_nodes >= 0 ? n_nodes : max_id + 1;
    if (max_id >= data.n_nodes)
        throw std::runtime_error("edge list: node id " + std::to_string(max_id) +
                                 " outside declared node count " + std::to_string(data.n_nodes));
    return data;
}

EdgeListData read_edge_list_file(const std::string& path, int n_nodes) {
    auto in = open_or_throw(path);
    return read_edge_list(in, n_nodes);
}

CovariateTable read_covariates_csv(std::istream& in) {
    auto records = parse_csv(in);
    if (records.empty()) throw std::runtime_error("covariates: empty file (line 1)");
    const auto& header = records[0];
    if (header.empty() || header[0] != "node")
        throw std::runtime_error("covariates: header must start with 'node' (line 1)");
    const int n_cols = static_cast<int>(header.size());
    if (n_cols < 2) throw std::runtime_error("covariates: no covariate columns (line 1)");

    const int n = static_cast<int>(records.size()) - 1;
    std::vector<char> seen(n, 0);
    // rows reordered by node id so level indices don't depend on file order
    std::vector<const std::vector<std::string>*> by_node(n, nullptr);
    for (size_t r = 1; r < records.size(); ++r) {
        int line = static_cast<int>(r) + 1;
        if (static_cast<int>(records[r].size()) != n_cols)
            parse_fail("covariates: row has " + std::to_string(records[r].size()) +
                           " fields, header has " + std::to_string(n_cols),
                       line);
        int id;
        try {
            size_t used;
            id = std::stoi(records[r][0], &used);
            if (used != records[r][0].size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            parse_fail("covariates: bad node id '" + records[r][0] + "'", line);
        }
        if (id < 0 || id >= n) parse_fail("covariates: node id " + std::to_string(id) + " not in 0.." + std::to_string(n - 1), line);
        if (seen[id]) parse_fail("covariates: duplicate node id " + std::to_string(id), line);
        seen[id] = 1;
        by_node[id] = &records[r];
    }
    for (int i = 0; i < n; ++i)
        if (!seen[i])
            throw std::runtime_error("covariates: node id " + std::to_string(i) + " missing");

    CovariateTable table(n);
    for (int c = 1; c < n_cols; ++c) {
        Covariate cov;
        cov.name = header[c];
        cov.levels.resize(n);
        std::map<std::string, int> level_of;
        for (int i = 0; i < n; ++i) {
            const std::string& s = (*by_node[i])[c];
            auto it = level_of.try_emplace(s, static_cast<int>(level_of.size())).first;
            cov.levels[i] = it->second;
        }
        cov.n_levels = static_cast<int>(level_of.size());
        table.add(cov);
    }
    return table;
}

CovariateTable read_covariates_csv_file(const std::string& path) {
    auto in = open_or_throw(path);
    return read_covariates_csv(in);
}

std::vector<int> read_labels(std::istream& in) {
    std::vector<int> labels;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;
        try {
            size_t used;
            int v = std::stoi(line, &used);
            while (used < line.size() && (line[used] == ' ' || line[used] == '\t' || line[used] == '\r')) ++used;
            if (used != line.size()) throw std::invalid_argument("");
            labels.push_back(v);
        } catch (const std::exception&) {
            parse_fail("labels: expected one integer", line_no);
        }
    }
    return labels;
}

std::vector<int> read_labels_file(const std::string& path) {
    auto in = open_or_throw(path);
    return read_labels(in);
}

}  // namespace sbm
