#pragma once

#include <vector>

#include "sbm/assignment.hpp"
#include "sbm/graph.hpp"

namespace sbm {

// Partition of the node pairs {(i,j) : i<j} into cells 0..n_cells-1.
struct Partition {
    int n_nodes = 0;
    int n_cells = 0;
    std::vector<int> cell_of;  // indexed by pair_index(i,j,n)

    Partition() = default;
    Partition(int n_nodes_, int n_cells_, std::vector<int> cell_of_);
};

// Cells are the blocks (z_i, z_j) induced by a class assignment.
Partition induced_partition(const ClassAssignment& z);

// L*_P: expected log-likelihood with each pair scored at its cell mean of P.
// Coincides with expected_profile_log_likelihood on induced partitions.
double partition_expected_log_likelihood(const ProbabilityMatrixDense& p, const Partition& pi);

// Replaces each cell by the given finer cells; errors if a new cell straddles
// two parent cells.
Partition refine_partition(const Partition& pi, const std::vector<int>& new_cell_of,
                           int n_new_cells);

}  // namespace sbm
