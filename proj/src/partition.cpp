#include "sbm/partition.hpp"

#include <stdexcept>

#include "sbm/likelihood.hpp"

namespace sbm {

Partition::Partition(int n_nodes_, int n_cells_, std::vector<int> cell_of_)
    : n_nodes(n_nodes_), n_cells(n_cells_), cell_of(std::move(cell_of_)) {
    if (static_cast<std::int64_t>(cell_of.size()) != pair_count(n_nodes))
        throw std::invalid_argument("partition: must map every pair");
    if (n_cells < 1) throw std::invalid_argument("partition: need at least one cell");
    for (int c : cell_of)
        if (c < 0 || c >= n_cells) throw std::invalid_argument("partition: cell index out of range");
}

Partition induced_partition(const ClassAssignment& z) {
    const int n = z.n_nodes();
    const int k = z.k;
    std::vector<int> cells(pair_count(n));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            int a = z.labels[i], b = z.labels[j];
            if (a > b) std::swap(a, b);
            cells[pair_index(i, j, n)] = a * k + b;
        }
    return Partition(n, k * k, std::move(cells));
}

double partition_expected_log_likelihood(const ProbabilityMatrixDense& p, const Partition& pi) {
    if (p.n_nodes() != pi.n_nodes)
        throw std::invalid_argument("partition likelihood: dimension mismatch");
    std::vector<double> sum(pi.n_cells, 0.0);
    std::vector<std::int64_t> cnt(pi.n_cells, 0);
    const int n = pi.n_nodes;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            int c = pi.cell_of[pair_index(i, j, n)];
            sum[c] += p.at(i, j);
            ++cnt[c];
        }
    double total = 0.0;
    for (int c = 0; c < pi.n_cells; ++c)
        if (cnt[c] > 0) total += block_entropy_term_real(sum[c], cnt[c]);
    return total;
}

Partition refine_partition(const Partition& pi, const std::vector<int>& new_cell_of,
                           int n_new_cells) {
    if (new_cell_of.size() != pi.cell_of.size())
        throw std::invalid_argument("refine_partition: must map every pair");
    std::vector<int> parent(n_new_cells, -1);
    for (size_t t = 0; t < new_cell_of.size(); ++t) {
        int c = new_cell_of[t];
        if (c < 0 || c >= n_new_cells)
            throw std::invalid_argument("refine_partition: cell index out of range");
        if (parent[c] == -1)
            parent[c] = pi.cell_of[t];
        else if (parent[c] != pi.cell_of[t])
            throw std::invalid_argument("refine_partition: new cell crosses parent-cell boundary");
    }
    return Partition(pi.n_nodes, n_new_cells, new_cell_of);
}

}  // namespace sbm
