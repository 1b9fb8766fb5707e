#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace sbm {

// Index of pair (i,j), i<j, in a row-major upper-triangular array of size n(n-1)/2.
inline std::int64_t pair_index(int i, int j, int n) {
    return static_cast<std::int64_t>(i) * (2 * n - i - 1) / 2 + (j - i - 1);
}

inline std::int64_t pair_count(int n) {
    return static_cast<std::int64_t>(n) * (n - 1) / 2;
}

// Simple undirected graph, no self-loops, stored as sorted adjacency lists.
class Graph {
public:
    Graph() = default;
    // Edges are unordered pairs; duplicates and self-loops are rejected.
    static Graph from_edges(int n_nodes, const std::vector<std::pair<int, int>>& edges);

    int n_nodes() const { return n_; }
    std::int64_t edge_count() const { return m_; }
    int degree(int i) const { return static_cast<int>(adj_[i].size()); }
    const std::vector<int>& neighbors(int i) const { return adj_[i]; }
    bool has_edge(int i, int j) const;

    // Visits each edge once as (i,j) with i<j.
    template <class F>
    void for_each_edge(F f) const {
        for (int i = 0; i < n_; ++i)
            for (int j : adj_[i])
                if (j > i) f(i, j);
    }

private:
    int n_ = 0;
    std::int64_t m_ = 0;
    std::vector<std::vector<int>> adj_;
};

// Dense symmetric edge-probability matrix, upper triangle only.
class ProbabilityMatrixDense {
public:
    ProbabilityMatrixDense() = default;
    ProbabilityMatrixDense(int n_nodes, double fill);
    explicit ProbabilityMatrixDense(int n_nodes, std::vector<double> upper);

    int n_nodes() const { return n_; }
    double at(int i, int j) const { return p_[i < j ? pair_index(i, j, n_) : pair_index(j, i, n_)]; }
    void set(int i, int j, double v) { p_[i < j ? pair_index(i, j, n_) : pair_index(j, i, n_)] = v; }
    // Expected edge total M = sum_{i<j} P_ij.
    double expected_edges() const;

private:
    int n_ = 0;
    std::vector<double> p_;
};

}  // namespace sbm
