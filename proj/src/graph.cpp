#include "sbm/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace sbm {

Graph Graph::from_edges(int n_nodes, const std::vector<std::pair<int, int>>& edges) {
    if (n_nodes <= 0) throw std::invalid_argument("graph: n_nodes must be positive");
    Graph g;
    g.n_ = n_nodes;
    g.adj_.assign(n_nodes, {});
    for (auto [i, j] : edges) {
        if (i == j) throw std::invalid_argument("graph: self-loop at node " + std::to_string(i));
        if (i < 0 || j < 0 || i >= n_nodes || j >= n_nodes)
            throw std::invalid_argument("graph: node id out of range");
        g.adj_[i].push_back(j);
        g.adj_[j].push_back(i);
    }
    for (int i = 0; i < n_nodes; ++i) {
        auto& a = g.adj_[i];
        std::sort(a.begin(), a.end());
        if (std::adjacent_find(a.begin(), a.end()) != a.end())
            throw std::invalid_argument("graph: duplicate edge at node " + std::to_string(i));
        g.m_ += static_cast<std::int64_t>(a.size());
    }
    g.m_ /= 2;
    return g;
}

bool Graph::has_edge(int i, int j) const {
    const auto& a = adj_[i];
    return std::binary_search(a.begin(), a.end(), j);
}

ProbabilityMatrixDense::ProbabilityMatrixDense(int n_nodes, double fill)
    : n_(n_nodes), p_(pair_count(n_nodes), fill) {
    if (fill < 0.0 || fill > 1.0) throw std::invalid_argument("probability out of [0,1]");
}

ProbabilityMatrixDense::ProbabilityMatrixDense(int n_nodes, std::vector<double> upper)
    : n_(n_nodes), p_(std::move(upper)) {
    if (static_cast<std::int64_t>(p_.size()) != pair_count(n_nodes))
        throw std::invalid_argument("probability matrix: wrong triangle length");
    for (double v : p_)
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("probability out of [0,1]");
}

double ProbabilityMatrixDense::expected_edges() const {
    double m = 0.0;
    for (double v : p_) m += v;
    return m;
}

}  // namespace sbm
