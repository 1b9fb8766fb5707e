#include "sbm/block_stats.hpp"

#include <stdexcept>

namespace sbm {

BlockStats block_stats(const Graph& g, const ClassAssignment& z, const PairMask* mask) {
    if (z.n_nodes() != g.n_nodes())
        throw std::invalid_argument("block_stats: assignment length does not match graph");
    const int k = z.k;
    std::vector<std::int64_t> n(static_cast<size_t>(k) * k, 0);
    std::vector<std::int64_t> e(static_cast<size_t>(k) * k, 0);
    std::vector<int> sizes = z.class_sizes();

    auto at = [k](std::vector<std::int64_t>& m, int a, int b) -> std::int64_t& {
        return m[static_cast<size_t>(a) * k + b];
    };

    for (int a = 0; a < k; ++a) {
        at(n, a, a) = static_cast<std::int64_t>(sizes[a]) * (sizes[a] - 1) / 2;
        for (int b = a + 1; b < k; ++b)
            at(n, a, b) = at(n, b, a) = static_cast<std::int64_t>(sizes[a]) * sizes[b];
    }
    if (mask) {
        for (int i = 0; i < g.n_nodes(); ++i)
            for (int j : mask->masked_partners(i))
                if (j > i) {
                    int a = z.labels[i], b = z.labels[j];
                    --at(n, a, b);
                    if (a != b) --at(n, b, a);
                }
    }
    g.for_each_edge([&](int i, int j) {
        if (mask && mask->masked(i, j)) return;
        int a = z.labels[i], b = z.labels[j];
        ++at(e, a, b);
        if (a != b) ++at(e, b, a);
    });
    return BlockStats(k, std::move(n), std::move(e), std::move(sizes));
}

void BlockStats::apply_move(int from, int to, const std::vector<std::int64_t>& d,
                            const std::vector<std::int64_t>& m) {
    if (from == to) return;
    for (int b = 0; b < k_; ++b) {
        if (b == from || b == to) continue;
        add(e_, from, b, -d[b]);
        add(e_, to, b, d[b]);
        add(n_, from, b, -m[b]);
        add(n_, to, b, m[b]);
    }
    add(e_, from, from, -d[from]);
    add(e_, to, to, d[to]);
    add(e_, from, to, d[from] - d[to]);
    add(n_, from, from, -m[from]);
    add(n_, to, to, m[to]);
    add(n_, from, to, m[from] - m[to]);
    --sizes_[from];
    ++sizes_[to];
}

std::int64_t BlockStats::total_pairs() const {
    std::int64_t t = 0;
    for (int a = 0; a < k_; ++a)
        for (int b = a; b < k_; ++b) t += pairs(a, b);
    return t;
}

std::int64_t BlockStats::total_edges() const {
    std::int64_t t = 0;
    for (int a = 0; a < k_; ++a)
        for (int b = a; b < k_; ++b) t += edges(a, b);
    return t;
}

void node_class_profile(const Graph& g, const ClassAssignment& z, int node, const PairMask* mask,
                        std::vector<std::int64_t>& edges_by_class,
                        std::vector<std::int64_t>& pairs_by_class) {
    if (node < 0 || node >= g.n_nodes()) throw std::invalid_argument("node index out of range");
    const int k = z.k;
    edges_by_class.assign(k, 0);
    pairs_by_class.assign(k, 0);
    const std::vector<int> sizes = z.class_sizes();
    for (int b = 0; b < k; ++b) pairs_by_class[b] = sizes[b];
    pairs_by_class[z.labels[node]] -= 1;  // no pair with itself
    for (int j : g.neighbors(node)) {
        if (mask && mask->masked(node, j)) continue;
        ++edges_by_class[z.labels[j]];
    }
    if (mask)
        for (int j : mask->masked_partners(node)) --pairs_by_class[z.labels[j]];
}

}  // namespace sbm
