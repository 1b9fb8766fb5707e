#pragma once

#include <cstdint>
#include <vector>

#include "sbm/assignment.hpp"
#include "sbm/graph.hpp"
#include "sbm/pair_mask.hpp"

namespace sbm {

// Block sufficient statistics: pair counts n_ab, edge counts e_ab, class sizes.
// Supports in-place single-node moves; a given instance must be owned by one
// thread at a time.
class BlockStats {
public:
    BlockStats() = default;
    BlockStats(int k, std::vector<std::int64_t> pair_counts, std::vector<std::int64_t> edge_counts,
               std::vector<int> class_sizes)
        : k_(k),
          n_(std::move(pair_counts)),
          e_(std::move(edge_counts)),
          sizes_(std::move(class_sizes)) {}

    int k() const { return k_; }
    std::int64_t pairs(int a, int b) const { return n_[idx(a, b)]; }
    std::int64_t edges(int a, int b) const { return e_[idx(a, b)]; }
    int class_size(int a) const { return sizes_[a]; }
    const std::vector<int>& class_sizes() const { return sizes_; }

    // Moves one node from class `from` to class `to`. `edges_by_class[b]` is the
    // number of (unmasked) edges from the node into class b; `pairs_by_class[b]`
    // the number of (unmasked) pairs it forms with class b, the node itself
    // excluded. Caller keeps the assignment vector in sync.
    void apply_move(int from, int to, const std::vector<std::int64_t>& edges_by_class,
                    const std::vector<std::int64_t>& pairs_by_class);

    std::int64_t total_pairs() const;
    std::int64_t total_edges() const;

private:
    size_t idx(int a, int b) const { return static_cast<size_t>(a) * k_ + b; }
    void add(std::vector<std::int64_t>& m, int a, int b, std::int64_t v) {
        m[idx(a, b)] += v;
        if (a != b) m[idx(b, a)] += v;
    }

    int k_ = 0;
    std::vector<std::int64_t> n_;
    std::vector<std::int64_t> e_;
    std::vector<int> sizes_;
};

// Exact n_ab, e_ab, N_a for graph g under assignment z. With a mask, held-out
// pairs are excluded from both counts.
BlockStats block_stats(const Graph& g, const ClassAssignment& z, const PairMask* mask = nullptr);

// Per-class edge and pair counts seen from one node (inputs to apply_move and
// to the incremental profile-likelihood delta).
void node_class_profile(const Graph& g, const ClassAssignment& z, int node, const PairMask* mask,
                        std::vector<std::int64_t>& edges_by_class,
                        std::vector<std::int64_t>& pairs_by_class);

}  // namespace sbm
