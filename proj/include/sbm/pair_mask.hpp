#pragma once

#include <cstdint>
#include <vector>

#include "sbm/graph.hpp"

namespace sbm {

// Marks node pairs as held out. Masked pairs are excluded from every
// likelihood sum; used by cross-validation.
class PairMask {
public:
    PairMask(int n_nodes, const std::vector<std::int64_t>& heldout_pair_indices)
        : n_(n_nodes), masked_(pair_count(n_nodes), 0), partners_(n_nodes) {
        for (std::int64_t t : heldout_pair_indices) masked_[t] = 1;
        for (int i = 0; i < n_; ++i)
            for (int j = i + 1; j < n_; ++j)
                if (masked_[pair_index(i, j, n_)]) {
                    partners_[i].push_back(j);
                    partners_[j].push_back(i);
                    ++n_masked_;
                }
    }

    int n_nodes() const { return n_; }
    std::int64_t n_masked() const { return n_masked_; }
    bool masked(int i, int j) const {
        return masked_[i < j ? pair_index(i, j, n_) : pair_index(j, i, n_)] != 0;
    }
    // Nodes j such that pair (i,j) is held out.
    const std::vector<int>& masked_partners(int i) const { return partners_[i]; }

private:
    int n_ = 0;
    std::int64_t n_masked_ = 0;
    std::vector<unsigned char> masked_;
    std::vector<std::vector<int>> partners_;
};

}  // namespace sbm
