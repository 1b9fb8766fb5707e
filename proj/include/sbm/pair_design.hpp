#pragma once

#include <vector>

#include "sbm/covariates.hpp"

namespace sbm {

// Maps a node pair to coefficient space. Per covariate the pair feature is
// "both endpoints share level l", effects-coded: levels 0..L-2 get one free
// coordinate each (+1 when shared), a shared last level maps to -1 on all of
// them, and non-sharing pairs contribute nothing. dim_beta = sum_c (L_c - 1),
// and the implied full-level coefficients sum to zero within each covariate.
class PairDesign {
public:
    explicit PairDesign(const CovariateTable& cov);

    int dim_beta() const { return dim_; }
    int n_covariates() const { return static_cast<int>(levels_.size()); }
    // Free-coordinate offset of covariate c's block.
    int offset(int c) const { return offsets_[c]; }

    // Calls f(coordinate, value) for every nonzero coordinate of the pair (i,j).
    template <class F>
    void for_each_feature(int i, int j, F f) const {
        for (size_t c = 0; c < levels_.size(); ++c) {
            int li = levels_[c][i];
            if (li != levels_[c][j]) continue;
            int free_count = n_levels_[c] - 1;
            if (li < free_count)
                f(offsets_[c] + li, 1.0);
            else
                for (int t = 0; t < free_count; ++t) f(offsets_[c] + t, -1.0);
        }
    }

    double dot(int i, int j, const std::vector<double>& beta) const {
        double s = 0.0;
        for_each_feature(i, j, [&](int coord, double v) { s += v * beta[coord]; });
        return s;
    }

private:
    int dim_ = 0;
    std::vector<int> offsets_;
    std::vector<int> n_levels_;
    std::vector<std::vector<int>> levels_;
};

}  // namespace sbm
