#pragma once

#include <string>
#include <vector>

#include "sbm/graph.hpp"

namespace sbm {

// One categorical node attribute: levels[i] in {0,...,n_levels-1}.
struct Covariate {
    std::string name;
    int n_levels = 0;
    std::vector<int> levels;
};

// Named categorical covariates over a fixed node set.
class CovariateTable {
public:
    explicit CovariateTable(int n_nodes) : n_(n_nodes) {}

    void add(const Covariate& cov);
    void add(std::string name, int n_levels, std::vector<int> levels);

    int n_nodes() const { return n_; }
    int n_covariates() const { return static_cast<int>(covs_.size()); }
    const Covariate& covariate(int c) const { return covs_[c]; }
    const std::vector<Covariate>& covariates() const { return covs_; }

private:
    int n_ = 0;
    std::vector<Covariate> covs_;
};

// Bins nodes by degree via empirical quantile cut points; degrees tied with a
// cut point fall in the lower bin. Empty bins are possible (ties), but the
// covariate always declares n_bins levels.
Covariate degree_bin_covariate(const Graph& g, int n_bins = 8);

}  // namespace sbm
