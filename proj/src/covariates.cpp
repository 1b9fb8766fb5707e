#include "sbm/covariates.hpp"

#include <algorithm>
#include <stdexcept>

namespace sbm {

void CovariateTable::add(const Covariate& cov) {
    if (static_cast<int>(cov.levels.size()) != n_)
        throw std::invalid_argument("covariate '" + cov.name + "': length != n_nodes");
    if (cov.n_levels < 2)
        throw std::invalid_argument("covariate '" + cov.name + "': needs at least 2 levels");
    for (int l : cov.levels)
        if (l < 0 || l >= cov.n_levels)
            throw std::invalid_argument("covariate '" + cov.name + "': level index out of range");
    covs_.push_back(cov);
}

void CovariateTable::add(std::string name, int n_levels, std::vector<int> levels) {
    add(Covariate{std::move(name), n_levels, std::move(levels)});
}

Covariate degree_bin_covariate(const Graph& g, int n_bins) {
    if (n_bins < 2) throw std::invalid_argument("degree_bin_covariate: n_bins must be >= 2");
    const int n = g.n_nodes();
    std::vector<int> degs(n);
    for (int i = 0; i < n; ++i) degs[i] = g.degree(i);
    std::vector<int> sorted = degs;
    std::sort(sorted.begin(), sorted.end());

    // Cut points at the t/n_bins empirical quantiles, t = 1..n_bins-1. A degree
    // equal to a cut point stays in the lower bin.
    std::vector<int> cuts(n_bins - 1);
    for (int t = 1; t < n_bins; ++t) {
        std::int64_t pos = (static_cast<std::int64_t>(t) * n + n_bins - 1) / n_bins;  // ceil(t*n/n_bins)
        cuts[t - 1] = sorted[static_cast<size_t>(pos - 1)];
    }

    Covariate cov;
    cov.name = "degree_bin";
    cov.n_levels = n_bins;
    cov.levels.resize(n);
    for (int i = 0; i < n; ++i) {
        int b = 0;
        for (int c : cuts)
            if (degs[i] > c) ++b;
        cov.levels[i] = b;
    }
    return cov;
}

}  // namespace sbm
