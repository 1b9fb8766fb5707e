#include "sbm/pair_design.hpp"

namespace sbm {

PairDesign::PairDesign(const CovariateTable& cov) {
    for (const Covariate& c : cov.covariates()) {
        offsets_.push_back(dim_);
        n_levels_.push_back(c.n_levels);
        levels_.push_back(c.levels);
        dim_ += c.n_levels - 1;
    }
}

}  // namespace sbm
