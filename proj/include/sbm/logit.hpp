#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "sbm/assignment.hpp"
#include "sbm/covariates.hpp"
#include "sbm/gibbs.hpp"
#include "sbm/graph.hpp"
#include "sbm/pair_design.hpp"
#include "sbm/pair_mask.hpp"

namespace sbm {

// Covariate-adjusted blockmodel on the log-odds scale:
//   log P_ij / (1 - P_ij) = theta_tilde[z_i][z_j] + x(i,j)^T beta.
struct LogitModel {
    int k = 1;
    std::vector<double> theta_tilde;  // k*k row-major, symmetric
    std::vector<double> beta;
    ClassAssignment z;

    double theta(int a, int b) const { return theta_tilde[static_cast<size_t>(a) * k + b]; }
    void set_theta(int a, int b, double v) {
        theta_tilde[static_cast<size_t>(a) * k + b] = v;
        theta_tilde[static_cast<size_t>(b) * k + a] = v;
    }
};

// ln(1 + e^x), overflow-safe.
inline double softplus(double x) {
    return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

inline double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

// Sum over unmasked pairs i<j of A_ij eta_ij - softplus(eta_ij).
double logit_log_likelihood(const Graph& g, const LogitModel& m, const PairDesign& design,
                            const PairMask* mask = nullptr);

struct LogitFitReport {
    std::vector<double> theta_tilde;
    std::vector<double> beta;
    double loglik = 0.0;  // unpenalized objective at the returned iterate
    int iterations = 0;
    double grad_max_norm = 0.0;
    bool ridged = false;  // rank deficiency or separation handled with an L2 ridge
    std::string note;     // what triggered the ridge; empty otherwise
};

// Damped-Newton MLE of (theta_tilde, beta) at fixed z. Converges when the
// gradient max-norm drops below 1e-8 or after 100 iterations. Unsupported
// coordinates (empty blocks, unused levels) or diverging parameters switch on
// a 1e-8 L2 ridge, reported via `ridged`/`note`. Throws on a non-finite
// objective that line-search backtracking cannot repair.
LogitFitReport optimize_theta_beta(const Graph& g, const ClassAssignment& z,
                                   const PairDesign& design, const LogitModel* init = nullptr,
                                   const PairMask* mask = nullptr);

struct AlternatingFit {
    LogitModel model;
    double loglik = 0.0;
    std::vector<double> trace;  // best objective after each alternation round
    bool ridged = false;
};

// Fits z first on the plain blockmodel, then alternates Metropolis sweeps on z
// (fixed theta_tilde, beta) with Newton refits (fixed z) until a full round
// improves the best objective by less than 1e-6 relative, or max_rounds.
// Returns the best model visited.
AlternatingFit alternating_fit(const Graph& g, const CovariateTable& cov, int k,
                               const SamplerConfig& cfg, const PairMask* mask = nullptr,
                               int max_rounds = 20);

// -2 loglik + {K(K+1)/2 + dim_beta} ln C(N,2).
double bic_score(const Graph& g, const LogitModel& m, const PairDesign& design);

struct CrossValidation {
    double mean_heldout_nll = 0.0;  // primary: per-pair negative Bernoulli log-lik
    double misclass_rate = 0.0;     // secondary: threshold-0.5 edge prediction error
};

// k-fold holdout over node pairs; held-out pairs are excluded from every
// likelihood sum during fitting and scored via the fitted model.
CrossValidation cross_validate(const Graph& g, const CovariateTable& cov, int k, int folds,
                               const SamplerConfig& cfg, std::uint64_t seed);

}  // namespace sbm
