#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

#include "sbm/assignment.hpp"
#include "sbm/block_matrix.hpp"
#include "sbm/block_stats.hpp"
#include "sbm/graph.hpp"

namespace sbm {

// KL divergence of Bernoulli(q) from Bernoulli(p), in nats. +infinity when q
// is 0 or 1 while p differs. Natural log throughout.
double bernoulli_kl(double p, double q);

// bernoulli_kl(q + delta, q) with full relative accuracy: the direct form
// cancels catastrophically for |delta| << q(1-q), where the value is
// ~ delta^2 / (2 q (1-q)).
double bernoulli_kl_shift(double q, double delta);

// x * ln(x), with 0 ln 0 = 0.
inline double xlnx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// n * { t ln t + (1-t) ln(1-t) } for t = e/n, written so the same expression is
// shared by every caller (direct and table-memoized paths must agree bitwise).
inline double block_entropy_term(std::int64_t e, std::int64_t n) {
    return xlnx(static_cast<double>(e)) + xlnx(static_cast<double>(n - e)) -
           xlnx(static_cast<double>(n));
}

// Continuous counterpart with block probability mass s = sum of P over the block.
inline double block_entropy_term_real(double s, std::int64_t n) {
    double t = s / static_cast<double>(n);
    return static_cast<double>(n) * (xlnx(t) + xlnx(1.0 - t));
}

// Sample block proportions e_ab / n_ab; empty blocks are undefined-marked.
BlockMatrix theta_hat(const BlockStats& stats);

// Block averages of P under z; empty blocks undefined-marked.
BlockMatrix theta_bar(const ProbabilityMatrixDense& p, const ClassAssignment& z);

// Per-block sums of P_ij (row-major k*k, symmetric), companion to block_stats.
std::vector<double> block_prob_sums(const ProbabilityMatrixDense& p, const ClassAssignment& z);

// Blockmodel log-likelihood L(A; z, theta). -infinity when a block pins an
// observed edge at theta 0 (or a non-edge at theta 1); empty blocks contribute 0.
double log_likelihood(const Graph& g, const ClassAssignment& z, const BlockMatrix& theta);

// Profile log-likelihood L(A; z) = sup_theta L(A; z, theta).
double profile_log_likelihood(const Graph& g, const ClassAssignment& z);
double profile_loglik_from_stats(const BlockStats& stats);

// Expected profile log-likelihood under independent Bernoulli(P_ij) data.
double expected_profile_log_likelihood(const ProbabilityMatrixDense& p, const ClassAssignment& z);

// Splits L(A;z) - L_bar_P(z) into the block KL sum and the centered linear
// statistic X - E(X); the two must add back to the likelihood gap.
struct LikelihoodGap {
    double kl_term;
    double x_term;
};
LikelihoodGap likelihood_gap_decomposition(const Graph& g, const ProbabilityMatrixDense& p,
                                           const ClassAssignment& z);

}  // namespace sbm
