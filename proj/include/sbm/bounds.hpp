#pragma once

#include "sbm/assignment.hpp"
#include "sbm/graph.hpp"

namespace sbm {

// Finite-sample 1-delta confidence bound on the block KL error
// sum_{a<=b} n_ab D(theta_hat_ab || theta_bar_ab), uniform over assignments:
//   N ln K + (K^2 + K) ln(N/K + 1) + ln(1/delta), in nats.
double kl_confidence_bound(int n, int k, double delta);

// Pinsker conversion: the KL bound epsilon caps the weighted RMS block error
// { sum n_ab (theta_hat - theta_bar)^2 }^{1/2} at sqrt(epsilon / 2).
double rms_bound_from_kl(double epsilon_kl);

// Realized error functionals at a given assignment; empty blocks skipped.
// A boundary theta_bar with disagreeing theta_hat yields +infinity.
double observed_kl_error(const Graph& g, const ProbabilityMatrixDense& p, const ClassAssignment& z);
double observed_rms_error(const Graph& g, const ProbabilityMatrixDense& p, const ClassAssignment& z);

struct BoundReport {
    int n_nodes;
    int k;
    double delta;
    double epsilon_kl;             // nats
    double epsilon_kl_normalized;  // divided by C(N,2)
    double epsilon_rms_normalized; // sqrt(eps/2) / sqrt(C(N,2))
};

BoundReport make_bound_report(int n, int k, double delta);

}  // namespace sbm
