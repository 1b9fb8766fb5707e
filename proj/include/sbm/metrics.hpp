#pragma once

#include <vector>

#include "sbm/assignment.hpp"
#include "sbm/graph.hpp"

namespace sbm {

// Number of nodes whose true class is not a majority true class within their
// estimated class (ties count as majority, so they are not errors).
int misclassification_count(const ClassAssignment& z_true, const ClassAssignment& z_est);

// |L(A;z) - L_bar_P(z)| / M with M = sum_ij P_ij. Requires M > 0.
double likelihood_error_stat(const Graph& g, const ProbabilityMatrixDense& p,
                             const ClassAssignment& z);

// Median of pairwise slopes (y_j - y_i) / (x_j - x_i); ties in x skipped.
double theil_sen_slope(const std::vector<double>& x, const std::vector<double>& y);

double median(std::vector<double> v);

}  // namespace sbm
