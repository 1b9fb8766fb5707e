#include "sbm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sbm/likelihood.hpp"

namespace sbm {

int misclassification_count(const ClassAssignment& z_true, const ClassAssignment& z_est) {
    const int n = z_true.n_nodes();
    if (z_est.n_nodes() != n)
        throw std::invalid_argument("misclassification_count: assignment lengths differ");
    // count[c][a] = nodes of true class a inside estimated class c
    std::vector<std::vector<int>> count(z_est.k, std::vector<int>(z_true.k, 0));
    for (int i = 0; i < n; ++i) ++count[z_est.labels[i]][z_true.labels[i]];
    std::vector<int> majority(z_est.k, 0);
    for (int c = 0; c < z_est.k; ++c)
        majority[c] = *std::max_element(count[c].begin(), count[c].end());
    int errors = 0;
    for (int i = 0; i < n; ++i)
        if (count[z_est.labels[i]][z_true.labels[i]] < majority[z_est.labels[i]]) ++errors;
    return errors;
}

double likelihood_error_stat(const Graph& g, const ProbabilityMatrixDense& p,
                             const ClassAssignment& z) {
    double m = p.expected_edges();
    if (!(m > 0.0)) throw std::invalid_argument("likelihood_error_stat: expected edge total must be positive");
    return std::abs(profile_log_likelihood(g, z) - expected_profile_log_likelihood(p, z)) / m;
}

double median(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median: empty input");
    std::sort(v.begin(), v.end());
    size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

double theil_sen_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("theil_sen_slope: length mismatch");
    std::vector<double> slopes;
    for (size_t i = 0; i < x.size(); ++i)
        for (size_t j = i + 1; j < x.size(); ++j)
            if (x[j] != x[i]) slopes.push_back((y[j] - y[i]) / (x[j] - x[i]));
    if (slopes.empty()) throw std::invalid_argument("theil_sen_slope: no distinct x values");
    return median(std::move(slopes));
}

}  // namespace sbm
