#include "sbm/synth.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "sbm/likelihood.hpp"

namespace sbm {

namespace {

std::vector<int> equal_class_labels(int n, int k) {
    // N mod K classes of size ceil(N/K) first, the rest floor(N/K).
    std::vector<int> labels(n);
    int big = n % k, size_big = n / k + 1, size_small = n / k;
    int pos = 0;
    for (int c = 0; c < k; ++c) {
        int sz = c < big ? size_big : size_small;
        for (int t = 0; t < sz; ++t) labels[pos++] = c;
    }
    return labels;
}

}  // namespace

PlantedModel make_planted(int n, int k, double alpha, double beta_p) {
    if (n < 1 || k < 1 || k > n) throw std::invalid_argument("make_planted: need 1 <= K <= N");
    if (!(beta_p > 0.0) || alpha < 0.0 || !(alpha + beta_p < 1.0))
        throw std::invalid_argument("make_planted: need beta > 0, alpha >= 0, alpha + beta < 1");
    PlantedModel m;
    m.n_nodes = n;
    m.k = k;
    m.z_bar = ClassAssignment(k, equal_class_labels(n, k));
    m.alpha = alpha;
    m.beta_p = beta_p;
    m.theta_bar = BlockMatrix(k, beta_p);
    for (int a = 0; a < k; ++a) m.theta_bar.set(a, a, alpha + beta_p);
    return m;
}

Graph sample_graph(const ProbabilityMatrixDense& p, std::uint64_t seed) {
    const int n = p.n_nodes();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (unif(rng) < p.at(i, j)) edges.emplace_back(i, j);
    return Graph::from_edges(n, edges);
}

std::pair<Graph, ProbabilityMatrixDense> gen_er(int n, double p, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_er: n must be >= 1");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("gen_er: p must lie in [0,1]");
    ProbabilityMatrixDense pm(n, p);
    return {sample_graph(pm, seed), std::move(pm)};
}

std::pair<Graph, ProbabilityMatrixDense> gen_blockmodel(const PlantedModel& m, std::uint64_t seed) {
    ProbabilityMatrixDense pm(m.n_nodes, 0.0);
    for (int i = 0; i < m.n_nodes; ++i)
        for (int j = i + 1; j < m.n_nodes; ++j)
            pm.set(i, j, m.theta_bar.at(m.z_bar.labels[i], m.z_bar.labels[j]));
    return {sample_graph(pm, seed), std::move(pm)};
}

PlantedModel calibrate_planted(int n, int k, double target_m, double gamma) {
    if (n < 2 || k < 1 || k > n) throw std::invalid_argument("calibrate_planted: need 1 <= K <= N, N >= 2");
    const double n_pairs = static_cast<double>(pair_count(n));
    if (!(target_m > 0.0) || !(target_m < n_pairs))
        throw std::runtime_error("calibrate_planted: target edge total must lie in (0, C(N,2))");
    const double target_d = target_m * std::pow(static_cast<double>(k), gamma) / (20.0 * n * n);

    std::vector<int> sizes = ClassAssignment(k, equal_class_labels(n, k)).class_sizes();
    double s_diag = 0.0;
    for (int sz : sizes) s_diag += 0.5 * sz * (sz - 1.0);
    if (s_diag <= 0.0)  // K = N: no within-class pairs, alpha has no effect on M
        throw std::runtime_error("calibrate_planted: no within-class pairs (K = N), divergence target unreachable");

    // Inner: alpha solving s_diag*alpha + C(N,2)*beta = target_m at fixed beta.
    // Bisected to interval exhaustion: near the zero-divergence limit alpha is
    // orders below target_m's scale, so a residual-based early exit is too lax.
    auto solve_alpha = [&](double beta) {
        double lo = 0.0, hi = 1.0 - beta;
        for (int it = 0; it < 200 && lo < hi; ++it) {
            double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            double resid = s_diag * mid + n_pairs * beta - target_m;
            if (resid == 0.0) return mid;
            (resid < 0.0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };
    auto divergence_at = [&](double beta) {
        double alpha = solve_alpha(beta);
        return bernoulli_kl_shift((alpha + 2.0 * beta) / 2.0, alpha / 2.0);
    };

    // Outer: divergence is decreasing in beta. beta_hi puts all mass off-
    // diagonal (alpha ~ 0, divergence ~ 0); beta_lo is forced by alpha+beta < 1.
    double beta_hi = target_m / n_pairs;
    double beta_lo = target_m > s_diag ? (target_m - s_diag) / (n_pairs - s_diag) : 0.0;
    const double pad = 1e-15 * std::max(1.0, beta_hi);
    beta_lo += pad;
    if (divergence_at(beta_lo) < target_d)
        throw std::runtime_error(
            "calibrate_planted: divergence target " + std::to_string(target_d) +
            " unreachable at edge total " + std::to_string(target_m) + " (alpha + beta < 1 binds)");
    double lo = beta_lo, hi = beta_hi;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (divergence_at(mid) > target_d ? lo : hi) = mid;
        if (hi - lo <= 1e-18 * std::max(1.0, hi)) break;
    }
    double beta = 0.5 * (lo + hi);
    double alpha = solve_alpha(beta);

    // Forward re-verification of both equations on the returned parameters.
    // The divergence normalizer is floored at machine epsilon: below that the
    // target is beyond the resolution of (alpha, beta) in double precision.
    double m_resid = std::abs(s_diag * alpha + n_pairs * beta - target_m) / std::max(1.0, target_m);
    double d_resid = std::abs(bernoulli_kl_shift((alpha + 2.0 * beta) / 2.0, alpha / 2.0) - target_d) /
                     std::max(target_d, std::numeric_limits<double>::epsilon());
    if (m_resid > 1e-9 || d_resid > 1e-9)
        throw std::runtime_error("calibrate_planted: forward check failed (edge-total residual " +
                                 std::to_string(m_resid) + ", divergence residual " +
                                 std::to_string(d_resid) + ")");
    return make_planted(n, k, alpha, beta);
}

std::vector<SchedulePoint> expand_schedule(const Schedule& s) {
    if (!(s.log_base > 1.0)) throw std::invalid_argument("expand_schedule: log base must exceed 1");
    std::vector<SchedulePoint> out;
    out.reserve(s.n_values.size());
    for (int n : s.n_values) {
        if (n < 2) throw std::runtime_error("expand_schedule: N must be >= 2");
        SchedulePoint pt;
        pt.n = n;
        pt.m = n * std::pow(std::log(static_cast<double>(n)) / std::log(s.log_base), s.c);
        pt.k = static_cast<int>(std::ceil(std::pow(static_cast<double>(n), s.a)));
        if (pt.m >= static_cast<double>(pair_count(n)))
            throw std::runtime_error("expand_schedule: M(" + std::to_string(n) + ") = " +
                                     std::to_string(pt.m) + " >= C(N,2)");
        pt.divergence_target = pt.m * std::pow(static_cast<double>(pt.k), s.gamma) / (20.0 * n * n);
        out.push_back(pt);
    }
    return out;
}

}  // namespace sbm
