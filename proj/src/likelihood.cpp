#include "sbm/likelihood.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace sbm {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double bernoulli_kl(double p, double q) {
    if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("bernoulli_kl: arguments must lie in [0,1]");
    if (p == q) return 0.0;
    if (q <= 0.0 || q >= 1.0) return kInf;
    double v = 0.0;
    if (p > 0.0) v += p * std::log(p / q);
    if (p < 1.0) v += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
    return v;
}

double bernoulli_kl_shift(double q, double delta) {
    double p = q + delta;
    if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("bernoulli_kl_shift: arguments must lie in [0,1]");
    if (delta == 0.0) return 0.0;
    double u = delta / q, v = delta / (1.0 - q);
    if (std::abs(u) >= 1e-4 || std::abs(v) >= 1e-4) return bernoulli_kl(p, q);
    // Taylor core once the O(delta) parts cancel exactly:
    //   q (u^2/2 - u^3/6 + u^4/12) + (1-q) (v^2/2 + v^3/6 + v^4/12)
    return q * u * u * (0.5 - u / 6.0 + u * u / 12.0) +
           (1.0 - q) * v * v * (0.5 + v / 6.0 + v * v / 12.0);
}

BlockMatrix theta_hat(const BlockStats& stats) {
    const int k = stats.k();
    BlockMatrix th(k);
    for (int a = 0; a < k; ++a)
        for (int b = a; b < k; ++b) {
            std::int64_t n = stats.pairs(a, b);
            if (n > 0)
                th.set(a, b, static_cast<double>(stats.edges(a, b)) / static_cast<double>(n));
            else
                th.set_undefined(a, b);
        }
    return th;
}

std::vector<double> block_prob_sums(const ProbabilityMatrixDense& p, const ClassAssignment& z) {
    if (p.n_nodes() != z.n_nodes())
        throw std::invalid_argument("block_prob_sums: dimension mismatch");
    const int k = z.k;
    const int n = p.n_nodes();
    std::vector<double> s(static_cast<size_t>(k) * k, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            int a = z.labels[i], b = z.labels[j];
            double v = p.at(i, j);
            s[static_cast<size_t>(a) * k + b] += v;
            if (a != b) s[static_cast<size_t>(b) * k + a] += v;
        }
    return s;
}

BlockMatrix theta_bar(const ProbabilityMatrixDense& p, const ClassAssignment& z) {
    const int k = z.k;
    BlockMatrix tb(k);
    std::vector<double> s = block_prob_sums(p, z);
    std::vector<int> sizes = z.class_sizes();
    for (int a = 0; a < k; ++a)
        for (int b = a; b < k; ++b) {
            std::int64_t n = (a == b) ? static_cast<std::int64_t>(sizes[a]) * (sizes[a] - 1) / 2
                                      : static_cast<std::int64_t>(sizes[a]) * sizes[b];
            if (n > 0)
                tb.set(a, b, s[static_cast<size_t>(a) * k + b] / static_cast<double>(n));
            else
                tb.set_undefined(a, b);
        }
    return tb;
}

double log_likelihood(const Graph& g, const ClassAssignment& z, const BlockMatrix& theta) {
    if (z.n_nodes() != g.n_nodes() || theta.k() != z.k)
        throw std::invalid_argument("log_likelihood: dimension mismatch");
    if (!theta.all_in_unit_interval())
        throw std::invalid_argument("log_likelihood: theta is not a probability matrix");
    BlockStats stats = block_stats(g, z);
    double total = 0.0;
    for (int a = 0; a < theta.k(); ++a)
        for (int b = a; b < theta.k(); ++b) {
            std::int64_t n = stats.pairs(a, b);
            if (n == 0) continue;
            std::int64_t e = stats.edges(a, b);
            if (!theta.is_defined(a, b))
                throw std::invalid_argument("log_likelihood: theta undefined on occupied block");
            double t = theta.at(a, b);
            if ((e > 0 && t == 0.0) || (e < n && t == 1.0)) return -kInf;
            if (e > 0) total += static_cast<double>(e) * std::log(t);
            if (e < n) total += static_cast<double>(n - e) * std::log(1.0 - t);
        }
    return total;
}

double profile_loglik_from_stats(const BlockStats& stats) {
    double total = 0.0;
    for (int a = 0; a < stats.k(); ++a)
        for (int b = a; b < stats.k(); ++b) {
            std::int64_t n = stats.pairs(a, b);
            if (n > 0) total += block_entropy_term(stats.edges(a, b), n);
        }
    return total;
}

double profile_log_likelihood(const Graph& g, const ClassAssignment& z) {
    return profile_loglik_from_stats(block_stats(g, z));
}

double expected_profile_log_likelihood(const ProbabilityMatrixDense& p, const ClassAssignment& z) {
    std::vector<double> s = block_prob_sums(p, z);
    std::vector<int> sizes = z.class_sizes();
    double total = 0.0;
    const int k = z.k;
    for (int a = 0; a < k; ++a)
        for (int b = a; b < k; ++b) {
            std::int64_t n = (a == b) ? static_cast<std::int64_t>(sizes[a]) * (sizes[a] - 1) / 2
                                      : static_cast<std::int64_t>(sizes[a]) * sizes[b];
            if (n > 0) total += block_entropy_term_real(s[static_cast<size_t>(a) * k + b], n);
        }
    return total;
}

LikelihoodGap likelihood_gap_decomposition(const Graph& g, const ProbabilityMatrixDense& p,
                                           const ClassAssignment& z) {
    if (g.n_nodes() != p.n_nodes() || g.n_nodes() != z.n_nodes())
        throw std::invalid_argument("likelihood_gap_decomposition: dimension mismatch");
    const int k = z.k;
    BlockStats stats = block_stats(g, z);
    std::vector<double> s = block_prob_sums(p, z);

    double kl = 0.0, x = 0.0, ex = 0.0;
    for (int a = 0; a < k; ++a)
        for (int b = a; b < k; ++b) {
            std::int64_t n = stats.pairs(a, b);
            if (n == 0) continue;
            double sb = s[static_cast<size_t>(a) * k + b];
            double tbar = sb / static_cast<double>(n);
            if (tbar <= 0.0 || tbar >= 1.0)
                throw std::invalid_argument("likelihood_gap_decomposition: theta_bar at boundary in block (" +
                                            std::to_string(a) + "," + std::to_string(b) + ")");
            double that = static_cast<double>(stats.edges(a, b)) / static_cast<double>(n);
            kl += static_cast<double>(n) * bernoulli_kl(that, tbar);
            double w = std::log(tbar / (1.0 - tbar));
            x += static_cast<double>(stats.edges(a, b)) * w;
            ex += sb * w;
        }
    return {kl, x - ex};
}

}  // namespace sbm
