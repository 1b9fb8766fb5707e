#include "sbm/bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "sbm/likelihood.hpp"

namespace sbm {

double kl_confidence_bound(int n, int k, double delta) {
    if (n < 1 || k < 1 || k > n) throw std::invalid_argument("kl_confidence_bound: need 1 <= k <= n");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("kl_confidence_bound: delta must lie in (0,1)");
    double nn = n, kk = k;
    return nn * std::log(kk) + (kk * kk + kk) * std::log(nn / kk + 1.0) + std::log(1.0 / delta);
}

double rms_bound_from_kl(double epsilon_kl) {
    if (epsilon_kl < 0.0) throw std::invalid_argument("rms_bound_from_kl: epsilon must be >= 0");
    return std::sqrt(epsilon_kl / 2.0);
}

BoundReport make_bound_report(int n, int k, double delta) {
    double eps = kl_confidence_bound(n, k, delta);
    double pairs = static_cast<double>(pair_count(n));
    return {n, k, delta, eps, eps / pairs, rms_bound_from_kl(eps) / std::sqrt(pairs)};
}

namespace {

template <class F>
double blockwise_error(const Graph& g, const ProbabilityMatrixDense& p, const ClassAssignment& z,
                       F per_block) {
    if (g.n_nodes() != p.n_nodes() || g.n_nodes() != z.n_nodes())
        throw std::invalid_argument("observed error: dimension mismatch");
    BlockStats stats = block_stats(g, z);
    std::vector<double> s = block_prob_sums(p, z);
    const int k = z.k;
    double total = 0.0;
    for (int a = 0; a < k; ++a)
        for (int b = a; b < k; ++b) {
            std::int64_t n = stats.pairs(a, b);
            if (n == 0) continue;
            double that = static_cast<double>(stats.edges(a, b)) / static_cast<double>(n);
            double tbar = s[static_cast<size_t>(a) * k + b] / static_cast<double>(n);
            total += per_block(n, that, tbar);
        }
    return total;
}

}  // namespace

double observed_kl_error(const Graph& g, const ProbabilityMatrixDense& p,
                         const ClassAssignment& z) {
    return blockwise_error(g, p, z, [](std::int64_t n, double that, double tbar) {
        return static_cast<double>(n) * bernoulli_kl(that, tbar);
    });
}

double observed_rms_error(const Graph& g, const ProbabilityMatrixDense& p,
                          const ClassAssignment& z) {
    double ss = blockwise_error(g, p, z, [](std::int64_t n, double that, double tbar) {
        return static_cast<double>(n) * (that - tbar) * (that - tbar);
    });
    return std::sqrt(ss);
}

}  // namespace sbm
