#include "sbm/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <random>
#include <stdexcept>

#include "sbm/likelihood.hpp"
#include "sbm/seeding.hpp"

namespace sbm {

int SamplerConfig::resolved_sweeps(int n_nodes) const {
    if (n_sweeps > 0) return n_sweeps;
    return static_cast<int>(std::ceil(50.0 * std::log(std::max(n_nodes, 2))));
}

double SamplerConfig::beta_at(int sweep) const {
    int total = n_sweeps > 0 ? n_sweeps : 1;
    if (total <= 1 || beta_start == beta_end) return beta_start;
    double f = static_cast<double>(sweep) / static_cast<double>(total - 1);
    return beta_start * std::pow(beta_end / beta_start, f);
}

namespace {

// Memoized v ln v over integers; lookups reproduce xlnx(double(v)) bitwise.
class XlnxTable {
public:
    explicit XlnxTable(std::int64_t max_value) : vals_(static_cast<size_t>(max_value) + 1) {
        for (std::int64_t v = 0; v <= max_value; ++v)
            vals_[static_cast<size_t>(v)] = xlnx(static_cast<double>(v));
    }
    double term(std::int64_t e, std::int64_t n) const {
        return vals_[static_cast<size_t>(e)] + vals_[static_cast<size_t>(n - e)] -
               vals_[static_cast<size_t>(n)];
    }

private:
    std::vector<double> vals_;
};

// Profile log-likelihood change for moving one node from class `a` to `c`,
// given its per-class edge counts d and pair counts m. Only blocks in rows a
// and c change; block (a,c) is visited once.
template <class Term>
double move_delta_core(const BlockStats& st, int a, int c, const std::vector<std::int64_t>& d,
                       const std::vector<std::int64_t>& m, Term term) {
    if (a == c) return 0.0;
    const int k = st.k();
    double before = 0.0, after = 0.0;
    for (int b = 0; b < k; ++b) {
        std::int64_t n = st.pairs(a, b), e = st.edges(a, b);
        before += term(e, n);
        std::int64_t n2, e2;
        if (b == a) {
            n2 = n - m[a];
            e2 = e - d[a];
        } else if (b == c) {
            n2 = n + m[a] - m[c];
            e2 = e + d[a] - d[c];
        } else {
            n2 = n - m[b];
            e2 = e - d[b];
        }
        after += term(e2, n2);
        if (b != a) {
            n = st.pairs(c, b);
            e = st.edges(c, b);
            before += term(e, n);
            if (b == c) {
                n2 = n + m[c];
                e2 = e + d[c];
            } else {
                n2 = n + m[b];
                e2 = e + d[b];
            }
            after += term(e2, n2);
        }
    }
    return after - before;
}

struct ChainResult {
    std::vector<int> best_z;
    double best_loglik = -std::numeric_limits<double>::infinity();
    std::vector<double> trace;
};

ChainResult run_chain(const Graph& g, const SamplerConfig& cfg, const PairMask* mask,
                      std::uint64_t chain_seed, int sweeps, const XlnxTable& tab) {
    const int n = g.n_nodes();
    const int k = cfg.k;
    std::mt19937_64 rng(chain_seed);

    std::vector<int> labels;
    if (cfg.init) {
        labels = *cfg.init;
    } else {
        labels.resize(n);
        std::uniform_int_distribution<int> pick(0, k - 1);
        for (int i = 0; i < n; ++i) labels[i] = pick(rng);
    }
    ClassAssignment z(k, labels);
    BlockStats stats = block_stats(g, z, mask);

    auto term = [&tab](std::int64_t e, std::int64_t nn) { return tab.term(e, nn); };

    double running = profile_loglik_from_stats(stats);
    ChainResult res;
    res.best_z = z.labels;
    res.best_loglik = running;
    res.trace.reserve(sweeps);

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::vector<std::int64_t> d(k), m(k);
    std::vector<double> delta(k), weight(k);

    for (int t = 0; t < sweeps; ++t) {
        const double beta = cfg.beta_at(t);
        std::shuffle(order.begin(), order.end(), rng);
        for (int i : order) {
            const int a = z.labels[i];
            std::fill(d.begin(), d.end(), 0);
            for (int j : g.neighbors(i)) {
                if (mask && mask->masked(i, j)) continue;
                ++d[z.labels[j]];
            }
            for (int b = 0; b < k; ++b) m[b] = stats.class_size(b);
            m[a] -= 1;
            if (mask)
                for (int j : mask->masked_partners(i)) --m[z.labels[j]];

            double max_delta = 0.0;
            for (int c = 0; c < k; ++c) {
                delta[c] = (c == a) ? 0.0 : move_delta_core(stats, a, c, d, m, term);
                if (delta[c] > max_delta) max_delta = delta[c];
            }
            int chosen = a;
            if (beta > 1e30) {
                for (int c = 0; c < k; ++c)
                    if (delta[c] == max_delta) {
                        chosen = c;
                        break;
                    }
            } else {
                double total = 0.0;
                for (int c = 0; c < k; ++c) total += weight[c] = std::exp(beta * (delta[c] - max_delta));
                double u = std::uniform_real_distribution<double>(0.0, total)(rng);
                for (int c = 0; c < k; ++c) {
                    u -= weight[c];
                    if (u <= 0.0) {
                        chosen = c;
                        break;
                    }
                }
            }
            if (chosen != a) {
                stats.apply_move(a, chosen, d, m);
                z.labels[i] = chosen;
                running += delta[chosen];
                if (running > res.best_loglik + 1e-9) {
                    double exact = profile_loglik_from_stats(stats);
                    if (exact > res.best_loglik) {
                        res.best_loglik = exact;
                        res.best_z = z.labels;
                    }
                }
            }
        }
        running = profile_loglik_from_stats(stats);  // clear additive drift
        res.trace.push_back(res.best_loglik);
    }
    return res;
}

}  // namespace

FitResult gibbs_fit(const Graph& g, const SamplerConfig& cfg, const PairMask* mask) {
    const int n = g.n_nodes();
    if (cfg.k < 1 || cfg.k > n) throw std::invalid_argument("gibbs_fit: need 1 <= K <= N");
    if (cfg.restarts < 1) throw std::invalid_argument("gibbs_fit: restarts must be >= 1");
    if (cfg.init && static_cast<int>(cfg.init->size()) != n)
        throw std::invalid_argument("gibbs_fit: init assignment length mismatch");
    const int sweeps = cfg.resolved_sweeps(n);
    SamplerConfig chain_cfg = cfg;
    chain_cfg.n_sweeps = sweeps;

    XlnxTable tab(pair_count(n));

    std::vector<ChainResult> chains(cfg.restarts);
    auto run_one = [&](int r) {
        return run_chain(g, chain_cfg, mask, derive_seed(cfg.seed, {0x63686169ULL, static_cast<std::uint64_t>(r)}),
                         sweeps, tab);
    };
    if (cfg.parallel_restarts && cfg.restarts > 1) {
        std::vector<std::future<ChainResult>> futs;
        futs.reserve(cfg.restarts);
        for (int r = 0; r < cfg.restarts; ++r)
            futs.push_back(std::async(std::launch::async, run_one, r));
        for (int r = 0; r < cfg.restarts; ++r) chains[r] = futs[r].get();
    } else {
        for (int r = 0; r < cfg.restarts; ++r) chains[r] = run_one(r);
    }

    // Merge: max by likelihood, ties to the lower chain index; the trace is the
    // running best across chains at each sweep.
    int best = 0;
    for (int r = 1; r < cfg.restarts; ++r)
        if (chains[r].best_loglik > chains[best].best_loglik) best = r;

    FitResult out;
    out.best_z = ClassAssignment(cfg.k, chains[best].best_z);
    out.best_profile_loglik = chains[best].best_loglik;
    out.sweeps_run = sweeps * cfg.restarts;
    out.trace.resize(sweeps);
    double run_best = -std::numeric_limits<double>::infinity();
    for (int t = 0; t < sweeps; ++t) {
        for (const auto& ch : chains) run_best = std::max(run_best, ch.trace[t]);
        out.trace[t] = run_best;
    }
    return out;
}

double incremental_move_delta(const BlockStats& stats, const Graph& g, const ClassAssignment& z,
                              int node, int new_class, const PairMask* mask) {
    if (node < 0 || node >= g.n_nodes())
        throw std::invalid_argument("incremental_move_delta: node index out of range");
    if (new_class < 0 || new_class >= z.k)
        throw std::invalid_argument("incremental_move_delta: class out of range");
    std::vector<std::int64_t> d, m;
    node_class_profile(g, z, node, mask, d, m);
    return move_delta_core(stats, z.labels[node], new_class, d, m, block_entropy_term);
}

}  // namespace sbm
