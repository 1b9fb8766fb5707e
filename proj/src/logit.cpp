#include "sbm/logit.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <future>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "sbm/block_stats.hpp"
#include "sbm/seeding.hpp"

namespace sbm {

namespace {

// Upper-triangle index of block (a,b), a <= b after swap.
inline int tri_index(int a, int b, int k) {
    if (a > b) std::swap(a, b);
    return a * k - a * (a - 1) / 2 + (b - a);
}

// Flattened per-pair sparse design rows: block coordinate + covariate features.
struct PairRows {
    std::vector<std::int64_t> starts;  // row r spans [starts[r], starts[r+1])
    std::vector<int> coords;
    std::vector<double> vals;
    std::vector<unsigned char> is_edge;
};

PairRows build_pair_rows(const Graph& g, const ClassAssignment& z, const PairDesign& design,
                         const PairMask* mask) {
    const int n = g.n_nodes();
    const int k = z.k;
    PairRows rows;
    rows.starts.push_back(0);
    for (int i = 0; i < n; ++i) {
        const auto& nb = g.neighbors(i);
        size_t ptr = std::upper_bound(nb.begin(), nb.end(), i) - nb.begin();
        for (int j = i + 1; j < n; ++j) {
            bool edge = ptr < nb.size() && nb[ptr] == j;
            if (edge) ++ptr;
            if (mask && mask->masked(i, j)) continue;
            rows.coords.push_back(tri_index(z.labels[i], z.labels[j], k));
            rows.vals.push_back(1.0);
            int dim_t = k * (k + 1) / 2;
            design.for_each_feature(i, j, [&](int c, double v) {
                rows.coords.push_back(dim_t + c);
                rows.vals.push_back(v);
            });
            rows.is_edge.push_back(edge ? 1 : 0);
            rows.starts.push_back(static_cast<std::int64_t>(rows.coords.size()));
        }
    }
    return rows;
}

double rows_loglik(const PairRows& rows, const Eigen::VectorXd& x) {
    double ll = 0.0;
    const size_t n_rows = rows.is_edge.size();
    for (size_t r = 0; r < n_rows; ++r) {
        double eta = 0.0;
        for (std::int64_t t = rows.starts[r]; t < rows.starts[r + 1]; ++t)
            eta += rows.vals[t] * x[rows.coords[t]];
        ll += (rows.is_edge[r] ? eta : 0.0) - softplus(eta);
    }
    return ll;
}

std::string iterate_dump(const Eigen::VectorXd& x) {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < x.size() && i < 24; ++i) os << (i ? ", " : "") << x[i];
    if (x.size() > 24) os << ", ...";
    os << "]";
    return os.str();
}

}  // namespace

double logit_log_likelihood(const Graph& g, const LogitModel& m, const PairDesign& design,
                            const PairMask* mask) {
    const int n = g.n_nodes();
    if (m.z.n_nodes() != n)
        throw std::invalid_argument("logit_log_likelihood: assignment length mismatch");
    double ll = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto& nb = g.neighbors(i);
        size_t ptr = std::upper_bound(nb.begin(), nb.end(), i) - nb.begin();
        for (int j = i + 1; j < n; ++j) {
            bool edge = ptr < nb.size() && nb[ptr] == j;
            if (edge) ++ptr;
            if (mask && mask->masked(i, j)) continue;
            double eta = m.theta(m.z.labels[i], m.z.labels[j]) + design.dot(i, j, m.beta);
            ll += (edge ? eta : 0.0) - softplus(eta);
        }
    }
    return ll;
}

LogitFitReport optimize_theta_beta(const Graph& g, const ClassAssignment& z,
                                   const PairDesign& design, const LogitModel* init,
                                   const PairMask* mask) {
    const int n = g.n_nodes();
    if (z.n_nodes() != n) throw std::invalid_argument("optimize_theta_beta: assignment length mismatch");
    const int k = z.k;
    const int dim_t = k * (k + 1) / 2;
    const int dim_b = design.dim_beta();
    const int p = dim_t + dim_b;

    PairRows rows = build_pair_rows(g, z, design, mask);
    const size_t n_rows = rows.is_edge.size();

    // Rank-deficiency check: a coordinate no pair touches has an identically
    // zero Hessian column.
    std::vector<char> support(p, 0);
    for (int c : rows.coords) support[c] = 1;
    std::string note;
    if (std::find(support.begin(), support.end(), 0) != support.end())
        note = "unsupported coordinates (empty blocks or unused levels)";
    // Separation check: a block whose pairs are all edges (or all non-edges)
    // sends its own log-odds coordinate to +/- infinity.
    BlockStats sep_stats = block_stats(g, z, mask);
    for (int a = 0; a < k; ++a)
        for (int b = a; b < k; ++b) {
            std::int64_t nb = sep_stats.pairs(a, b), eb = sep_stats.edges(a, b);
            if (nb > 0 && (eb == 0 || eb == nb)) {
                if (!note.empty()) note += "; ";
                note += "separable block proportions (a block with all or no edges)";
                a = k;
                break;
            }
        }
    bool ridged = !note.empty();
    if (ridged) note += "; L2 ridge applied";
    double lambda = ridged ? 1e-8 : 0.0;

    Eigen::VectorXd x = Eigen::VectorXd::Zero(p);
    if (init) {
        if (init->k != k || static_cast<int>(init->beta.size()) != dim_b)
            throw std::invalid_argument("optimize_theta_beta: init shape mismatch");
        for (int a = 0; a < k; ++a)
            for (int b = a; b < k; ++b) x[tri_index(a, b, k)] = init->theta(a, b);
        for (int c = 0; c < dim_b; ++c) x[dim_t + c] = init->beta[c];
    } else {
        // Smoothed per-block logits; covariate part starts at zero.
        const BlockStats& st = sep_stats;
        for (int a = 0; a < k; ++a)
            for (int b = a; b < k; ++b) {
                std::int64_t nb = st.pairs(a, b), eb = st.edges(a, b);
                if (nb > 0)
                    x[tri_index(a, b, k)] =
                        std::log((eb + 0.5) / (nb - eb + 0.5));
            }
    }

    Eigen::VectorXd grad(p);
    Eigen::MatrixXd hess(p, p);
    double ll = rows_loglik(rows, x);
    double grad_max = 0.0;
    int iter = 0;
    for (; iter < 100; ++iter) {
        grad.setZero();
        hess.setZero();
        for (size_t r = 0; r < n_rows; ++r) {
            std::int64_t lo = rows.starts[r], hi = rows.starts[r + 1];
            double eta = 0.0;
            for (std::int64_t t = lo; t < hi; ++t) eta += rows.vals[t] * x[rows.coords[t]];
            double mu = sigmoid(eta);
            double resid = (rows.is_edge[r] ? 1.0 : 0.0) - mu;
            double w = mu * (1.0 - mu);
            for (std::int64_t t = lo; t < hi; ++t) {
                grad[rows.coords[t]] += resid * rows.vals[t];
                for (std::int64_t u = lo; u < hi; ++u)
                    hess(rows.coords[t], rows.coords[u]) += w * rows.vals[t] * rows.vals[u];
            }
        }
        if (lambda > 0.0) grad -= lambda * x;
        grad_max = grad.lpNorm<Eigen::Infinity>();
        if (grad_max < 1e-8) break;

        // 1e-8 on the diagonal keeps the solve well posed; convergence is still
        // judged on the objective's own gradient.
        hess.diagonal().array() += lambda + 1e-8;
        Eigen::VectorXd dx = hess.ldlt().solve(grad);

        double obj0 = ll - 0.5 * lambda * x.squaredNorm();
        double step = 1.0;
        bool accepted = false;
        bool saw_finite = false;
        for (int h = 0; h < 60; ++h, step *= 0.5) {
            Eigen::VectorXd xn = x + step * dx;
            double lln = rows_loglik(rows, xn);
            double objn = lln - 0.5 * lambda * xn.squaredNorm();
            if (std::isfinite(objn)) {
                saw_finite = true;
                if (objn > obj0) {
                    x = xn;
                    ll = lln;
                    accepted = true;
                    break;
                }
            }
        }
        if (!saw_finite)
            throw std::runtime_error("optimize_theta_beta: non-finite objective during line search; iterate " +
                                     iterate_dump(x) + ", step " + iterate_dump(dx));
        if (!accepted) break;  // no ascent left at line-search resolution

        if (!ridged && x.lpNorm<Eigen::Infinity>() > 30.0) {
            ridged = true;
            note = "parameter divergence; L2 ridge applied";
            lambda = 1e-8;
        }
    }

    LogitFitReport rep;
    rep.theta_tilde.assign(static_cast<size_t>(k) * k, 0.0);
    for (int a = 0; a < k; ++a)
        for (int b = a; b < k; ++b) {
            double v = x[tri_index(a, b, k)];
            rep.theta_tilde[static_cast<size_t>(a) * k + b] = v;
            rep.theta_tilde[static_cast<size_t>(b) * k + a] = v;
        }
    rep.beta.assign(x.data() + dim_t, x.data() + p);
    rep.loglik = ll;
    rep.iterations = iter;
    rep.grad_max_norm = grad_max;
    rep.ridged = ridged;
    rep.note = note;
    return rep;
}

AlternatingFit alternating_fit(const Graph& g, const CovariateTable& cov, int k,
                               const SamplerConfig& cfg, const PairMask* mask, int max_rounds) {
    const int n = g.n_nodes();
    if (cov.n_nodes() != n) throw std::invalid_argument("alternating_fit: covariate table size mismatch");
    if (k < 1 || k > n) throw std::invalid_argument("alternating_fit: need 1 <= K <= N");
    PairDesign design(cov);

    SamplerConfig zcfg = cfg;
    zcfg.k = k;
    FitResult fr = gibbs_fit(g, zcfg, mask);

    LogitFitReport rep = optimize_theta_beta(g, fr.best_z, design, nullptr, mask);
    AlternatingFit out;
    out.model = LogitModel{k, rep.theta_tilde, rep.beta, fr.best_z};
    out.loglik = rep.loglik;
    out.ridged = rep.ridged;
    out.trace.push_back(rep.loglik);
    if (k == 1 || max_rounds < 1) return out;  // no class moves possible

    // Covariate dot products depend only on beta; cache them per accepted model.
    std::vector<double> xdot(static_cast<size_t>(pair_count(n)));
    auto refresh_xdot = [&](const std::vector<double>& beta) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                xdot[static_cast<size_t>(pair_index(i, j, n))] = design.dot(i, j, beta);
    };
    refresh_xdot(out.model.beta);

    std::mt19937_64 rng(derive_seed(cfg.seed, {0x616C7465726EULL}));
    const int sweeps_per_round = std::max(3, cfg.resolved_sweeps(n) / max_rounds);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::vector<char> adj(n, 0);
    std::uniform_int_distribution<int> pick_other(0, k - 2);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    for (int round = 0; round < max_rounds; ++round) {
        double prev_best = out.loglik;

        // (a) Metropolis over z at fixed (theta_tilde, beta); keep the best
        // labels seen during the phase.
        LogitModel work = out.model;
        double cur = logit_log_likelihood(g, work, design, mask);
        double phase_best = cur;
        std::vector<int> best_labels = work.z.labels;
        for (int s = 0; s < sweeps_per_round; ++s) {
            std::shuffle(order.begin(), order.end(), rng);
            for (int i : order) {
                int a = work.z.labels[i];
                int c = pick_other(rng);
                if (c >= a) ++c;
                for (int j : g.neighbors(i)) adj[j] = 1;
                double dll = 0.0;
                for (int j = 0; j < n; ++j) {
                    if (j == i) continue;
                    if (mask && mask->masked(i, j)) continue;
                    double xd = xdot[static_cast<size_t>(
                        i < j ? pair_index(i, j, n) : pair_index(j, i, n))];
                    int zj = work.z.labels[j];
                    double eo = work.theta(a, zj) + xd;
                    double en = work.theta(c, zj) + xd;
                    dll += (adj[j] ? en - eo : 0.0) - softplus(en) + softplus(eo);
                }
                for (int j : g.neighbors(i)) adj[j] = 0;
                if (dll >= 0.0 || unif(rng) < std::exp(dll)) {
                    work.z.labels[i] = c;
                    cur += dll;
                    if (cur > phase_best + 1e-9) {
                        phase_best = cur;
                        best_labels = work.z.labels;
                    }
                }
            }
        }

        // (b) Newton refit at the phase-best labels, warm-started.
        work.z.labels = best_labels;
        rep = optimize_theta_beta(g, work.z, design, &work, mask);
        out.ridged = out.ridged || rep.ridged;
        if (rep.loglik > out.loglik) {
            out.loglik = rep.loglik;
            out.model = LogitModel{k, rep.theta_tilde, rep.beta, work.z};
            refresh_xdot(out.model.beta);
        }
        out.trace.push_back(out.loglik);
        if (out.loglik - prev_best < 1e-6 * std::max(1.0, std::abs(prev_best))) break;
    }
    return out;
}

double bic_score(const Graph& g, const LogitModel& m, const PairDesign& design) {
    double ll = logit_log_likelihood(g, m, design);
    double n_params = 0.5 * m.k * (m.k + 1) + design.dim_beta();
    return -2.0 * ll + n_params * std::log(static_cast<double>(pair_count(g.n_nodes())));
}

CrossValidation cross_validate(const Graph& g, const CovariateTable& cov, int k, int folds,
                               const SamplerConfig& cfg, std::uint64_t seed) {
    if (folds < 2) throw std::invalid_argument("cross_validate: folds must be >= 2");
    const int n = g.n_nodes();
    const std::int64_t n_pairs = pair_count(n);
    std::vector<std::int64_t> perm(static_cast<size_t>(n_pairs));
    for (std::int64_t t = 0; t < n_pairs; ++t) perm[static_cast<size_t>(t)] = t;
    std::mt19937_64 rng(derive_seed(seed, {0x63767065726DULL}));
    std::shuffle(perm.begin(), perm.end(), rng);

    PairDesign design(cov);
    auto run_fold = [&](int f) -> std::optional<std::pair<double, double>> {
        std::int64_t lo = f * n_pairs / folds, hi = (f + 1) * n_pairs / folds;
        if (lo == hi) return std::nullopt;
        std::vector<std::int64_t> heldout(perm.begin() + lo, perm.begin() + hi);
        PairMask mask(n, heldout);
        SamplerConfig fcfg = cfg;
        fcfg.seed = derive_seed(seed, {0x666F6C64ULL, static_cast<std::uint64_t>(f)});
        AlternatingFit af = alternating_fit(g, cov, k, fcfg, &mask);
        double nll = 0.0;
        std::int64_t mis = 0, cnt = 0;
        for (int i = 0; i < n; ++i)
            for (int j : mask.masked_partners(i)) {
                if (j <= i) continue;
                double eta = af.model.theta(af.model.z.labels[i], af.model.z.labels[j]) +
                             design.dot(i, j, af.model.beta);
                bool edge = g.has_edge(i, j);
                nll += softplus(eta) - (edge ? eta : 0.0);
                mis += ((eta >= 0.0) != edge) ? 1 : 0;
                ++cnt;
            }
        return std::make_pair(nll / cnt, static_cast<double>(mis) / cnt);
    };

    std::vector<std::future<std::optional<std::pair<double, double>>>> futs;
    futs.reserve(folds);
    for (int f = 0; f < folds; ++f)
        futs.push_back(std::async(std::launch::async, run_fold, f));
    CrossValidation cv;
    int used = 0;
    for (auto& fut : futs) {
        auto res = fut.get();
        if (!res) continue;  // empty fold (n_pairs < folds)
        cv.mean_heldout_nll += res->first;
        cv.misclass_rate += res->second;
        ++used;
    }
    if (used == 0) throw std::invalid_argument("cross_validate: no non-empty folds");
    cv.mean_heldout_nll /= used;
    cv.misclass_rate /= used;
    return cv;
}

}  // namespace sbm
