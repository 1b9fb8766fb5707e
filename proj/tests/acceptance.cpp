// End-to-end acceptance checks, one per numbered claim. Each prints a single
// [PASS]/[FAIL] line with measured values; exit status is nonzero if any
// requested check fails. Usage: acceptance [1..8] (no argument runs all).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sbm/bounds.hpp"
#include "sbm/experiments.hpp"
#include "sbm/gibbs.hpp"
#include "sbm/likelihood.hpp"
#include "sbm/logit.hpp"
#include "sbm/metrics.hpp"
#include "sbm/partition.hpp"
#include "sbm/synth.hpp"

using namespace sbm;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool line(bool ok, int num, const std::string& msg) {
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", num, msg.c_str());
    std::fflush(stdout);
    return ok;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// ---- 1: closed-form confidence bounds at the N=553 reference point ----

bool criterion1() {
    auto t0 = Clock::now();
    const double expected[] = {0.0057, 0.0067, 0.0077, 0.0086};
    bool ok = true;
    std::ostringstream vals;
    for (int i = 0; i < 4; ++i) {
        BoundReport rep = make_bound_report(553, 4 + i, 0.05);
        ok = ok && std::abs(rep.epsilon_kl_normalized - expected[i]) <= 1e-4;
        vals << (i ? " " : "") << fmt("K=%d:%.4f", 4 + i, rep.epsilon_kl_normalized);
    }
    double ms = seconds_since(t0) * 1e3;
    ok = ok && ms < 250.0;
    return line(ok, 1,
                fmt("normalized KL bounds at N=553 delta=0.05 are {%s}, targets "
                    "{0.0057 0.0067 0.0077 0.0086} +/- 1e-4 (%.1f ms)",
                    vals.str().c_str(), ms));
}

// ---- 2: bounds hold empirically and are loose by a bounded factor ----

bool criterion2() {
    auto t0 = Clock::now();
    ExperimentConfig cfg;
    cfg.kind = "bound-tightness";
    cfg.n = 500;
    cfg.p = 0.075;
    cfg.k_values = {5, 10, 20, 30, 40, 50};
    cfg.delta = 0.05;
    cfg.trials = 30;
    cfg.base_seed = 20250814;
    cfg.threads = 1;
    cfg.sampler.n_sweeps = 60;
    cfg.sampler.restarts = 2;
    auto rows = run_bound_tightness(cfg);
    int violations = 0;
    double ratio_sum = 0.0;
    for (const ResultRow& r : rows) {
        if (*r.kl_error > *r.kl_bound || *r.rms_error > *r.rms_bound) ++violations;
        ratio_sum += *r.kl_bound / *r.kl_error;
    }
    double mean_ratio = ratio_sum / static_cast<double>(rows.size());
    bool ok = violations == 0 && mean_ratio >= 2.0 && mean_ratio <= 10.0;
    return line(ok, 2,
                fmt("ER(500, 0.075), K in {5..50}, 30 trials: %d bound violations over %zu fits, "
                    "mean bound/error ratio %.3f in [2,10] (%.0f s)",
                    violations, rows.size(), mean_ratio, seconds_since(t0)));
}

// ---- 3: likelihood-error trends across growth schedules ----

double likelihood_error_slope(double c, double a, double base, std::string* detail) {
    ExperimentConfig cfg;
    cfg.kind = "likelihood-error";
    cfg.n_values = {50, 100, 200, 400, 700, 1050};
    cfg.c = c;
    cfg.a = a;
    cfg.log_base = base;
    cfg.trials = 10;
    cfg.base_seed = 20250814;
    cfg.threads = 1;
    cfg.sampler.n_sweeps = 60;
    cfg.sampler.restarts = 2;
    auto rows = run_likelihood_error(cfg);
    std::map<int, std::vector<double>> per_n;
    for (ResultRow& r : rows) per_n[r.n].push_back(*r.lik_error);
    std::vector<double> xs, ys;
    std::ostringstream meds;
    for (auto& [n, v] : per_n) {
        xs.push_back(n);
        ys.push_back(median(v));
        meds << " " << fmt("%d:%.3f", n, median(v));
    }
    double slope = theil_sen_slope(xs, ys);
    *detail += fmt("  - c=%.0f a=%.1f log-base %.2f: medians%s slope %+.2e\n", c, a, base,
                   meds.str().c_str(), slope);
    return slope;
}

bool criterion3() {
    auto t0 = Clock::now();
    std::string detail;
    // The c=4 natural-log schedule exceeds C(N,2) on this whole grid, so that
    // arm runs on the decade-log schedule; the c=2 arms are natural-log.
    double s_c4 = likelihood_error_slope(4.0, 0.5, 10.0, &detail);
    double s_half = likelihood_error_slope(2.0, 0.5, std::exp(1.0), &detail);
    double s_three_fifths = likelihood_error_slope(2.0, 0.6, std::exp(1.0), &detail);
    std::fputs(detail.c_str(), stdout);
    bool ok = s_c4 < 0.0 && s_half < 0.0 && s_three_fifths > 0.0;
    return line(ok, 3,
                fmt("median error slopes over N: c=4,a=1/2 %+.2e (<0), c=2,a=1/2 %+.2e (<0), "
                    "c=2,a=3/5 %+.2e (>0 required) (%.0f s)",
                    s_c4, s_half, s_three_fifths, seconds_since(t0)));
}

// ---- 4: misclassification decays iff the divergence level is identifiable ----

bool criterion4() {
    auto t0 = Clock::now();
    ExperimentConfig cfg;
    cfg.kind = "misclassification";
    cfg.n_values = {50, 100, 200, 400, 700, 1050};
    cfg.c = 2.0;
    cfg.a = 0.5;
    cfg.log_base = std::exp(1.0);
    cfg.gammas = {0.8, 0.9, 1.0};
    cfg.trials = 10;
    cfg.base_seed = 20250814;
    cfg.threads = 1;
    cfg.sampler.beta_start = 1.0;
    cfg.sampler.beta_end = 1.0;
    cfg.sampler.restarts = 2;
    auto rows = run_misclassification(cfg);
    std::map<double, double> slope_of;
    for (double gamma : cfg.gammas) {
        std::map<int, std::vector<double>> per_n;
        for (ResultRow& r : rows)
            if (std::abs(*r.gamma - gamma) < 1e-12) per_n[r.n].push_back(*r.misclass_rate);
        std::vector<double> xs, ys;
        std::ostringstream meds;
        for (auto& [n, v] : per_n) {
            xs.push_back(n);
            ys.push_back(median(v));
            meds << " " << fmt("%d:%.3f", n, median(v));
        }
        slope_of[gamma] = theil_sen_slope(xs, ys);
        std::printf("  - gamma=%.2f: medians%s slope %+.2e\n", gamma, meds.str().c_str(),
                    slope_of[gamma]);
    }
    bool ok = slope_of[0.8] > 0.0 && slope_of[0.9] < 0.0 && slope_of[1.0] < 0.0;
    return line(ok, 4,
                fmt("error-rate slopes: gamma=4/5 %+.2e (>0), gamma=9/10 %+.2e (<0), "
                    "gamma=1 %+.2e (<0) (%.0f s)",
                    slope_of[0.8], slope_of[0.9], slope_of[1.0], seconds_since(t0)));
}

// ---- 5: exact identities and inequalities on random instances ----

struct SmallInstance {
    Graph g;
    ProbabilityMatrixDense p;
    ClassAssignment z;
};

SmallInstance random_instance(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> nd(4, 12), kd(1, 3);
    std::uniform_real_distribution<double> pd(0.05, 0.95);
    int n = nd(rng), k = kd(rng);
    ProbabilityMatrixDense p(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) p.set(i, j, pd(rng));
    std::vector<int> labels(n);
    std::uniform_int_distribution<int> ld(0, k - 1);
    for (int& l : labels) l = ld(rng);
    Graph g = sample_graph(p, rng());
    return {std::move(g), std::move(p), ClassAssignment(k, std::move(labels))};
}

bool criterion5() {
    auto t0 = Clock::now();
    std::mt19937_64 rng(99);
    double worst_resid = 0.0, worst_pinsker = 0.0;
    int identity_fails = 0, pinsker_fails = 0;
    std::vector<SmallInstance> instances;
    for (int t = 0; t < 1000; ++t) instances.push_back(random_instance(rng));

    for (const SmallInstance& inst : instances) {
        double gap = profile_log_likelihood(inst.g, inst.z) -
                     expected_profile_log_likelihood(inst.p, inst.z);
        LikelihoodGap parts = likelihood_gap_decomposition(inst.g, inst.p, inst.z);
        double resid =
            std::abs(gap - (parts.kl_term + parts.x_term)) / std::max(1.0, std::abs(gap));
        worst_resid = std::max(worst_resid, resid);
        if (resid > 1e-9) ++identity_fails;

        BlockStats stats = block_stats(inst.g, inst.z);
        BlockMatrix th = theta_hat(stats);
        BlockMatrix tb = theta_bar(inst.p, inst.z);
        for (int a = 0; a < inst.z.k; ++a)
            for (int b = a; b < inst.z.k; ++b) {
                if (!th.is_defined(a, b)) continue;
                double slack = bernoulli_kl(th.at(a, b), tb.at(a, b)) -
                               2.0 * std::pow(th.at(a, b) - tb.at(a, b), 2);
                worst_pinsker = std::min(worst_pinsker, slack);
                if (slack < -1e-12) ++pinsker_fails;
            }
    }

    int refine_fails = 0;
    double worst_refine = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const SmallInstance& inst = instances[static_cast<size_t>(t)];
        int n = inst.g.n_nodes();
        // split each class of z in two to get a nested node partition
        std::vector<int> fine(inst.z.labels);
        for (int i = 0; i < n; ++i) fine[i] = 2 * inst.z.labels[i] + static_cast<int>(rng() & 1);
        Partition coarse = induced_partition(inst.z);
        Partition finer_ind = induced_partition(ClassAssignment(2 * inst.z.k, fine));
        Partition finer = refine_partition(coarse, finer_ind.cell_of, finer_ind.n_cells);
        double lc = partition_expected_log_likelihood(inst.p, coarse);
        double lf = partition_expected_log_likelihood(inst.p, finer);
        double slack = lf - lc;
        worst_refine = std::min(worst_refine, slack);
        if (slack < -1e-10 * std::max(1.0, std::abs(lc))) ++refine_fails;
    }

    bool ok = identity_fails == 0 && refine_fails == 0 && pinsker_fails == 0;
    return line(ok, 5,
                fmt("1000 instances: decomposition residual max %.2e (%d > 1e-9), refinement "
                    "slack min %.2e (%d below tol), Pinsker slack min %.2e (%d < -1e-12) (%.1f s)",
                    worst_resid, identity_fails, worst_refine, refine_fails, worst_pinsker,
                    pinsker_fails, seconds_since(t0)));
}

// ---- 6: sampler finds the exhaustive optimum; deltas match recomputation ----

bool criterion6() {
    auto t0 = Clock::now();
    int matches = 0;
    int delta_fails = 0;
    double worst_delta = 0.0;
    std::mt19937_64 rng(12345);
    for (int t = 0; t < 100; ++t) {
        int n = 4 + t % 5;
        double p = 0.35 + 0.15 * (t % 3);
        Graph g = gen_er(n, p, 4000 + static_cast<std::uint64_t>(t)).first;

        double best = -1e300;
        std::vector<int> labels(n, 0);
        for (int code = 0; code < (1 << n); ++code) {
            for (int i = 0; i < n; ++i) labels[i] = (code >> i) & 1;
            best = std::max(best, profile_log_likelihood(g, ClassAssignment(2, labels)));
        }
        SamplerConfig cfg;
        cfg.k = 2;
        cfg.restarts = 5;
        cfg.seed = 600 + static_cast<std::uint64_t>(t);
        FitResult fit = gibbs_fit(g, cfg);
        if (std::abs(fit.best_profile_loglik - best) <= 1e-9) ++matches;

        if (t < 30) {
            int k = 2 + t % 2;
            std::vector<int> zl(n);
            std::uniform_int_distribution<int> ld(0, k - 1);
            for (int& l : zl) l = ld(rng);
            ClassAssignment z(k, zl);
            BlockStats stats = block_stats(g, z);
            double base_ll = profile_loglik_from_stats(stats);
            for (int node = 0; node < n; ++node)
                for (int c = 0; c < k; ++c) {
                    double delta = incremental_move_delta(stats, g, z, node, c);
                    ClassAssignment z2 = z;
                    z2.labels[node] = c;
                    double err = std::abs(delta - (profile_log_likelihood(g, z2) - base_ll));
                    worst_delta = std::max(worst_delta, err);
                    if (err > 1e-9) ++delta_fails;
                }
        }
    }
    bool ok = matches >= 95 && delta_fails == 0;
    return line(ok, 6,
                fmt("exhaustive-optimum matches %d/100 (>=95), move-delta max error %.2e with "
                    "%d beyond 1e-9 (%.1f s)",
                    matches, worst_delta, delta_fails, seconds_since(t0)));
}

// ---- 7: Newton solver quality on the log-odds model ----

int tri_index(int a, int b, int k) {
    if (a > b) std::swap(a, b);
    return a * k - a * (a - 1) / 2 + (b - a);
}

std::vector<double> analytic_score(const Graph& g, const LogitModel& m, const PairDesign& d) {
    int n = g.n_nodes(), k = m.k, dim_t = k * (k + 1) / 2;
    std::vector<double> grad(dim_t + d.dim_beta(), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double eta = m.theta(m.z.labels[i], m.z.labels[j]) + d.dot(i, j, m.beta);
            double r = (g.has_edge(i, j) ? 1.0 : 0.0) - sigmoid(eta);
            grad[tri_index(m.z.labels[i], m.z.labels[j], k)] += r;
            d.for_each_feature(i, j, [&](int c, double v) { grad[dim_t + c] += r * v; });
        }
    return grad;
}

bool criterion7() {
    auto t0 = Clock::now();
    std::mt19937_64 rng(777);
    double worst_grad = 0.0, worst_fd = 0.0, worst_match = 0.0;
    bool ok = true;
    for (int t = 0; t < 20; ++t) {
        int n = 14 + t % 6;
        int k = 2 + t % 2;
        CovariateTable cov(n);
        std::vector<int> lv(n);
        for (int& l : lv) l = static_cast<int>(rng() % 2);
        cov.add("bin", 2, lv);
        if (t % 3 == 0) {
            for (int& l : lv) l = static_cast<int>(rng() % 3);
            cov.add("tri", 3, lv);
        }
        PairDesign design(cov);
        Graph g = gen_er(n, 0.45, 8800 + static_cast<std::uint64_t>(t)).first;
        std::vector<int> zl(n);
        for (int i = 0; i < n; ++i) zl[i] = i % k;
        std::shuffle(zl.begin(), zl.end(), rng);
        ClassAssignment z(k, zl);

        LogitFitReport rep = optimize_theta_beta(g, z, design);
        worst_grad = std::max(worst_grad, rep.grad_max_norm);
        ok = ok && rep.grad_max_norm < 1e-6;

        // score vs central differences at a generic (non-optimal) point
        LogitModel m;
        m.k = k;
        m.theta_tilde.assign(static_cast<size_t>(k) * k, 0.0);
        m.z = z;
        std::uniform_real_distribution<double> pert(-0.8, 0.8);
        for (int a = 0; a < k; ++a)
            for (int b = a; b < k; ++b) m.set_theta(a, b, -0.4 + pert(rng));
        m.beta.assign(static_cast<size_t>(design.dim_beta()), 0.0);
        for (double& bc : m.beta) bc = 0.5 * pert(rng);
        std::vector<double> grad = analytic_score(g, m, design);
        int dim_t = k * (k + 1) / 2;
        const double h = 1e-5;
        for (int c = 0; c < static_cast<int>(grad.size()); ++c) {
            LogitModel up = m, dn = m;
            if (c < dim_t) {
                int idx = 0;
                for (int a = 0; a < k; ++a)
                    for (int b = a; b < k; ++b, ++idx)
                        if (idx == c) {
                            up.set_theta(a, b, m.theta(a, b) + h);
                            dn.set_theta(a, b, m.theta(a, b) - h);
                        }
            } else {
                up.beta[c - dim_t] += h;
                dn.beta[c - dim_t] -= h;
            }
            double fd = (logit_log_likelihood(g, up, design) -
                         logit_log_likelihood(g, dn, design)) /
                        (2.0 * h);
            double rel = std::abs(grad[c] - fd) / std::max(1.0, std::abs(fd));
            worst_fd = std::max(worst_fd, rel);
            ok = ok && rel <= 1e-4;
        }

        // with no covariates the fitted block log-odds reproduce theta_hat
        CovariateTable none(n);
        PairDesign empty_design(none);
        LogitFitReport plain = optimize_theta_beta(g, z, empty_design);
        BlockStats stats = block_stats(g, z);
        BlockMatrix th = theta_hat(stats);
        for (int a = 0; a < k; ++a)
            for (int b = a; b < k; ++b) {
                if (!th.is_defined(a, b)) continue;
                double fitted = sigmoid(plain.theta_tilde[static_cast<size_t>(a) * k + b]);
                double err = std::abs(fitted - th.at(a, b));
                worst_match = std::max(worst_match, err);
                ok = ok && err <= 1e-8;
            }
    }
    return line(ok, 7,
                fmt("20 instances: max final gradient norm %.2e (<1e-6), max score-vs-FD "
                    "relative error %.2e (<=1e-4), max |sigmoid(theta)-theta_hat| %.2e (<=1e-8) "
                    "(%.1f s)",
                    worst_grad, worst_fd, worst_match, seconds_since(t0)));
}

// ---- 8: model-order recovery on planted log-odds data ----

ProbabilityMatrixDense planted_logit_probs(int n, int k_true, double p_in, double p_out,
                                           double beta_cov, const std::vector<int>& v) {
    int per = n / k_true;
    ProbabilityMatrixDense p(n, 0.0);
    double lin = std::log(p_in / (1.0 - p_in));
    double lout = std::log(p_out / (1.0 - p_out));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            int ci = std::min(i / per, k_true - 1), cj = std::min(j / per, k_true - 1);
            double eta = (ci == cj) ? lin : lout;
            if (v[i] == v[j]) eta += (v[i] == 0) ? beta_cov : -beta_cov;
            p.set(i, j, sigmoid(eta));
        }
    return p;
}

bool criterion8() {
    auto t0 = Clock::now();
    const int n = 64, k_true = 4;
    std::vector<int> v(n);
    std::mt19937_64 vr(4242);
    for (int& x : v) x = static_cast<int>(vr() % 2);
    ProbabilityMatrixDense p = planted_logit_probs(n, k_true, 0.45, 0.03, 0.75, v);
    CovariateTable cov(n);
    cov.add("attr", 2, v);
    PairDesign design(cov);

    int hits = 0;
    std::ostringstream argmins;
    for (int seed = 0; seed < 10; ++seed) {
        Graph g = sample_graph(p, 9000 + static_cast<std::uint64_t>(seed));
        int best_k = 0;
        double best_bic = 1e300;
        for (int k = 1; k <= 8; ++k) {
            SamplerConfig cfg;
            cfg.n_sweeps = 60;
            cfg.restarts = 3;
            cfg.seed = 100 + static_cast<std::uint64_t>(seed);
            AlternatingFit af = alternating_fit(g, cov, k, cfg);
            double bic = bic_score(g, af.model, design);
            if (bic < best_bic) {
                best_bic = bic;
                best_k = k;
            }
        }
        argmins << (seed ? " " : "") << best_k;
        if (best_k == k_true) ++hits;
    }

    // held-out prediction should stop improving materially past k_true
    int cv_ok = 0;
    std::ostringstream cvs;
    for (int seed = 0; seed < 3; ++seed) {
        Graph g = sample_graph(p, 9000 + static_cast<std::uint64_t>(seed));
        double best_low = 1e300, best_high = 1e300;
        for (int k = 1; k <= 8; ++k) {
            SamplerConfig cfg;
            cfg.n_sweeps = 60;
            cfg.restarts = 3;
            cfg.seed = 100 + static_cast<std::uint64_t>(seed);
            CrossValidation cv = cross_validate(g, cov, k, 5, cfg, 777 + static_cast<std::uint64_t>(seed));
            (k <= k_true ? best_low : best_high) =
                std::min(k <= k_true ? best_low : best_high, cv.mean_heldout_nll);
        }
        cvs << (seed ? " " : "") << fmt("%.4f/%.4f", best_low, best_high);
        if (best_high >= best_low - 0.005 * std::abs(best_low)) ++cv_ok;
    }

    bool ok = hits >= 8 && cv_ok == 3;
    return line(ok, 8,
                fmt("BIC argmin over K=1..8 equals 4 in %d/10 seeds (argmins: %s); held-out NLL "
                    "min at K<=4 vs K>4 per seed: %s, no material improvement past 4 in %d/3 "
                    "(%.0f s)",
                    hits, argmins.str().c_str(), cvs.str().c_str(), cv_ok, seconds_since(t0)));
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<bool (*)()> checks = {criterion1, criterion2, criterion3, criterion4,
                                      criterion5, criterion6, criterion7, criterion8};
    bool ok = true;
    if (argc > 1) {
        int c = std::atoi(argv[1]);
        if (c < 1 || c > 8) {
            std::fprintf(stderr, "usage: %s [1..8]\n", argv[0]);
            return 2;
        }
        ok = checks[static_cast<size_t>(c - 1)]();
    } else {
        for (auto* check : checks) ok = check() && ok;
    }
    return ok ? 0 : 1;
}
