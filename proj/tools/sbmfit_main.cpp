#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sbm/block_stats.hpp"
#include "sbm/bounds.hpp"
#include "sbm/covariates.hpp"
#include "sbm/csv.hpp"
#include "sbm/experiments.hpp"
#include "sbm/io.hpp"
#include "sbm/likelihood.hpp"
#include "sbm/logit.hpp"
#include "sbm/metrics.hpp"
#include "sbm/seeding.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct ExperimentOpts {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    int threads = 0;
    int trials = 0;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* out_opt = nullptr;
    CLI::Option* threads_opt = nullptr;
    CLI::Option* trials_opt = nullptr;
};

void add_common_flags(CLI::App* sub, ExperimentOpts& o) {
    sub->add_option("--config", o.config, "JSON experiment config");
    o.seed_opt = sub->add_option("--seed", o.seed, "base seed (overrides config)");
    o.out_opt = sub->add_option("--out", o.out, "output CSV path (overrides config)");
    o.threads_opt = sub->add_option("--threads", o.threads, "worker threads, 0 = hardware");
    o.trials_opt = sub->add_option("--trials", o.trials, "trials per config point");
}

// Median of a metric per N, in ascending N order.
std::vector<std::pair<double, double>> medians_by_n(
    const std::vector<sbm::ResultRow>& rows,
    const std::function<std::optional<double>(const sbm::ResultRow&)>& metric,
    const std::function<bool(const sbm::ResultRow&)>& filter = nullptr) {
    std::map<int, std::vector<double>> per_n;
    for (const auto& r : rows) {
        if (filter && !filter(r)) continue;
        if (auto v = metric(r)) per_n[r.n].push_back(*v);
    }
    std::vector<std::pair<double, double>> out;
    for (auto& [n, vals] : per_n) out.emplace_back(n, sbm::median(vals));
    return out;
}

double slope_of(const std::vector<std::pair<double, double>>& pts) {
    std::vector<double> xs, ys;
    for (auto& [x, y] : pts) {
        xs.push_back(x);
        ys.push_back(y);
    }
    return sbm::theil_sen_slope(xs, ys);
}

void emit_rows(const sbm::ExperimentConfig& cfg, const std::vector<sbm::ResultRow>& rows) {
    if (cfg.out.empty()) {
        sbm::write_csv_row(std::cout, sbm::result_columns());
        for (const auto& r : rows) sbm::write_csv_row(std::cout, sbm::row_to_fields(r));
        return;
    }
    sbm::write_results_csv(cfg.out, rows);
    sbm::write_manifest(cfg.out + ".manifest.json", cfg, rows.size());
    std::cout << "wrote " << rows.size() << " rows to " << cfg.out << "\n";
}

void run_experiment(const std::string& kind, const ExperimentOpts& o) {
    sbm::ExperimentConfig cfg;
    cfg.kind = kind;
    if (!o.config.empty()) {
        cfg = sbm::parse_experiment_config(slurp(o.config));
        if (cfg.kind != kind)
            throw std::runtime_error("config is for experiment '" + cfg.kind +
                                     "' but subcommand is '" + kind + "'");
    }
    if (o.seed_opt->count()) cfg.base_seed = o.seed;
    if (o.out_opt->count()) cfg.out = o.out;
    if (o.threads_opt->count()) cfg.threads = o.threads;
    if (o.trials_opt->count()) cfg.trials = o.trials;

    if (kind == "bound-tightness") {
        auto rows = sbm::run_bound_tightness(cfg);
        emit_rows(cfg, rows);
        double ratio_sum = 0.0;
        int viol = 0, cnt = 0;
        for (const auto& r : rows) {
            if (!r.kl_error || !r.kl_bound) continue;
            if (*r.kl_error > *r.kl_bound || *r.rms_error > *r.rms_bound) ++viol;
            if (*r.kl_error > 0) {
                ratio_sum += *r.kl_bound / *r.kl_error;
                ++cnt;
            }
        }
        std::cout << "bound violations: " << viol << "/" << rows.size()
                  << "; mean bound/KL-error ratio: " << (cnt ? ratio_sum / cnt : 0.0) << "\n";
    } else if (kind == "likelihood-error") {
        auto rows = sbm::run_likelihood_error(cfg);
        emit_rows(cfg, rows);
        auto med = medians_by_n(rows, [](const sbm::ResultRow& r) { return r.lik_error; });
        if (med.size() >= 2)
            std::cout << "Theil-Sen slope of median |L-L_bar|/M over N: " << slope_of(med) << "\n";
    } else if (kind == "misclassification") {
        auto rows = sbm::run_misclassification(cfg);
        emit_rows(cfg, rows);
        for (double gamma : cfg.gammas) {
            auto med = medians_by_n(
                rows, [](const sbm::ResultRow& r) { return r.misclass_rate; },
                [gamma](const sbm::ResultRow& r) { return r.gamma && *r.gamma == gamma; });
            if (med.size() >= 2)
                std::cout << "gamma=" << gamma
                          << ": Theil-Sen slope of median N_e/N over N: " << slope_of(med) << "\n";
        }
    } else if (kind == "model-order") {
        auto out = sbm::run_model_order(cfg);
        emit_rows(cfg, out.rows);
        if (!cfg.out.empty()) {
            std::string bpath = cfg.out + ".blocks.json";
            std::ofstream bf(bpath);
            if (!bf) throw std::runtime_error("cannot write '" + bpath + "'");
            bf << out.blocks_json << "\n";
            std::cout << "wrote block summaries to " << bpath << "\n";
        }
        const sbm::ResultRow* best_bic = nullptr;
        const sbm::ResultRow* best_cv = nullptr;
        for (const auto& r : out.rows) {
            if (r.bic && (!best_bic || *r.bic < *best_bic->bic)) best_bic = &r;
            if (r.cv_error && (!best_cv || *r.cv_error < *best_cv->cv_error)) best_cv = &r;
        }
        if (best_bic) std::cout << "BIC minimum at K=" << best_bic->k << "\n";
        if (best_cv) std::cout << "CV minimum at K=" << best_cv->k << "\n";
    }
}

struct FitOpts {
    std::string edges, covariates, truth, out;
    int k = 2;
    int degree_bins = 0;
    int rounds = 12;
    double delta = 0.05;
    std::uint64_t seed = 0;
    int sweeps = 0;
    int restarts = 5;
};

void print_matrix(const std::string& label, int k,
                  const std::function<std::string(int, int)>& cell) {
    std::cout << label << "\n";
    for (int a = 0; a < k; ++a) {
        std::cout << "  ";
        for (int b = 0; b < k; ++b) std::cout << std::setw(10) << cell(a, b);
        std::cout << "\n";
    }
}

void run_fit(const FitOpts& o) {
    sbm::EdgeListData ed = sbm::read_edge_list_file(o.edges);
    std::vector<int> truth_labels;
    if (!o.truth.empty()) truth_labels = sbm::read_labels_file(o.truth);

    int n = ed.n_nodes;
    std::unique_ptr<sbm::CovariateTable> cov;
    if (!o.covariates.empty()) {
        cov = std::make_unique<sbm::CovariateTable>(sbm::read_covariates_csv_file(o.covariates));
        if (ed.n_nodes > cov->n_nodes())
            throw std::runtime_error("edge list mentions node " + std::to_string(ed.n_nodes - 1) +
                                     " beyond covariate table");
        n = cov->n_nodes();
    }
    if (!truth_labels.empty()) n = std::max(n, static_cast<int>(truth_labels.size()));
    sbm::Graph g = sbm::Graph::from_edges(n, ed.edges);

    sbm::SamplerConfig s;
    s.k = o.k;
    s.n_sweeps = o.sweeps;
    s.restarts = o.restarts;
    s.seed = o.seed;

    nlohmann::json j;
    j["n"] = n;
    j["k"] = o.k;
    j["edges"] = g.edge_count();
    std::ostringstream num;
    num << std::setprecision(6);

    sbm::ClassAssignment z_est;
    if (cov || o.degree_bins >= 2) {
        if (!cov) cov = std::make_unique<sbm::CovariateTable>(n);
        if (o.degree_bins >= 2) cov->add(sbm::degree_bin_covariate(g, o.degree_bins));
        sbm::PairDesign design(*cov);
        sbm::AlternatingFit af = sbm::alternating_fit(g, *cov, o.k, s, nullptr, o.rounds);
        z_est = af.model.z;
        std::cout << "log-likelihood: " << af.loglik << "\n";
        std::cout << "BIC: " << sbm::bic_score(g, af.model, design) << "\n";
        print_matrix("block edge probabilities sigmoid(theta):", o.k, [&](int a, int b) {
            std::ostringstream c;
            c << std::setprecision(4) << sbm::sigmoid(af.model.theta(a, b));
            return c.str();
        });
        std::cout << "beta:";
        for (double v : af.model.beta) std::cout << " " << std::setprecision(4) << v;
        std::cout << "\n";
        j["loglik"] = af.loglik;
        j["bic"] = sbm::bic_score(g, af.model, design);
        j["beta"] = af.model.beta;
        j["labels"] = z_est.labels;
    } else {
        sbm::FitResult fit = sbm::gibbs_fit(g, s);
        z_est = fit.best_z;
        sbm::BlockStats stats = sbm::block_stats(g, z_est);
        sbm::BlockMatrix that = sbm::theta_hat(stats);
        std::cout << "profile log-likelihood: " << fit.best_profile_loglik << "\n";
        print_matrix("theta_hat:", o.k, [&](int a, int b) {
            if (!that.is_defined(a, b)) return std::string("-");
            std::ostringstream c;
            c << std::setprecision(4) << that.at(a, b);
            return c.str();
        });
        j["profile_loglik"] = fit.best_profile_loglik;
        j["labels"] = z_est.labels;
    }
    std::cout << "class sizes:";
    for (int sz : z_est.class_sizes()) std::cout << " " << sz;
    std::cout << "\n";

    sbm::BoundReport br = sbm::make_bound_report(n, o.k, o.delta);
    std::cout << "KL error bound (delta=" << o.delta << "): " << br.epsilon_kl << " nats, "
              << br.epsilon_kl_normalized << " per pair; RMS bound " << br.epsilon_rms_normalized
              << "\n";
    j["kl_bound"] = br.epsilon_kl;
    j["kl_bound_normalized"] = br.epsilon_kl_normalized;
    j["rms_bound_normalized"] = br.epsilon_rms_normalized;

    if (!truth_labels.empty()) {
        int tk = 1;
        for (int l : truth_labels) tk = std::max(tk, l + 1);
        if (static_cast<int>(truth_labels.size()) != n)
            throw std::runtime_error("truth labels cover " + std::to_string(truth_labels.size()) +
                                     " nodes, graph has " + std::to_string(n));
        sbm::ClassAssignment z_true(tk, truth_labels);
        int ne = sbm::misclassification_count(z_true, z_est);
        std::cout << "misclassified nodes N_e: " << ne << " (" << static_cast<double>(ne) / n
                  << " of N)\n";
        j["n_errors"] = ne;
    }
    if (!o.out.empty()) {
        std::ofstream f(o.out);
        if (!f) throw std::runtime_error("cannot write '" + o.out + "'");
        f << j.dump(2) << "\n";
        std::cout << "wrote fit report to " << o.out << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stochastic blockmodel fitting, error bounds, and experiment drivers"};
    app.require_subcommand(1);

    std::map<std::string, std::shared_ptr<ExperimentOpts>> opts;
    const std::map<std::string, std::string> kinds = {
        {"bound-tightness", "KL/RMS error bounds vs observed errors on ER graphs"},
        {"likelihood-error", "normalized likelihood error along a growth schedule"},
        {"misclassification", "N_e/N on calibrated planted models"},
        {"model-order", "BIC and cross-validation over K on an edge-list dataset"}};
    for (const auto& [kind, desc] : kinds) {
        CLI::App* sub = app.add_subcommand(kind, desc);
        auto o = std::make_shared<ExperimentOpts>();
        add_common_flags(sub, *o);
        opts[kind] = o;
        sub->callback([kind = kind, o] { run_experiment(kind, *o); });
    }

    CLI::App* fit = app.add_subcommand("fit", "single fit of an edge-list network");
    auto fo = std::make_shared<FitOpts>();
    fit->add_option("--edges", fo->edges, "edge list path")->required();
    fit->add_option("--k", fo->k, "number of classes")->required();
    fit->add_option("--covariates", fo->covariates, "covariate CSV path");
    fit->add_option("--degree-bins", fo->degree_bins, "append a degree-bin covariate (>= 2 bins)");
    fit->add_option("--truth", fo->truth, "true labels, one integer per line");
    fit->add_option("--rounds", fo->rounds, "alternation rounds for the covariate model");
    fit->add_option("--delta", fo->delta, "confidence level for the error bound");
    fit->add_option("--seed", fo->seed, "sampler seed");
    fit->add_option("--sweeps", fo->sweeps, "sweeps per restart, 0 = 50 ln N");
    fit->add_option("--restarts", fo->restarts, "independent restarts");
    fit->add_option("--out", fo->out, "write a JSON fit report here");
    fit->callback([fo] { run_fit(*fo); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
