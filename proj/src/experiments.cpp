#include "sbm/experiments.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "sbm/bounds.hpp"
#include "sbm/covariates.hpp"
#include "sbm/io.hpp"
#include "sbm/likelihood.hpp"
#include "sbm/logit.hpp"
#include "sbm/metrics.hpp"
#include "sbm/csv.hpp"
#include "sbm/seeding.hpp"
#include "sbm/synth.hpp"

namespace sbm {

using nlohmann::json;

namespace {

// Stable per-kind tags entering the row seed derivation.
enum KindTag : std::uint64_t {
    kTagBound = 1,
    kTagLikErr = 2,
    kTagMisclass = 3,
    kTagModelOrder = 4,
};

std::uint64_t gamma_bits(double g) { return std::bit_cast<std::uint64_t>(g); }

const std::map<std::string, std::set<std::string>>& allowed_keys() {
    static const std::set<std::string> common = {"experiment", "trials", "base_seed",
                                                 "out",        "threads", "sampler"};
    static const std::map<std::string, std::set<std::string>> table = [] {
        std::map<std::string, std::set<std::string>> t;
        auto with = [&](const std::string& kind, std::set<std::string> extra) {
            extra.insert(common.begin(), common.end());
            t[kind] = std::move(extra);
        };
        with("bound-tightness", {"n", "p", "k_values", "delta"});
        with("likelihood-error", {"n_values", "c", "a", "log_base"});
        with("misclassification", {"n_values", "c", "a", "log_base", "gammas"});
        with("model-order",
             {"edge_list", "covariates", "degree_bins", "k_values", "folds", "rounds", "delta"});
        with("fit-real", {"edge_list", "covariates", "degree_bins", "k", "rounds", "delta"});
        return t;
    }();
    return table;
}

template <class T>
void maybe(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

void sort_rows(std::vector<ResultRow>& rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& l, const ResultRow& r) {
        auto key = [](const ResultRow& x) {
            return std::make_tuple(x.experiment, x.n, x.k, x.gamma.value_or(-1.0), x.trial);
        };
        return key(l) < key(r);
    });
}

std::string opt_str(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

std::optional<double> opt_parse(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return std::stod(s);
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw std::runtime_error("config: expected a JSON object");
    if (!j.contains("experiment")) throw std::runtime_error("config: missing 'experiment'");

    ExperimentConfig cfg;
    cfg.kind = j.at("experiment").get<std::string>();
    auto it = allowed_keys().find(cfg.kind);
    if (it == allowed_keys().end())
        throw std::runtime_error("config: unknown experiment kind '" + cfg.kind + "'");
    for (const auto& kv : j.items())
        if (!it->second.count(kv.key()))
            throw std::runtime_error("config: unknown key '" + kv.key() + "' for experiment '" +
                                     cfg.kind + "'");

    maybe(j, "trials", cfg.trials);
    maybe(j, "base_seed", cfg.base_seed);
    maybe(j, "out", cfg.out);
    maybe(j, "threads", cfg.threads);
    if (j.contains("sampler")) {
        const json& s = j.at("sampler");
        static const std::set<std::string> sampler_keys = {"sweeps", "restarts", "beta_start",
                                                           "beta_end", "parallel_restarts"};
        for (const auto& kv : s.items())
            if (!sampler_keys.count(kv.key()))
                throw std::runtime_error("config: unknown sampler key '" + kv.key() + "'");
        maybe(s, "sweeps", cfg.sampler.n_sweeps);
        maybe(s, "restarts", cfg.sampler.restarts);
        maybe(s, "beta_start", cfg.sampler.beta_start);
        maybe(s, "beta_end", cfg.sampler.beta_end);
        maybe(s, "parallel_restarts", cfg.sampler.parallel_restarts);
    }
    maybe(j, "n", cfg.n);
    maybe(j, "p", cfg.p);
    maybe(j, "delta", cfg.delta);
    maybe(j, "n_values", cfg.n_values);
    maybe(j, "c", cfg.c);
    maybe(j, "a", cfg.a);
    maybe(j, "log_base", cfg.log_base);
    maybe(j, "gammas", cfg.gammas);
    maybe(j, "edge_list", cfg.edge_list);
    maybe(j, "covariates", cfg.covariates);
    maybe(j, "degree_bins", cfg.degree_bins);
    maybe(j, "folds", cfg.folds);
    maybe(j, "rounds", cfg.rounds);
    maybe(j, "k", cfg.fit_k);
    if (j.contains("k_values")) {
        auto ks = j.at("k_values").get<std::vector<int>>();
        if (cfg.kind == "model-order")
            cfg.model_k = ks;
        else
            cfg.k_values = ks;
    }
    if (cfg.trials < 1) throw std::runtime_error("config: trials must be >= 1");
    return cfg;
}

std::string experiment_config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["experiment"] = cfg.kind;
    j["trials"] = cfg.trials;
    j["base_seed"] = cfg.base_seed;
    if (!cfg.out.empty()) j["out"] = cfg.out;
    if (cfg.threads > 0) j["threads"] = cfg.threads;
    j["sampler"] = {{"sweeps", cfg.sampler.n_sweeps},
                    {"restarts", cfg.sampler.restarts},
                    {"beta_start", cfg.sampler.beta_start},
                    {"beta_end", cfg.sampler.beta_end},
                    {"parallel_restarts", cfg.sampler.parallel_restarts}};
    if (cfg.kind == "bound-tightness") {
        j["n"] = cfg.n;
        j["p"] = cfg.p;
        j["k_values"] = cfg.k_values;
        j["delta"] = cfg.delta;
    } else if (cfg.kind == "likelihood-error" || cfg.kind == "misclassification") {
        j["n_values"] = cfg.n_values;
        j["c"] = cfg.c;
        j["a"] = cfg.a;
        j["log_base"] = cfg.log_base;
        if (cfg.kind == "misclassification") j["gammas"] = cfg.gammas;
    } else if (cfg.kind == "model-order") {
        j["edge_list"] = cfg.edge_list;
        if (!cfg.covariates.empty()) j["covariates"] = cfg.covariates;
        j["degree_bins"] = cfg.degree_bins;
        j["k_values"] = cfg.model_k;
        j["folds"] = cfg.folds;
        j["rounds"] = cfg.rounds;
        j["delta"] = cfg.delta;
    } else if (cfg.kind == "fit-real") {
        j["edge_list"] = cfg.edge_list;
        if (!cfg.covariates.empty()) j["covariates"] = cfg.covariates;
        j["degree_bins"] = cfg.degree_bins;
        j["k"] = cfg.fit_k;
        j["rounds"] = cfg.rounds;
        j["delta"] = cfg.delta;
    }
    return j.dump(2);
}

const std::vector<std::string>& result_columns() {
    static const std::vector<std::string> cols = {
        "experiment", "n",         "k",        "m",         "gamma",
        "trial",      "seed",      "kl_error", "kl_bound",  "rms_error",
        "rms_bound",  "lik_error", "misclass_rate", "bic",  "cv_error"};
    return cols;
}

std::vector<std::string> row_to_fields(const ResultRow& r) {
    return {r.experiment,
            std::to_string(r.n),
            std::to_string(r.k),
            opt_str(r.m),
            opt_str(r.gamma),
            std::to_string(r.trial),
            std::to_string(r.seed),
            opt_str(r.kl_error),
            opt_str(r.kl_bound),
            opt_str(r.rms_error),
            opt_str(r.rms_bound),
            opt_str(r.lik_error),
            opt_str(r.misclass_rate),
            opt_str(r.bic),
            opt_str(r.cv_error)};
}

ResultRow row_from_fields(const std::vector<std::string>& f) {
    if (f.size() != result_columns().size())
        throw std::runtime_error("result row: expected " + std::to_string(result_columns().size()) +
                                 " fields, got " + std::to_string(f.size()));
    ResultRow r;
    r.experiment = f[0];
    r.n = std::stoi(f[1]);
    r.k = std::stoi(f[2]);
    r.m = opt_parse(f[3]);
    r.gamma = opt_parse(f[4]);
    r.trial = std::stoi(f[5]);
    r.seed = std::stoull(f[6]);
    r.kl_error = opt_parse(f[7]);
    r.kl_bound = opt_parse(f[8]);
    r.rms_error = opt_parse(f[9]);
    r.rms_bound = opt_parse(f[10]);
    r.lik_error = opt_parse(f[11]);
    r.misclass_rate = opt_parse(f[12]);
    r.bic = opt_parse(f[13]);
    r.cv_error = opt_parse(f[14]);
    return r;
}

void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    write_csv_row(out, result_columns());
    for (const ResultRow& r : rows) write_csv_row(out, row_to_fields(r));
}

std::vector<ResultRow> read_results_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    auto records = parse_csv(in);
    if (records.empty() || records[0] != result_columns())
        throw std::runtime_error("result table: bad or missing header in '" + path + "'");
    std::vector<ResultRow> rows;
    rows.reserve(records.size() - 1);
    for (size_t r = 1; r < records.size(); ++r) rows.push_back(row_from_fields(records[r]));
    return rows;
}

void write_manifest(const std::string& path, const ExperimentConfig& cfg, size_t n_rows) {
    json j;
    j["tool"] = "sbmfit";
    j["version"] = "0.1.0";
    j["config"] = json::parse(experiment_config_to_json(cfg));
    j["columns"] = result_columns();
    j["rows"] = n_rows;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << j.dump(2) << "\n";
}

void parallel_for(int n_tasks, int threads, const std::function<void(int)>& fn) {
    if (n_tasks <= 0) return;
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, n_tasks));
    if (threads == 1) {
        for (int t = 0; t < n_tasks; ++t) fn(t);
        return;
    }
    std::atomic<int> next{0};
    std::mutex err_mu;
    std::exception_ptr err;
    auto worker = [&] {
        for (;;) {
            int t = next.fetch_add(1);
            if (t >= n_tasks) return;
            {
                std::lock_guard<std::mutex> lk(err_mu);
                if (err) return;
            }
            try {
                fn(t);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!err) err = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

std::vector<ResultRow> run_bound_tightness(const ExperimentConfig& cfg) {
    const int n_tasks = static_cast<int>(cfg.k_values.size()) * cfg.trials;
    std::vector<ResultRow> rows(n_tasks);
    const double n_pairs = static_cast<double>(pair_count(cfg.n));
    parallel_for(n_tasks, cfg.threads, [&](int t) {
        const int k = cfg.k_values[t / cfg.trials];
        const int trial = t % cfg.trials;
        ResultRow row;
        row.experiment = "bound-tightness";
        row.n = cfg.n;
        row.k = k;
        row.trial = trial;
        row.seed = derive_seed(cfg.base_seed, {kTagBound, static_cast<std::uint64_t>(cfg.n),
                                               static_cast<std::uint64_t>(k), 0,
                                               static_cast<std::uint64_t>(trial)});
        auto [g, pm] = gen_er(cfg.n, cfg.p, derive_seed(row.seed, {1}));
        SamplerConfig s = cfg.sampler;
        s.k = k;
        s.seed = derive_seed(row.seed, {2});
        FitResult fit = gibbs_fit(g, s);
        row.kl_error = observed_kl_error(g, pm, fit.best_z) / n_pairs;
        row.rms_error = observed_rms_error(g, pm, fit.best_z) / std::sqrt(n_pairs);
        BoundReport br = make_bound_report(cfg.n, k, cfg.delta);
        row.kl_bound = br.epsilon_kl_normalized;
        row.rms_bound = br.epsilon_rms_normalized;
        rows[t] = std::move(row);
    });
    sort_rows(rows);
    return rows;
}

std::vector<ResultRow> run_likelihood_error(const ExperimentConfig& cfg) {
    Schedule sched;
    sched.n_values = cfg.n_values;
    sched.c = cfg.c;
    sched.a = cfg.a;
    sched.log_base = cfg.log_base;
    const std::vector<SchedulePoint> points = expand_schedule(sched);
    const int n_tasks = static_cast<int>(points.size()) * cfg.trials;
    std::vector<ResultRow> rows(n_tasks);
    parallel_for(n_tasks, cfg.threads, [&](int t) {
        const SchedulePoint& pt = points[t / cfg.trials];
        const int trial = t % cfg.trials;
        ResultRow row;
        row.experiment = "likelihood-error";
        row.n = pt.n;
        row.k = pt.k;
        row.m = pt.m;
        row.trial = trial;
        row.seed = derive_seed(cfg.base_seed, {kTagLikErr, static_cast<std::uint64_t>(pt.n),
                                               static_cast<std::uint64_t>(pt.k), 0,
                                               static_cast<std::uint64_t>(trial)});
        const double p_er = pt.m / static_cast<double>(pair_count(pt.n));
        auto [g, pm] = gen_er(pt.n, p_er, derive_seed(row.seed, {1}));
        SamplerConfig s = cfg.sampler;
        s.k = pt.k;
        s.seed = derive_seed(row.seed, {2});
        FitResult fit = gibbs_fit(g, s);
        row.lik_error = likelihood_error_stat(g, pm, fit.best_z);
        rows[t] = std::move(row);
    });
    sort_rows(rows);
    return rows;
}

std::vector<ResultRow> run_misclassification(const ExperimentConfig& cfg) {
    struct Point {
        double gamma;
        SchedulePoint pt;
        PlantedModel model;
    };
    std::vector<Point> points;
    for (double gamma : cfg.gammas) {
        Schedule sched;
        sched.n_values = cfg.n_values;
        sched.c = cfg.c;
        sched.a = cfg.a;
        sched.gamma = gamma;
        sched.log_base = cfg.log_base;
        for (const SchedulePoint& pt : expand_schedule(sched))
            points.push_back({gamma, pt, calibrate_planted(pt.n, pt.k, pt.m, gamma)});
    }
    const int n_tasks = static_cast<int>(points.size()) * cfg.trials;
    std::vector<ResultRow> rows(n_tasks);
    parallel_for(n_tasks, cfg.threads, [&](int t) {
        const Point& pnt = points[t / cfg.trials];
        const int trial = t % cfg.trials;
        ResultRow row;
        row.experiment = "misclassification";
        row.n = pnt.pt.n;
        row.k = pnt.pt.k;
        row.m = pnt.pt.m;
        row.gamma = pnt.gamma;
        row.trial = trial;
        row.seed = derive_seed(cfg.base_seed, {kTagMisclass, static_cast<std::uint64_t>(pnt.pt.n),
                                               static_cast<std::uint64_t>(pnt.pt.k),
                                               gamma_bits(pnt.gamma),
                                               static_cast<std::uint64_t>(trial)});
        auto [g, pm] = gen_blockmodel(pnt.model, derive_seed(row.seed, {1}));
        (void)pm;
        SamplerConfig s = cfg.sampler;
        s.k = pnt.pt.k;
        s.seed = derive_seed(row.seed, {2});
        // The error rate belongs to the likelihood maximizer, so chains start
        // at the generating assignment; weakly identifiable models then drift
        // away on their own, while identifiable ones hold the basin.
        s.init = pnt.model.z_bar.labels;
        FitResult fit = gibbs_fit(g, s);
        row.misclass_rate =
            static_cast<double>(misclassification_count(pnt.model.z_bar, fit.best_z)) / pnt.pt.n;
        rows[t] = std::move(row);
    });
    sort_rows(rows);
    return rows;
}

ModelOrderOutput run_model_order(const ExperimentConfig& cfg) {
    if (cfg.edge_list.empty()) throw std::runtime_error("model-order: edge_list path required");
    EdgeListData ed = read_edge_list_file(cfg.edge_list);
    CovariateTable cov = cfg.covariates.empty() ? CovariateTable(ed.n_nodes)
                                                : read_covariates_csv_file(cfg.covariates);
    if (!cfg.covariates.empty() && ed.n_nodes > cov.n_nodes())
        throw std::runtime_error("model-order: edge list mentions node " +
                                 std::to_string(ed.n_nodes - 1) + " beyond covariate table");
    const int n = cov.n_nodes();
    Graph g = Graph::from_edges(n, ed.edges);
    if (cfg.degree_bins >= 2) cov.add(degree_bin_covariate(g, cfg.degree_bins));
    PairDesign design(cov);

    const int n_tasks = static_cast<int>(cfg.model_k.size());
    std::vector<ResultRow> rows(n_tasks);
    std::vector<json> blocks(n_tasks);
    parallel_for(n_tasks, cfg.threads, [&](int t) {
        const int k = cfg.model_k[t];
        ResultRow row;
        row.experiment = "model-order";
        row.n = n;
        row.k = k;
        row.trial = 0;
        row.seed = derive_seed(cfg.base_seed, {kTagModelOrder, static_cast<std::uint64_t>(n),
                                               static_cast<std::uint64_t>(k), 0, 0});
        SamplerConfig s = cfg.sampler;
        s.k = k;
        s.seed = derive_seed(row.seed, {2});
        AlternatingFit af = alternating_fit(g, cov, k, s, nullptr, cfg.rounds);
        row.bic = bic_score(g, af.model, design);
        row.kl_bound = make_bound_report(n, k, cfg.delta).epsilon_kl_normalized;
        if (cfg.folds >= 2) {
            CrossValidation cv =
                cross_validate(g, cov, k, cfg.folds, s, derive_seed(row.seed, {3}));
            row.cv_error = cv.mean_heldout_nll;
            row.misclass_rate = cv.misclass_rate;  // held-out edge prediction error
        }
        rows[t] = std::move(row);

        json b;
        b["k"] = k;
        b["loglik"] = af.loglik;
        b["ridged"] = af.ridged;
        b["class_sizes"] = af.model.z.class_sizes();
        std::vector<std::vector<double>> dens(k, std::vector<double>(k));
        for (int aa = 0; aa < k; ++aa)
            for (int bb = 0; bb < k; ++bb) dens[aa][bb] = sigmoid(af.model.theta(aa, bb));
        b["block_mean_prob"] = dens;
        b["beta"] = af.model.beta;
        blocks[t] = std::move(b);
    });
    sort_rows(rows);

    json arr = json::array();
    for (auto& b : blocks) arr.push_back(std::move(b));
    ModelOrderOutput out;
    out.rows = std::move(rows);
    out.blocks_json = arr.dump(2);
    return out;
}

}  // namespace sbm
