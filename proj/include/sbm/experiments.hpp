#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sbm/gibbs.hpp"

namespace sbm {

// One experiment run, parsed from JSON (unknown keys rejected). Fields beyond
// the common block apply only to the kinds noted.
struct ExperimentConfig {
    std::string kind;  // bound-tightness | likelihood-error | misclassification | model-order | fit-real
    int trials = 10;
    std::uint64_t base_seed = 1;
    std::string out;
    int threads = 0;  // 0 = hardware concurrency
    SamplerConfig sampler;

    // bound-tightness
    int n = 500;
    double p = 0.075;
    std::vector<int> k_values{5, 10, 20, 30, 40, 50};
    double delta = 0.05;

    // likelihood-error / misclassification
    std::vector<int> n_values{50, 100, 200, 400, 700, 1050};
    double c = 2.0;
    double a = 0.5;
    double log_base = 10.0;
    std::vector<double> gammas{0.8, 0.9, 1.0};  // misclassification only

    // model-order / fit-real
    std::string edge_list;
    std::string covariates;  // optional; empty = none
    int degree_bins = 8;
    std::vector<int> model_k{1, 2, 3, 4, 5, 6, 7, 8};
    int folds = 5;  // < 2 skips cross-validation
    int rounds = 12;
    int fit_k = 2;  // fit-real only
};

ExperimentConfig parse_experiment_config(const std::string& json_text);
std::string experiment_config_to_json(const ExperimentConfig& cfg);

// One (config point, trial) outcome; metric fields are kind-dependent.
struct ResultRow {
    std::string experiment;
    int n = 0;
    int k = 0;
    std::optional<double> m;
    std::optional<double> gamma;
    int trial = 0;
    std::uint64_t seed = 0;
    std::optional<double> kl_error;  // normalized by C(N,2)
    std::optional<double> kl_bound;
    std::optional<double> rms_error;  // normalized by sqrt(C(N,2))
    std::optional<double> rms_bound;
    std::optional<double> lik_error;
    std::optional<double> misclass_rate;
    std::optional<double> bic;
    std::optional<double> cv_error;
};

const std::vector<std::string>& result_columns();
std::vector<std::string> row_to_fields(const ResultRow& row);
ResultRow row_from_fields(const std::vector<std::string>& fields);

void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_results_csv(const std::string& path);
void write_manifest(const std::string& path, const ExperimentConfig& cfg, size_t n_rows);

// Dynamic work sharing over [0, n_tasks); exceptions rethrown on the caller.
void parallel_for(int n_tasks, int threads, const std::function<void(int)>& fn);

std::vector<ResultRow> run_bound_tightness(const ExperimentConfig& cfg);
std::vector<ResultRow> run_likelihood_error(const ExperimentConfig& cfg);
std::vector<ResultRow> run_misclassification(const ExperimentConfig& cfg);

struct ModelOrderOutput {
    std::vector<ResultRow> rows;
    std::string blocks_json;  // per-K class sizes and sigmoid(theta_tilde) block means
};
ModelOrderOutput run_model_order(const ExperimentConfig& cfg);

}  // namespace sbm
