#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sbm/assignment.hpp"
#include "sbm/block_stats.hpp"
#include "sbm/graph.hpp"
#include "sbm/pair_mask.hpp"

namespace sbm {

// Single-site Gibbs search over class assignments, scored by the profile
// log-likelihood. beta_start == beta_end == 1 gives plain Gibbs; the default
// geometric ramp anneals towards mode-finding.
struct SamplerConfig {
    int k = 2;
    int n_sweeps = 0;  // 0 = default 50 ln N
    double beta_start = 1.0;
    double beta_end = 3.0;
    int restarts = 5;
    std::uint64_t seed = 0;
    std::optional<std::vector<int>> init;  // uniform-random when absent
    bool parallel_restarts = true;

    int resolved_sweeps(int n_nodes) const;
    double beta_at(int sweep) const;  // geometric interpolation over resolved sweeps
};

struct FitResult {
    ClassAssignment best_z;
    double best_profile_loglik = 0.0;
    std::vector<double> trace;  // best-so-far profile log-lik per sweep, across restarts
    int sweeps_run = 0;
};

// Explores the profile likelihood with `restarts` independent chains and
// returns the best assignment ever visited. Deterministic given cfg.seed.
FitResult gibbs_fit(const Graph& g, const SamplerConfig& cfg, const PairMask* mask = nullptr);

// Profile log-likelihood change if `node` moved to `new_class`; inputs untouched.
double incremental_move_delta(const BlockStats& stats, const Graph& g, const ClassAssignment& z,
                              int node, int new_class, const PairMask* mask = nullptr);

}  // namespace sbm
