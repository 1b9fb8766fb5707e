#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sbm/assignment.hpp"
#include "sbm/block_matrix.hpp"
#include "sbm/graph.hpp"

namespace sbm {

// Planted partition with theta_bar = alpha*I + beta*11^T over K near-equal
// classes (the first N mod K classes get the extra node).
struct PlantedModel {
    int n_nodes = 0;
    int k = 1;
    ClassAssignment z_bar;
    BlockMatrix theta_bar;
    double alpha = 0.0;
    double beta_p = 0.0;
};

PlantedModel make_planted(int n, int k, double alpha, double beta_p);

// A_ij ~ Bernoulli(P_ij) independently; deterministic per seed.
Graph sample_graph(const ProbabilityMatrixDense& p, std::uint64_t seed);

std::pair<Graph, ProbabilityMatrixDense> gen_er(int n, double p, std::uint64_t seed);
std::pair<Graph, ProbabilityMatrixDense> gen_blockmodel(const PlantedModel& m, std::uint64_t seed);

// Solves for (alpha, beta) such that the expected edge total is target_m and
// bernoulli_kl(alpha+beta, (alpha+2 beta)/2) = target_m * k^gamma / (20 n^2),
// by nested bisection with a forward re-verification of both equations.
PlantedModel calibrate_planted(int n, int k, double target_m, double gamma);

// Growth schedules M(N) = N (log N)^c, K(N) = ceil(N^a). Base 10 by default:
// with c=4 a natural-log schedule exceeds C(N,2) on the whole 50..1050 grid,
// so base e is available but not the default.
struct Schedule {
    std::vector<int> n_values;
    double c = 2.0;
    double a = 0.5;
    double gamma = 1.0;
    double log_base = 10.0;
};

struct SchedulePoint {
    int n = 0;
    double m = 0.0;
    int k = 1;
    double divergence_target = 0.0;  // target_m * k^gamma / (20 n^2)
};

// Concrete per-N parameters; throws when any derived M >= C(N,2).
std::vector<SchedulePoint> expand_schedule(const Schedule& s);

}  // namespace sbm
