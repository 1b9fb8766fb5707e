#include "doctest.h"

#include <cmath>
#include <vector>

#include "sbm/likelihood.hpp"
#include "sbm/synth.hpp"

using namespace sbm;

namespace {

std::vector<std::pair<int, int>> edge_list(const Graph& g) {
    std::vector<std::pair<int, int>> out;
    g.for_each_edge([&](int i, int j) { out.emplace_back(i, j); });
    return out;
}

}  // namespace

TEST_CASE("degenerate edge probabilities") {
    auto [g0, p0] = gen_er(20, 0.0, 1);
    CHECK(g0.edge_count() == 0);
    auto [g1, p1] = gen_er(20, 1.0, 1);
    CHECK(g1.edge_count() == pair_count(20));
    CHECK(p1.at(3, 7) == 1.0);
    CHECK_THROWS_AS(gen_er(0, 0.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_er(5, -0.1, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_er(5, 1.1, 1), std::invalid_argument);
}

TEST_CASE("generation is deterministic per seed") {
    auto [ga, pa] = gen_er(60, 0.2, 42);
    auto [gb, pb] = gen_er(60, 0.2, 42);
    CHECK(edge_list(ga) == edge_list(gb));
    auto [gc, pc] = gen_er(60, 0.2, 43);
    CHECK(edge_list(ga) != edge_list(gc));
}

TEST_CASE("edge totals concentrate at the binomial mean") {
    auto [g, p] = gen_er(500, 0.075, 7);
    double mean = 124750.0 * 0.075;
    double sd = std::sqrt(124750.0 * 0.075 * 0.925);
    CHECK(std::abs(static_cast<double>(g.edge_count()) - mean) <= 4.0 * sd);
    CHECK(p.expected_edges() == doctest::Approx(mean).epsilon(1e-12));
}

TEST_CASE("planted model layout") {
    PlantedModel m = make_planted(10, 3, 0.2, 0.1);
    CHECK(m.z_bar.class_sizes() == std::vector<int>{4, 3, 3});
    // contiguous labels, larger classes first
    CHECK(m.z_bar.labels == std::vector<int>{0, 0, 0, 0, 1, 1, 1, 2, 2, 2});
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            CHECK(m.theta_bar.at(a, b) == doctest::Approx(a == b ? 0.3 : 0.1).epsilon(1e-15));

    CHECK_THROWS_AS(make_planted(5, 6, 0.1, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(make_planted(5, 2, 0.1, 0.0), std::invalid_argument);   // beta must be > 0
    CHECK_THROWS_AS(make_planted(5, 2, -0.1, 0.2), std::invalid_argument);  // alpha >= 0
    CHECK_THROWS_AS(make_planted(5, 2, 0.6, 0.5), std::invalid_argument);   // alpha+beta < 1
}

TEST_CASE("zero assortativity reduces to an ER graph") {
    PlantedModel m = make_planted(40, 4, 0.0, 0.15);
    auto [gb, pb] = gen_blockmodel(m, 11);
    auto [ge, pe] = gen_er(40, 0.15, 11);
    CHECK(edge_list(gb) == edge_list(ge));
}

TEST_CASE("block densities match the planted matrix") {
    PlantedModel m = make_planted(200, 4, 0.2, 0.1);
    auto [g, p] = gen_blockmodel(m, 31);
    BlockStats st = block_stats(g, m.z_bar);
    for (int a = 0; a < 4; ++a)
        for (int b = a; b < 4; ++b) {
            double n = static_cast<double>(st.pairs(a, b));
            double want = m.theta_bar.at(a, b);
            double hat = static_cast<double>(st.edges(a, b)) / n;
            double sd = std::sqrt(want * (1.0 - want) / n);
            CHECK(std::abs(hat - want) <= 4.0 * sd);
        }
    // the probability matrix mirrors theta_bar exactly
    CHECK(p.at(0, 1) == doctest::Approx(0.3).epsilon(1e-15));    // both in class 0
    CHECK(p.at(0, 150) == doctest::Approx(0.1).epsilon(1e-15));  // cross block
}

TEST_CASE("calibration solves both equations") {
    const int n = 400, k = 20;
    const double m_target = 400.0 * std::pow(std::log(400.0), 2.0);
    const double gamma = 1.0;
    PlantedModel m = calibrate_planted(n, k, m_target, gamma);
    CHECK(m.alpha > 0.0);
    CHECK(m.beta_p > 0.0);
    CHECK(m.alpha + m.beta_p < 1.0);
    // expected edge total
    std::vector<int> sizes = m.z_bar.class_sizes();
    double s_diag = 0.0;
    for (int sz : sizes) s_diag += 0.5 * sz * (sz - 1.0);
    double m_exp = s_diag * m.alpha + static_cast<double>(pair_count(n)) * m.beta_p;
    CHECK(std::abs(m_exp - m_target) <= 1e-9 * std::max(1.0, m_target));
    // row-divergence condition
    double target_d = m_target * std::pow(static_cast<double>(k), gamma) / (20.0 * n * n);
    double d = bernoulli_kl(m.alpha + m.beta_p, (m.alpha + 2.0 * m.beta_p) / 2.0);
    CHECK(std::abs(d - target_d) <= 1e-9 * target_d);
    // the generator's expected edge count agrees
    auto [g, p] = gen_blockmodel(m, 3);
    CHECK(p.expected_edges() == doctest::Approx(m_target).epsilon(1e-9));
}

TEST_CASE("assortativity grows with the divergence exponent") {
    const int n = 300, k = 17;
    const double m_target = 300.0 * std::pow(std::log(300.0), 2.0);
    double prev = -1.0;
    for (double gamma : {0.8, 0.9, 1.0}) {
        PlantedModel m = calibrate_planted(n, k, m_target, gamma);
        CHECK(m.alpha > prev);
        prev = m.alpha;
    }
}

TEST_CASE("vanishing divergence target drives alpha to zero") {
    const int n = 100, k = 10;
    const double m_target = 800.0;
    PlantedModel m = calibrate_planted(n, k, m_target, -30.0);
    CHECK(m.alpha <= 1e-6);
    CHECK(m.beta_p == doctest::Approx(m_target / static_cast<double>(pair_count(n))).epsilon(1e-4));
}

TEST_CASE("calibration failure modes") {
    CHECK_THROWS_AS(calibrate_planted(50, 10, 0.0, 1.0), std::runtime_error);
    CHECK_THROWS_AS(calibrate_planted(50, 10, 1225.0, 1.0), std::runtime_error);  // M = C(N,2)
    CHECK_THROWS_AS(calibrate_planted(50, 50, 100.0, 1.0), std::runtime_error);   // K = N
    // unreachable divergence: gigantic exponent wants more than alpha+beta<1 allows
    CHECK_THROWS_WITH_AS(calibrate_planted(50, 49, 100.0, 10.0), doctest::Contains("unreachable"),
                         std::runtime_error);
}

TEST_CASE("schedule expansion at the documented reference point") {
    Schedule s;
    s.n_values = {100};
    s.c = 2.0;
    s.a = 0.5;
    s.log_base = std::exp(1.0);
    std::vector<SchedulePoint> pts = expand_schedule(s);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].m == doctest::Approx(2121.0).epsilon(2e-4));
    CHECK(pts[0].k == 10);
    CHECK(pts[0].divergence_target ==
          doctest::Approx(pts[0].m * 10.0 / (20.0 * 100.0 * 100.0)).epsilon(1e-12));
}

TEST_CASE("schedule exponents control K") {
    Schedule s;
    s.n_values = {100};
    s.a = 0.6;
    std::vector<SchedulePoint> pts = expand_schedule(s);
    CHECK(pts[0].k == 16);  // ceil(100^0.6) = ceil(15.85)
    s.a = 0.5;
    s.n_values = {1050};
    CHECK(expand_schedule(s)[0].k == 33);  // ceil(sqrt(1050)) = ceil(32.40)
}

TEST_CASE("base-10 schedules stay feasible across the whole grid") {
    for (double c : {2.0, 4.0})
        for (double a : {0.5, 0.6}) {
            Schedule s;
            s.n_values = {50, 100, 200, 400, 700, 1050};
            s.c = c;
            s.a = a;
            std::vector<SchedulePoint> pts = expand_schedule(s);
            for (const SchedulePoint& pt : pts) {
                CHECK(pt.m > 0.0);
                CHECK(pt.m < static_cast<double>(pair_count(pt.n)));
                CHECK(pt.k <= pt.n);
                // every point must be calibratable at gamma = 1
                PlantedModel m = calibrate_planted(pt.n, pt.k, pt.m, 1.0);
                CHECK(m.alpha + m.beta_p < 1.0);
            }
        }
}

TEST_CASE("natural-log c=4 growth overflows the pair budget") {
    Schedule s;
    s.n_values = {50, 100, 200, 400, 700, 1050};
    s.c = 4.0;
    s.log_base = std::exp(1.0);
    CHECK_THROWS_WITH_AS(expand_schedule(s), doctest::Contains(">= C(N,2)"), std::runtime_error);
}

TEST_CASE("schedule validation") {
    Schedule s;
    s.n_values = {100};
    s.log_base = 1.0;
    CHECK_THROWS_AS(expand_schedule(s), std::invalid_argument);
    s.log_base = 10.0;
    s.n_values = {1};
    CHECK_THROWS_AS(expand_schedule(s), std::runtime_error);
}
