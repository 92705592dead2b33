#include "oracles.hpp"

#include <presist/error.hpp>
#include <presist/graph.hpp>
#include <presist/penergy.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace presist;

namespace {

const std::vector<double> kPs{1.5, 2.0, 2.5, 3.0, 4.0};

TerminalProblem between(const Graph &g, std::vector<VertexId> src, std::vector<VertexId> gnd) {
    return collapse_terminals(g, src, gnd);
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

} // namespace

TEST(Energy, Examples) {
    const auto edge = oracle::path(1);
    EXPECT_DOUBLE_EQ(p_energy(edge, std::vector<double>{1, 0}, 2.0), 1.0);
    const auto p3 = oracle::path(3);
    EXPECT_NEAR(p_energy(p3, std::vector<double>{1, 2.0 / 3, 1.0 / 3, 0}, 3.0), 1.0 / 9, 1e-15);
    for (double p : kPs) EXPECT_EQ(p_energy(oracle::cycle(7), std::vector<double>(7, 0.3), p), 0.0);
    EXPECT_THROW(p_energy(edge, std::vector<double>{1}, 2.0), Error);
}

TEST(Laplacian, Examples) {
    const auto lap = p_laplacian(oracle::path(2), std::vector<double>{0, 1, 2}, 2.0);
    EXPECT_DOUBLE_EQ(lap[1], 0.0);
    std::vector<WeightedEdge> star;
    for (VertexId i = 1; i <= 4; ++i) star.push_back({0, i, 1});
    const auto g = Graph::from_edges(5, star);
    EXPECT_DOUBLE_EQ(p_laplacian(g, std::vector<double>{1, 0, 0, 0, 0}, 3.0)[0], 4.0);
    for (double v : p_laplacian(oracle::cycle(5), std::vector<double>(5, 2.0), 2.5)) EXPECT_EQ(v, 0.0);
}

TEST(Solver, PathMidpoint) {
    for (double p : kPs) {
        const auto pot = solve_potential(between(oracle::path(2), {0}, {2}), p, 1.0);
        ASSERT_EQ(pot.values.size(), 3u);
        EXPECT_NEAR(pot.values[1], 0.5, 1e-10) << "p=" << p;
    }
}

TEST(Solver, ParallelEdgesHaveNoFreeVertices) {
    const auto g = Graph::from_edges(2, std::vector<WeightedEdge>{{0, 1, 4}});
    const auto pot = solve_potential(between(g, {0}, {1}), 3.0, 1.0);
    EXPECT_EQ(pot.values.size(), 2u);
    EXPECT_DOUBLE_EQ(pot.energy, 4.0);
}

TEST(Solver, CycleAntipodalIsLinear) {
    const auto prob = between(oracle::cycle(8), {0}, {4});
    const auto pot = solve_potential(prob, 2.0, 1.0);
    for (std::size_t i = 0; i < prob.free_count(); ++i) {
        const VertexId orig = prob.free_original[i];
        const int dist = std::min<int>(orig, 8 - static_cast<int>(orig));
        EXPECT_NEAR(pot.values[i + 1], 1.0 - dist / 4.0, 1e-12);
    }
}

TEST(Resistance, SeriesAndParallelOracles) {
    for (double p : kPs) {
        for (std::size_t m = 1; m <= 10; ++m) {
            const auto fr = p_resistance(between(oracle::path(m), {0}, {static_cast<VertexId>(m)}), p);
            EXPECT_LE(rel(fr.resistance, std::pow(static_cast<double>(m), p - 1)), 1e-8) << "series m=" << m << " p=" << p;
        }
        for (std::uint32_t k = 1; k <= 10; ++k) {
            const auto g = Graph::from_edges(2, std::vector<WeightedEdge>{{0, 1, k}});
            EXPECT_LE(rel(p_resistance(between(g, {0}, {1}), p).resistance, 1.0 / k), 1e-8) << "parallel k=" << k;
        }
    }
    EXPECT_NEAR(p_resistance(between(oracle::path(3), {0}, {3}), 3.0).resistance, 9.0, 9e-8);
    EXPECT_NEAR(p_resistance(between(oracle::cycle(8), {0}, {4}), 2.0).resistance, 2.0, 1e-9);
}

TEST(Resistance, MatchesGaussianEliminationAtP2) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        const auto g = oracle::random_graph(12, 10, rng);
        const auto fr = p_resistance(between(g, {0}, {11}), 2.0);
        EXPECT_LE(rel(fr.resistance, oracle::resistance2(g, {0}, {11})), 1e-10);
    }
}

TEST(Resistance, MatchesGaussSeidelOracleForGeneralP) {
    std::mt19937_64 rng(5);
    for (double p : kPs) {
        for (int trial = 0; trial < 6; ++trial) {
            const auto g = oracle::random_graph(9, 8, rng);
            const double mine = p_resistance(between(g, {0, 1}, {8}), p).resistance;
            EXPECT_LE(rel(mine, oracle::resistance_p(g, {0, 1}, {8}, p)), 1e-6) << "p=" << p;
        }
    }
}

TEST(Resistance, CurrentNormalisedIdentity) {
    const auto ball = build_ball(GraphSpec::lattice(2, 0), 7);
    for (double p : kPs) {
        const auto fr = p_resistance(dirichlet_problem(ball, 5, DirichletMode::Sphere), p);
        const double t = fr.normalized_source_value;
        EXPECT_LE(rel(fr.resistance, std::pow(t, p - 1)), 1e-8) << p;
        EXPECT_LE(rel(fr.normalized_energy, t), 1e-8) << p;
        EXPECT_LE(rel(fr.total_current, fr.capacity), 1e-8) << p;
    }
}

TEST(Resistance, MaximumPrincipleAndConvergence) {
    std::mt19937_64 rng(21);
    for (double p : kPs) {
        const auto g = oracle::random_graph(30, 40, rng);
        const auto pot = solve_potential(between(g, {0}, {29}), p, 2.5);
        EXPECT_EQ(*std::min_element(pot.values.begin(), pot.values.end()), 0.0);
        EXPECT_EQ(*std::max_element(pot.values.begin(), pot.values.end()), 2.5);
        EXPECT_LE(pot.residual, 1e-10 * (1 + pot.energy));
    }
}

TEST(Resistance, UniqueFromDifferentStarts) {
    std::mt19937_64 rng(8);
    for (double p : kPs) {
        const auto g = oracle::random_graph(25, 30, rng);
        const auto prob = between(g, {0}, {24});
        const auto a = solve_potential(prob, p, 1.0);
        SolverConfig cfg;
        std::uniform_real_distribution<double> u(0, 1);
        std::vector<double> start(prob.free_count());
        for (auto &x : start) x = u(rng);
        cfg.initial_free = start;
        const auto b = solve_potential(prob, p, 1.0, cfg);
        for (std::size_t i = 0; i < a.values.size(); ++i) EXPECT_NEAR(a.values[i], b.values[i], 1e-8);
    }
}

TEST(Resistance, DualityAndMonotonicity) {
    std::mt19937_64 rng(13);
    for (double p : kPs) {
        for (int trial = 0; trial < 5; ++trial) {
            const auto g = oracle::random_graph(20, 20, rng);
            const double uv = p_resistance(between(g, {0}, {19}), p).resistance;
            const double vu = p_resistance(between(g, {19}, {0}), p).resistance;
            EXPECT_LE(rel(uv, vu), 1e-10);
            const double bigger_src = p_resistance(between(g, {0, 1, 2}, {19}), p).resistance;
            const double bigger_both = p_resistance(between(g, {0, 1, 2}, {17, 18, 19}), p).resistance;
            EXPECT_LE(bigger_src, uv * (1 + 1e-9));
            EXPECT_LE(bigger_both, bigger_src * (1 + 1e-9));
        }
    }
}

TEST(Resistance, GeneralSolverAtP2MatchesDirect) {
    std::mt19937_64 rng(2);
    const auto g = oracle::random_graph(40, 60, rng);
    const auto prob = between(g, {0}, {39});
    const auto direct = solve_potential(prob, 2.0, 1.0);
    SolverConfig cfg;
    cfg.initial_free = std::vector<double>(prob.free_count(), 0.5);
    const auto newton = solve_potential(prob, 2.0, 1.0, cfg);
    for (std::size_t i = 0; i < direct.values.size(); ++i) EXPECT_NEAR(direct.values[i], newton.values[i], 1e-8);
}

TEST(Resistance, IterativePathMatchesDirect) {
    const auto ball = build_ball(GraphSpec::lattice(3, 0), 6);
    const auto prob = dirichlet_problem(ball, 5, DirichletMode::Sphere);
    SolverConfig iterative;
    iterative.direct_limit = 10;
    EXPECT_LE(rel(p_resistance(prob, 2.0, iterative).resistance, p_resistance(prob, 2.0).resistance), 1e-10);
}

TEST(Resistance, RejectsPAtMostOne) {
    EXPECT_THROW(p_resistance(between(oracle::path(2), {0}, {2}), 1.0), Error);
}

TEST(MaxResistance, Examples) {
    const auto c8 = max_resistance(oracle::cycle(8), 2.0);
    EXPECT_NEAR(c8.value, 2.0, 1e-9);
    EXPECT_EQ((c8.u + 4) % 8, c8.v % 8);
    EXPECT_NEAR(max_resistance(oracle::complete(4), 2.0).value, 0.5, 1e-12);
    for (double p : kPs) EXPECT_NEAR(max_resistance(oracle::path(1), p).value, 1.0, 1e-9);
    MaxResistanceOptions t;
    t.transitive = true;
    // Two 5-edge arcs in parallel: capacities 5^{1-p} add.
    EXPECT_NEAR(max_resistance(oracle::cycle(10), 3.0, t).value, 12.5, 1e-7);
}

TEST(Stokes, IdentityHolds) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1, 1);
    const auto c8 = oracle::cycle(8);
    std::vector<double> f(8);
    for (auto &x : f) x = u(rng);
    EXPECT_LE(stokes_check(c8, f, 2.0, std::vector<VertexId>{1, 2, 5}), 1e-9);
    EXPECT_EQ(stokes_check(c8, std::vector<double>(8, 1.0), 3.0, std::vector<VertexId>{0, 3}), 0.0);

    const auto ball = build_ball(GraphSpec::lattice(2, 0), 4);
    std::vector<double> h(ball.size());
    for (auto &x : h) x = u(rng);
    EXPECT_LE(stokes_check(ball.base, h, 2.5, ball.ball(2)), 1e-9);
}

TEST(Records, FlatStructuredText) {
    const auto fr = p_resistance(between(oracle::path(2), {0}, {2}), 2.0);
    const auto text = flow_record(fr);
    EXPECT_NE(text.find("resistance: 2\n"), std::string::npos);
    EXPECT_NE(text.find("values:\n  0: 1\n  1: 0.5\n  2: 0\n"), std::string::npos);
    EXPECT_NE(potential_record(fr.potential).find("source_value: 1\n"), std::string::npos);
}
