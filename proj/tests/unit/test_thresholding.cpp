#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sparserec/error.hpp"
#include "sparserec/thresholding.hpp"

using namespace sparserec;

TEST(HardThreshold, KeepsLargestMagnitudes) {
    const auto h = hard_threshold(Vector{3, -1, 2, 0}, 2);
    EXPECT_EQ(h.values, (Vector{3, 0, 2, 0}));
    EXPECT_EQ(h.support.indices(), (std::vector<std::size_t>{0, 2}));
}

TEST(HardThreshold, SparseInputUnchanged) {
    const Vector z{0, 5, 0, -1};
    EXPECT_EQ(hard_threshold(z, 2).values, z);
}

TEST(HardThreshold, TiesGoToLowestIndex) { EXPECT_EQ(hard_threshold(Vector{1, -1}, 1).values, (Vector{1, 0})); }

TEST(HardThreshold, SparsityBounds) {
    EXPECT_THROW(hard_threshold(Vector{1, 2}, 3), Error);
    EXPECT_EQ(hard_threshold(Vector{1, 2}, 0).values, (Vector{0, 0}));
}

TEST(HardThreshold, ResultIsNearestSparseVector) {
    std::mt19937_64 gen(1);
    std::normal_distribution<double> n;
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> z(7);
        for (auto& v : z) v = n(gen);
        const auto h = hard_threshold(z, 3);
        double best = 0.0;
        oracle::nearest_support(z, z, 3, &best);
        EXPECT_NEAR(oracle::dist(h.values, z), best, 1e-12);
    }
}

TEST(SupportSet, Validation) {
    EXPECT_THROW(SupportSet({1, 1}, 4), Error);
    EXPECT_THROW(SupportSet({4}, 4), Error);
    const SupportSet s({3, 0}, 4);
    EXPECT_EQ(s.indices(), (std::vector<std::size_t>{0, 3}));
    EXPECT_TRUE(s.contains(3));
    EXPECT_FALSE(s.contains(1));
}

TEST(Project, Cases) {
    const Vector z{1, 2, 3};
    EXPECT_EQ(project(z, SupportSet::full(3)), z);
    EXPECT_EQ(project(z, SupportSet({}, 3)), (Vector{0, 0, 0}));
    EXPECT_EQ(project(z, SupportSet({0, 2}, 3)), (Vector{1, 0, 3}));
}

TEST(CostGradient, ZeroAtExactFit) {
    const Matrix a(2, 3, {1, 0, 2, 0, 1, -1});
    const Vector z{1, 2, 3};
    const auto y = matvec(a, z);
    for (double g : cost_gradient(a, y, z)) EXPECT_EQ(g, 0.0);
}

TEST(CostGradient, IdentityWorkedCase) {
    const auto g = cost_gradient(Matrix::identity(2), Vector{1, 0}, Vector{0.5, 0.4});
    EXPECT_NEAR(g[0], -1.0, 1e-12);
    EXPECT_NEAR(g[1], 0.8, 1e-12);
    const auto fd = oracle::fd_gradient(oracle::to_dense(Matrix::identity(2)), {1, 0}, {0.5, 0.4});
    EXPECT_NEAR(g[0], fd[0], 1e-4);
    EXPECT_NEAR(g[1], fd[1], 1e-4);
}

TEST(CostGradient, MatchesFiniteDifferences) {
    std::mt19937_64 gen(9);
    std::normal_distribution<double> n;
    for (int rep = 0; rep < 20; ++rep) {
        const auto a = oracle::gaussian(3, 5, gen, 1.0);
        std::vector<double> y(3), z(5);
        for (auto& v : y) v = n(gen);
        for (auto& v : z) v = n(gen);
        const auto g = cost_gradient(oracle::from_dense(a), y, z);
        const auto fd = oracle::fd_gradient(a, y, z);
        EXPECT_LE(oracle::dist(g, fd), 1e-5 * oracle::norm(fd));
    }
}

TEST(LookAhead, ZeroStepIsIdentity) {
    const Vector z{1, -2}, g{3, 4};
    EXPECT_EQ(look_ahead_point(z, g, 0.0), z);
}

TEST(LookAhead, IdentityInstanceLandsOnTruth) {
    const Vector z{0, 0}, y{1, 0};
    const auto g = cost_gradient(Matrix::identity(2), y, z);
    const auto l = look_ahead_point(z, g, 0.5);
    EXPECT_NEAR(l[0], 1.0, 1e-15);
    EXPECT_NEAR(l[1], 0.0, 1e-15);
}

TEST(LookAhead, MovesTowardTruthForUnitNormA) {
    std::mt19937_64 gen(4);
    std::normal_distribution<double> n;
    for (int rep = 0; rep < 100; ++rep) {
        auto a = oracle::gaussian(10, 20, gen, 1.0);
        a = oracle::scale(a, 1.0 / oracle::spectral_norm(a));
        const auto x = oracle::sparse_signal(20, 3, gen);
        const auto y = oracle::apply(a, x);
        std::vector<double> z(20);
        for (auto& v : z) v = n(gen);
        const double eta = std::uniform_real_distribution<double>(0, 1)(gen);
        const auto l = look_ahead_point(z, cost_gradient(oracle::from_dense(a), y, z), eta);
        EXPECT_LE(oracle::dist(x, l), oracle::dist(x, z) + 1e-12);
    }
}

TEST(LatScores, ZeroStepGivesSquares) {
    const Vector z{1, -3, 2};
    const auto s = lat_scores(z, Vector{5, 5, 5}, 0.0);
    EXPECT_EQ(s.scores, (Vector{1, 9, 4}));
}

TEST(LatScores, WorkedInstance) {
    const auto g = cost_gradient(Matrix::identity(2), Vector{1, 0}, Vector{0.5, 0.4});
    const auto s = lat_scores(Vector{0.5, 0.4}, g, 0.5);
    EXPECT_NEAR(s.scores[0], 0.75, 1e-12);
    EXPECT_NEAR(s.scores[1], -0.16, 1e-12);
}

TEST(LatScores, ZeroInputTiesPickFirstIndices) {
    const auto t = lat_threshold_with_gradient(Vector(5, 0.0), Vector(5, 0.0), 2, 0.5);
    EXPECT_EQ(t.support.indices(), (std::vector<std::size_t>{0, 1}));
}

TEST(LatThreshold, ZeroStepMatchesHardThreshold) {
    std::mt19937_64 gen(6);
    std::normal_distribution<double> n;
    for (int rep = 0; rep < 100; ++rep) {
        const auto a = oracle::from_dense(oracle::gaussian(6, 12, gen, 0.4));
        std::vector<double> z(12), y(6);
        for (auto& v : z) v = n(gen);
        for (auto& v : y) v = n(gen);
        const auto lat = lat_threshold(z, a, y, 4, 0.0);
        const auto hard = hard_threshold(z, 4);
        EXPECT_EQ(lat.values, hard.values);
        EXPECT_EQ(lat.support, hard.support);
    }
}

TEST(LatThreshold, WorkedInstance) {
    const auto t = lat_threshold(Vector{0.5, 0.4}, Matrix::identity(2), Vector{1, 0}, 1, 0.5);
    EXPECT_EQ(t.values, (Vector{0.5, 0.0}));
    double best = 0.0;
    const auto sup = oracle::nearest_support({0.5, 0.4}, {1.0, 0.0}, 1, &best);
    EXPECT_EQ(sup, (std::vector<std::size_t>{0}));
    EXPECT_NEAR(best, 0.5, 1e-12);
}

TEST(LatThreshold, MatchesExhaustiveNearestProjection) {
    std::mt19937_64 gen(7);
    std::normal_distribution<double> n;
    for (int rep = 0; rep < 300; ++rep) {
        const std::size_t d = 3 + rep % 8, s = 1 + rep % 3;
        if (s > d) continue;
        const auto a = oracle::gaussian(d / 2 + 1, d, gen, 0.5);
        std::vector<double> z(d), y(a.size());
        for (auto& v : z) v = n(gen);
        for (auto& v : y) v = n(gen);
        const double eta = (rep % 3 == 0) ? 0.1 : (rep % 3 == 1 ? 0.5 : 1.0);
        const auto g = oracle::fd_gradient(a, y, z);
        std::vector<double> ell(d);
        for (std::size_t i = 0; i < d; ++i) ell[i] = z[i] - eta * g[i];
        double best = 0.0;
        oracle::nearest_support(z, ell, s, &best);
        const auto t = lat_threshold(z, oracle::from_dense(a), y, s, eta);
        EXPECT_NEAR(oracle::dist(t.values, ell), best, 1e-6);
    }
}
