#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sparserec/analysis.hpp"
#include "sparserec/error.hpp"
#include "sparserec/recovery.hpp"

using namespace sparserec;

namespace {

SensingProblem identity_problem() {
    SensingProblem p;
    p.matrix = Matrix::identity(6);
    p.ground_truth = Vector{0, 2, 0, 0, -1, 0};
    p.measurements = *p.ground_truth;
    p.sparsity = 2;
    return p;
}

RecoveryConfig config(Algorithm alg, double eta, std::size_t s, std::size_t iters) {
    RecoveryConfig c;
    c.algorithm = alg;
    c.eta = eta;
    c.sparsity = s;
    c.max_iters = iters;
    return c;
}

}  // namespace

TEST(GradientStep, FixedPoint) {
    const Matrix a(2, 3, {1, 0, 1, 0, 1, 1});
    const Vector x{1, 2, 3};
    const auto y = matvec(a, x);
    const auto out = gradient_step(a, y, x);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(out[i], x[i], 1e-15);
}

TEST(GradientStep, IdentityReturnsMeasurements) {
    const Vector y{4, -1, 2};
    EXPECT_EQ(gradient_step(Matrix::identity(3), y, Vector{9, 9, 9}), y);
}

TEST(GradientStep, EqualsHalfGradientDescent) {
    const auto p = generate_problem({10, 20, 3, 10.0, 2, Normalization::OperatorNormOne});
    const auto x = random_sparse_signal(20, 20, 5);
    const auto g = cost_gradient(p.matrix, p.measurements, x);
    const auto step = gradient_step(p.matrix, p.measurements, x);
    for (std::size_t i = 0; i < 20; ++i) EXPECT_NEAR(step[i], x[i] - 0.5 * g[i], 1e-12);
}

TEST(Iht, IdentityRecoversInOneIteration) {
    const auto p = identity_problem();
    const auto r = run_iht(p, config(Algorithm::Iht, 0, 2, 1));
    EXPECT_EQ(r.estimate, *p.ground_truth);
    EXPECT_EQ(r.gradient_evaluations, 1u);
}

TEST(Ilat, IdentityRecoversInOneIteration) {
    const auto p = identity_problem();
    for (double eta : {0.0, 0.25, 0.5, 1.0}) {
        const auto r = run_ilat(p, config(Algorithm::Ilat, eta, 2, 1));
        EXPECT_EQ(r.estimate, *p.ground_truth) << "eta " << eta;
        EXPECT_EQ(r.gradient_evaluations, 2u);
    }
}

TEST(Iht, MostlyRecoversEasyProblems) {
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto p = generate_problem({128, 256, 10, kNoiselessSnr, seed, Normalization::OperatorNormOne});
        const auto r = run_iht(p, config(Algorithm::Iht, 0, 10, 1000));
        ok += check_success(r, *p.ground_truth, 1e-4);
    }
    EXPECT_GE(ok, 6);
}

TEST(Ilat, ZeroStepTracksIht) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto p = generate_problem({20, 40, 3, kNoiselessSnr, seed, Normalization::OperatorNormOne});
        auto ci = config(Algorithm::Iht, 0, 3, 60);
        auto cl = config(Algorithm::Ilat, 0.0, 3, 60);
        ci.record_history = cl.record_history = true;
        std::vector<Vector> iht_iterates, ilat_iterates;
        run_iht(p, ci, [&](const IterationView& v) { iht_iterates.emplace_back(v.iterate.begin(), v.iterate.end()); });
        const auto r =
            run_ilat(p, cl, [&](const IterationView& v) { ilat_iterates.emplace_back(v.iterate.begin(), v.iterate.end()); });
        ASSERT_EQ(iht_iterates.size(), ilat_iterates.size());
        for (std::size_t t = 0; t < iht_iterates.size(); ++t)
            for (std::size_t i = 0; i < 40; ++i) ASSERT_NEAR(iht_iterates[t][i], ilat_iterates[t][i], 1e-12);
        EXPECT_EQ(r.support_history->size(), 60u);
    }
}

TEST(Iht, ContractsUnderSmallRip) {
    // Singular values in [0.9, 1] keep δ_2s below 0.19.
    std::mt19937_64 gen(3);
    int checked = 0;
    for (int attempt = 0; attempt < 200 && checked < 5; ++attempt) {
        const auto a = oracle::near_isometry(10, 0.9, gen);
        const double d2 = oracle::rip(a, 2);
        if (d2 >= 0.25) continue;
        ++checked;
        SensingProblem p;
        p.matrix = oracle::from_dense(a);
        p.ground_truth = oracle::sparse_signal(10, 1, gen);
        p.measurements = oracle::apply(a, *p.ground_truth);
        p.sparsity = 1;
        auto c = config(Algorithm::Iht, 0, 1, 30);
        c.record_history = true;
        const auto r = run_iht(p, c);
        double prev = norm2(*p.ground_truth);
        for (double e : *r.error_history) {
            EXPECT_LE(e, 2.0 * std::sqrt(d2) * prev + 1e-12);
            prev = e;
        }
    }
    EXPECT_EQ(checked, 5);
}

TEST(Recovery, StopToleranceStopsEarly) {
    const auto p = generate_problem({64, 128, 4, kNoiselessSnr, 1, Normalization::OperatorNormOne});
    auto c = config(Algorithm::Ilat, 0.5, 4, 1000);
    c.stop_tolerance = 1e-8;
    const auto r = recover(p, c);
    EXPECT_EQ(r.status, RecoveryStatus::Stopped);
    EXPECT_LT(r.iterations_run, 1000u);
    EXPECT_EQ(r.gradient_evaluations, 2 * r.iterations_run);
}

TEST(Recovery, DivergenceIsReported) {
    SensingProblem p;
    p.matrix = Matrix(1, 2, {100, 100});
    p.measurements = Vector{1};
    p.sparsity = 1;
    const auto r = recover(p, config(Algorithm::Iht, 0, 1, 100));
    EXPECT_EQ(r.status, RecoveryStatus::Diverged);
    EXPECT_LT(r.iterations_run, 100u);
}

TEST(Recovery, WrongRunnerRejected) {
    const auto p = identity_problem();
    EXPECT_THROW(run_iht(p, config(Algorithm::Ilat, 0.5, 2, 1)), Error);
    EXPECT_THROW(run_ilat(p, config(Algorithm::Iht, 0.5, 2, 1)), Error);
    EXPECT_THROW(recover(p, config(Algorithm::Ilat, -1.0, 2, 1)), Error);
    EXPECT_THROW(recover(p, config(Algorithm::Ilat, 0.5, 7, 1)), Error);
}

TEST(Recovery, ResidualHistoryLength) {
    const auto p = identity_problem();
    const auto r = recover(p, config(Algorithm::Ilat, 0.5, 2, 7));
    EXPECT_EQ(r.residual_history.size(), 7u);
    EXPECT_NEAR(r.residual_history.back(), 0.0, 1e-15);
}

TEST(CheckSuccess, Cases) {
    RecoveryResult r;
    const Vector truth{1, 2, 0};
    r.estimate = truth;
    EXPECT_TRUE(check_success(r, truth, 1e-4));
    r.estimate = Vector{0, 0, 0};
    EXPECT_FALSE(check_success(r, truth, 1e-4));
    r.estimate = Vector{1 + 1e-5, 2, 0};
    EXPECT_TRUE(check_success(r, truth, 1e-4));
    r.estimate = Vector{NAN, 2, 0};
    EXPECT_FALSE(check_success(r, truth, 1e-4));
}

TEST(Algorithm, ParseRoundTrip) {
    EXPECT_EQ(parse_algorithm(to_string(Algorithm::Iht)), Algorithm::Iht);
    EXPECT_EQ(parse_algorithm(to_string(Algorithm::Ilat)), Algorithm::Ilat);
    EXPECT_THROW(parse_algorithm("cosamp"), Error);
}
