#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sparserec/error.hpp"
#include "sparserec/sensing.hpp"
#include "sparserec/thresholding.hpp"

using namespace sparserec;

TEST(GaussianMatrix, SameSeedSameMatrix) {
    EXPECT_EQ(gaussian_matrix(5, 7, VarianceMode::OneOverM, 9), gaussian_matrix(5, 7, VarianceMode::OneOverM, 9));
    EXPECT_NE(gaussian_matrix(5, 7, VarianceMode::OneOverM, 9), gaussian_matrix(5, 7, VarianceMode::OneOverM, 10));
}

TEST(GaussianMatrix, ColumnLengthConcentrates) {
    double mean = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto a = gaussian_matrix(1000, 1, VarianceMode::OneOverM, seed);
        double len = 0.0;
        for (double x : a.entries()) len += x * x;
        EXPECT_NEAR(len, 1.0, 0.15);
        mean += len / 100.0;
    }
    EXPECT_NEAR(mean, 1.0, 0.02);
}

TEST(GaussianMatrix, InnerProductSecondMoment) {
    // 20,000 column pairs drawn from independent 32×64 matrices.
    const std::size_t m = 32;
    double acc = 0.0;
    std::size_t pairs = 0;
    for (std::uint64_t seed = 0; pairs < 20000; ++seed) {
        const auto a = gaussian_matrix(m, 64, VarianceMode::OneOverM, seed);
        for (std::size_t j = 0; j + 1 < 64 && pairs < 20000; j += 2, ++pairs) {
            double ip = 0.0;
            for (std::size_t i = 0; i < m; ++i) ip += a(i, j) * a(i, j + 1);
            acc += ip * ip;
        }
    }
    EXPECT_NEAR(acc / 20000.0, 1.0 / 32.0, 0.02 / 32.0);
}

TEST(GaussianMatrix, UnitVariance) {
    const auto a = gaussian_matrix(200, 200, VarianceMode::Unit, 1);
    double s2 = 0.0;
    for (double x : a.entries()) s2 += x * x;
    EXPECT_NEAR(s2 / 40000.0, 1.0, 0.03);
}

TEST(NormalizeOperatorNorm, Diagonal) {
    const double diag[] = {2, 4};
    const auto n = normalize_operator_norm(Matrix::diagonal(diag));
    EXPECT_NEAR(n(0, 0), 0.5, 1e-9);
    EXPECT_NEAR(n(1, 1), 1.0, 1e-9);
}

TEST(NormalizeOperatorNorm, Idempotent) {
    const auto once = normalize_operator_norm(gaussian_matrix(10, 20, VarianceMode::OneOverM, 3));
    const auto twice = normalize_operator_norm(once);
    for (std::size_t i = 0; i < once.entries().size(); ++i) EXPECT_NEAR(once.entries()[i], twice.entries()[i], 1e-6);
}

TEST(NormalizeOperatorNorm, LargeGaussianHasUnitNorm) {
    const auto a = normalize_operator_norm(gaussian_matrix(128, 256, VarianceMode::OneOverM, 4));
    EXPECT_NEAR(operator_norm(a), 1.0, 1e-6);
}

TEST(NormalizeOperatorNorm, ZeroMatrixRejected) { EXPECT_THROW(normalize_operator_norm(Matrix(2, 2)), Error); }

TEST(RandomSparseSignal, DenseWhenSEqualsD) {
    EXPECT_EQ(count_nonzeros(random_sparse_signal(16, 16, 1)), 16u);
}

TEST(RandomSparseSignal, ExactlyOneNonzero) { EXPECT_EQ(count_nonzeros(random_sparse_signal(4, 1, 8)), 1u); }

TEST(RandomSparseSignal, SupportIsUniform) {
    std::vector<double> freq(8, 0.0);
    for (std::uint64_t seed = 0; seed < 10000; ++seed) {
        const auto x = random_sparse_signal(8, 2, seed);
        for (std::size_t i = 0; i < 8; ++i)
            if (x[i] != 0.0) freq[i] += 1.0 / 10000.0;
    }
    for (double f : freq) EXPECT_NEAR(f, 0.25, 0.02);
}

TEST(RandomSparseSignal, RejectsBadSparsity) {
    EXPECT_THROW(random_sparse_signal(4, 0, 1), Error);
    EXPECT_THROW(random_sparse_signal(4, 5, 1), Error);
}

TEST(AddNoise, ZeroDb) {
    const Vector clean{1, -2, 3, 0.5};
    const auto r = add_noise(clean, 0.0, 5);
    EXPECT_NEAR(norm2(r.noise), norm2(clean), 1e-10);
    for (std::size_t i = 0; i < clean.size(); ++i) EXPECT_DOUBLE_EQ(r.noisy[i], clean[i] + r.noise[i]);
}

TEST(AddNoise, ThirtyDb) {
    const auto clean = random_sparse_signal(50, 50, 2);
    const auto r = add_noise(clean, 30.0, 6);
    EXPECT_NEAR(norm2_sq(r.noise) / norm2_sq(clean), 1e-3, 1e-10);
    EXPECT_NEAR(measured_snr_db(clean, r.noise), 30.0, 1e-8);
}

TEST(AddNoise, InfiniteSnrIsNoiseless) {
    const Vector clean{1, 2};
    const auto r = add_noise(clean, kNoiselessSnr, 1);
    EXPECT_EQ(r.noise, (Vector{0, 0}));
    EXPECT_EQ(r.noisy, clean);
}

TEST(EffectiveError, SparseNoiseless) {
    const auto p = generate_problem({20, 30, 3, kNoiselessSnr, 1, Normalization::OperatorNormOne});
    for (double e : effective_error(p)) EXPECT_NEAR(e, 0.0, 1e-12);
}

TEST(EffectiveError, SparseNoisyEqualsNoise) {
    const auto p = generate_problem({20, 30, 3, 10.0, 1, Normalization::OperatorNormOne});
    const auto e = effective_error(p);
    for (std::size_t i = 0; i < e.size(); ++i) EXPECT_NEAR(e[i], (*p.noise)[i], 1e-12);
}

TEST(EffectiveError, NonSparseDirectFormula) {
    std::mt19937_64 gen(3);
    const auto a = oracle::gaussian(5, 8, gen, 0.4);
    std::vector<double> x(8);
    std::normal_distribution<double> n;
    for (auto& v : x) v = n(gen);
    SensingProblem p;
    p.matrix = oracle::from_dense(a);
    p.measurements = oracle::apply(a, x);
    p.sparsity = 3;
    p.ground_truth = x;
    p.noise = Vector(5, 0.0);

    // x* − H_3(x*) keeps the five smallest magnitudes.
    std::vector<std::size_t> order(8);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto i, auto j) { return std::abs(x[i]) > std::abs(x[j]); });
    std::vector<double> tail = x;
    for (std::size_t k = 0; k < 3; ++k) tail[order[k]] = 0.0;
    const auto expect = oracle::apply(a, tail);
    const auto got = effective_error(p);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(got[i], expect[i], 1e-12);
}

TEST(GenerateProblem, ShapesAndDeterminism) {
    const ProblemParams params{16, 32, 4, 20.0, 77, Normalization::OperatorNormOne};
    const auto p = generate_problem(params);
    const auto q = generate_problem(params);
    EXPECT_EQ(p.m(), 16u);
    EXPECT_EQ(p.d(), 32u);
    EXPECT_EQ(count_nonzeros(*p.ground_truth), 4u);
    EXPECT_EQ(p.matrix, q.matrix);
    EXPECT_EQ(p.measurements, q.measurements);
    EXPECT_NEAR(operator_norm(p.matrix), 1.0, 1e-6);
}

TEST(GenerateProblem, ColumnVarianceOneKeepsScale) {
    const auto p = generate_problem({64, 32, 2, kNoiselessSnr, 1, Normalization::ColumnVarianceOne});
    double s2 = 0.0;
    for (double x : p.matrix.entries()) s2 += x * x;
    EXPECT_NEAR(s2 / 32.0, 1.0, 0.1);
}
