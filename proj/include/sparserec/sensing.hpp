#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>

#include "sparserec/linalg.hpp"

namespace sparserec {

enum class VarianceMode { OneOverM, Unit };
enum class Normalization { OperatorNormOne, ColumnVarianceOne };

/// snr_db = +inf means noiseless.
inline constexpr double kNoiselessSnr = std::numeric_limits<double>::infinity();

struct SensingProblem {
    Matrix matrix;
    Vector measurements;
    std::size_t sparsity = 0;
    std::optional<Vector> ground_truth;
    std::optional<Vector> noise;
    Normalization normalization = Normalization::OperatorNormOne;

    std::size_t m() const noexcept { return matrix.rows(); }
    std::size_t d() const noexcept { return matrix.cols(); }
};

/// i.i.d. Gaussian entries, N(0, 1/m) or N(0, 1), filled row-major.
Matrix gaussian_matrix(std::size_t m, std::size_t d, VarianceMode mode, std::uint64_t seed);

/// M / ‖M‖_op. Throws on the zero matrix.
Matrix normalize_operator_norm(const Matrix& m);

/// Exactly s nonzeros on a uniformly drawn support with N(0,1) values.
Vector random_sparse_signal(std::size_t d, std::size_t s, std::uint64_t seed);

struct NoisyMeasurements {
    Vector noisy;
    Vector noise;
};

/// Adds Gaussian noise scaled so that 10·log10(‖clean‖²/‖noise‖²) = snr_db.
NoisyMeasurements add_noise(std::span<const double> clean, double snr_db, std::uint64_t seed);

/// 10·log10(‖clean‖²/‖noise‖²); +inf for zero noise.
double measured_snr_db(std::span<const double> clean, std::span<const double> noise);

/// ẽ = y − A·H_s(x*).
Vector effective_error(const SensingProblem& problem);

struct ProblemParams {
    std::size_t m = 128;
    std::size_t d = 256;
    std::size_t sparsity = 10;
    double snr_db = kNoiselessSnr;
    std::uint64_t seed = 0;
    Normalization normalization = Normalization::OperatorNormOne;
};

// Sub-stream identifiers so that matrix, signal and noise draws of one seed
// are independent.
enum class Stream : std::uint64_t { Matrix = 1, Signal = 2, Noise = 3, Dense = 4 };

/// Full problem instance from one seed: A, s-sparse x*, y = Ax* + e.
SensingProblem generate_problem(const ProblemParams& params);

}  // namespace sparserec
