#include "sparserec/sensing.hpp"

#include <cmath>
#include <numeric>

#include "sparserec/error.hpp"
#include "sparserec/rng.hpp"
#include "sparserec/thresholding.hpp"

namespace sparserec {

Matrix gaussian_matrix(std::size_t m, std::size_t d, VarianceMode mode, std::uint64_t seed) {
    require(m >= 1 && d >= 1, "gaussian_matrix: m and d must be at least 1");
    CounterRng rng(seed);
    const double sigma = mode == VarianceMode::OneOverM ? 1.0 / std::sqrt(static_cast<double>(m)) : 1.0;
    Matrix out(m, d);
    for (double& x : out.entries()) x = sigma * rng.normal();
    return out;
}

Matrix normalize_operator_norm(const Matrix& m) {
    // The Rayleigh quotient approaches σ_max² from below, so a loose estimate
    // leaves ‖A‖ slightly above 1. Iterate to near machine precision.
    double norm = 0.0;
    try {
        norm = operator_norm(m, 1e-15, 200000);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::NoConvergence) throw;
        norm = operator_norm(m);
    }
    require(norm > 0.0, "normalize_operator_norm: zero matrix");
    Matrix out = m;
    for (double& x : out.entries()) x /= norm;
    return out;
}

Vector random_sparse_signal(std::size_t d, std::size_t s, std::uint64_t seed) {
    require(s >= 1 && s <= d, "random_sparse_signal: need 1 <= s <= d");
    CounterRng rng(seed);

    // Partial Fisher–Yates: the first s slots are a uniform s-subset.
    std::vector<std::size_t> idx(d);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < s; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(d - i));
        std::swap(idx[i], idx[j]);
    }

    Vector x(d, 0.0);
    for (std::size_t i = 0; i < s; ++i) {
        double value = 0.0;
        while (value == 0.0) value = rng.normal();
        x[idx[i]] = value;
    }
    return x;
}

NoisyMeasurements add_noise(std::span<const double> clean, double snr_db, std::uint64_t seed) {
    require(!std::isnan(snr_db) && snr_db != -std::numeric_limits<double>::infinity(),
            "add_noise: snr_db must be finite or +inf");
    const double clean_norm = norm2(clean);
    require(clean_norm > 0.0, "add_noise: clean vector is zero");

    NoisyMeasurements out{Vector(clean.begin(), clean.end()), Vector(clean.size(), 0.0)};
    if (std::isinf(snr_db)) return out;

    CounterRng rng(seed);
    for (double& e : out.noise) e = rng.normal();
    const double raw = norm2(out.noise);
    const double target = clean_norm * std::pow(10.0, -snr_db / 20.0);
    for (std::size_t i = 0; i < clean.size(); ++i) {
        out.noise[i] *= target / raw;
        out.noisy[i] += out.noise[i];
    }
    return out;
}

double measured_snr_db(std::span<const double> clean, std::span<const double> noise) {
    const double noise_sq = norm2_sq(noise);
    if (noise_sq == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(norm2_sq(clean) / noise_sq);
}

Vector effective_error(const SensingProblem& problem) {
    require(problem.ground_truth.has_value(), "effective_error: problem has no ground truth");
    const Vector best = hard_threshold(*problem.ground_truth, problem.sparsity).values;
    return subtract(problem.measurements, matvec(problem.matrix, best));
}

SensingProblem generate_problem(const ProblemParams& params) {
    require(params.sparsity >= 1 && params.sparsity <= params.d, "generate_problem: need 1 <= s <= d");
    const auto matrix_seed = derive_seed(params.seed, static_cast<std::uint64_t>(Stream::Matrix));
    const auto signal_seed = derive_seed(params.seed, static_cast<std::uint64_t>(Stream::Signal));
    const auto noise_seed = derive_seed(params.seed, static_cast<std::uint64_t>(Stream::Noise));

    SensingProblem problem;
    problem.normalization = params.normalization;
    problem.sparsity = params.sparsity;
    Matrix a = gaussian_matrix(params.m, params.d, VarianceMode::OneOverM, matrix_seed);
    problem.matrix = params.normalization == Normalization::OperatorNormOne ? normalize_operator_norm(a) : std::move(a);

    Vector truth = random_sparse_signal(params.d, params.sparsity, signal_seed);
    const Vector clean = matvec(problem.matrix, truth);
    auto noisy = add_noise(clean, params.snr_db, noise_seed);
    problem.measurements = std::move(noisy.noisy);
    problem.noise = std::move(noisy.noise);
    problem.ground_truth = std::move(truth);
    return problem;
}

}  // namespace sparserec
