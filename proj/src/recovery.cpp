#include "sparserec/recovery.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "sparserec/error.hpp"

namespace sparserec {

std::string_view to_string(Algorithm algorithm) noexcept {
    return algorithm == Algorithm::Iht ? "iht" : "ilat";
}

Algorithm parse_algorithm(std::string_view name) {
    if (name == "iht") return Algorithm::Iht;
    if (name == "ilat") return Algorithm::Ilat;
    fail(ErrorKind::InvalidArgument, "unknown algorithm '" + std::string(name) + "' (expected iht or ilat)");
}

Vector gradient_step(const Matrix& a, std::span<const double> y, std::span<const double> x) {
    const Vector residual = subtract(y, matvec(a, x));
    return add(x, matvec_transposed(a, residual));
}

namespace {

void validate(const SensingProblem& problem, const RecoveryConfig& config) {
    require(config.max_iters >= 1, "recovery: max_iters must be at least 1");
    require(config.stop_tolerance >= 0.0, "recovery: stop_tolerance must be non-negative");
    require(config.sparsity <= problem.d(), "recovery: sparsity exceeds signal dimension");
    require(config.algorithm == Algorithm::Iht || config.eta >= 0.0, "recovery: eta must be non-negative");
    if (problem.measurements.size() != problem.m())
        fail(ErrorKind::DimensionMismatch, "recovery: measurement length " + std::to_string(problem.measurements.size()) +
                                               " does not match matrix rows " + std::to_string(problem.m()));
    if (problem.ground_truth && problem.ground_truth->size() != problem.d())
        fail(ErrorKind::DimensionMismatch, "recovery: ground truth length does not match matrix columns");
}

RecoveryResult iterate(const SensingProblem& problem, const RecoveryConfig& config, const IterationObserver& observer) {
    validate(problem, config);
    const Matrix& a = problem.matrix;
    const Vector& y = problem.measurements;
    const bool look_ahead = config.algorithm == Algorithm::Ilat;
    const bool track_error = config.record_history && problem.ground_truth.has_value();

    RecoveryResult result;
    if (track_error) result.error_history.emplace();
    if (config.record_history) result.support_history.emplace();

    Vector x(problem.d(), 0.0);
    Vector residual(y.begin(), y.end());  // y − A·0
    for (std::size_t t = 1; t <= config.max_iters; ++t) {
        const Vector pre = add(x, matvec_transposed(a, residual));
        ++result.gradient_evaluations;

        Thresholded next;
        if (look_ahead) {
            const Vector grad = cost_gradient(a, y, pre);
            ++result.gradient_evaluations;
            next = lat_threshold_with_gradient(pre, grad, config.sparsity, config.eta);
        } else {
            next = hard_threshold(pre, config.sparsity);
        }

        residual = subtract(y, matvec(a, next.values));
        result.residual_history.push_back(norm2(residual));
        if (track_error) result.error_history->push_back(distance(next.values, *problem.ground_truth));
        if (config.record_history) result.support_history->push_back(next.support);
        if (observer) observer(IterationView{t, pre, next.values, next.support});

        const double step = distance(next.values, x);
        x = std::move(next.values);
        result.iterations_run = t;

        const double size = norm2(x);
        if (!std::isfinite(size) || size > kDivergenceNorm) {
            result.status = RecoveryStatus::Diverged;
            break;
        }
        if (config.stop_tolerance > 0.0 && step <= config.stop_tolerance) {
            result.status = RecoveryStatus::Stopped;
            break;
        }
    }
    result.estimate = std::move(x);
    return result;
}

}  // namespace

RecoveryResult run_iht(const SensingProblem& problem, const RecoveryConfig& config, const IterationObserver& observer) {
    require(config.algorithm == Algorithm::Iht, "run_iht: config.algorithm must be IHT");
    return iterate(problem, config, observer);
}

RecoveryResult run_ilat(const SensingProblem& problem, const RecoveryConfig& config, const IterationObserver& observer) {
    require(config.algorithm == Algorithm::Ilat, "run_ilat: config.algorithm must be ILAT");
    return iterate(problem, config, observer);
}

RecoveryResult recover(const SensingProblem& problem, const RecoveryConfig& config, const IterationObserver& observer) {
    return iterate(problem, config, observer);
}

double relative_error(std::span<const double> estimate, std::span<const double> truth) {
    const double truth_norm = norm2(truth);
    require(truth_norm > 0.0, "relative_error: truth vector is zero");
    const double err = distance(estimate, truth);
    if (!std::isfinite(err)) return std::numeric_limits<double>::infinity();
    return err / truth_norm;
}

bool check_success(const RecoveryResult& result, std::span<const double> truth, double rel_tol) {
    require(rel_tol > 0.0, "check_success: rel_tol must be positive");
    return relative_error(result.estimate, truth) <= rel_tol;
}

}  // namespace sparserec
