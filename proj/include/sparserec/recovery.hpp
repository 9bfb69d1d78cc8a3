#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sparserec/sensing.hpp"
#include "sparserec/thresholding.hpp"

namespace sparserec {

enum class Algorithm { Iht, Ilat };

std::string_view to_string(Algorithm algorithm) noexcept;
Algorithm parse_algorithm(std::string_view name);

struct RecoveryConfig {
    Algorithm algorithm = Algorithm::Ilat;
    double eta = 0.5;  // ignored for IHT
    std::size_t sparsity = 1;
    std::size_t max_iters = 1000;
    /// Stop once ‖x^t − x^{t−1}‖₂ ≤ stop_tolerance. Zero disables early stopping.
    double stop_tolerance = 0.0;
    bool record_history = false;
};

enum class RecoveryStatus { Completed, Stopped, Diverged };

/// Iterates whose norm exceeds this are reported as diverged.
inline constexpr double kDivergenceNorm = 1e12;

struct RecoveryResult {
    Vector estimate;
    std::size_t iterations_run = 0;
    std::vector<double> residual_history;
    std::optional<std::vector<double>> error_history;
    std::optional<std::vector<SupportSet>> support_history;
    std::size_t gradient_evaluations = 0;
    RecoveryStatus status = RecoveryStatus::Completed;
};

/// Per-iteration view handed to an observer: a^t (pre-threshold) and x^t.
struct IterationView {
    std::size_t t;
    std::span<const double> pre_threshold;
    std::span<const double> iterate;
    const SupportSet& support;
};

using IterationObserver = std::function<void(const IterationView&)>;

/// x + Aᵀ(y − Ax), i.e. x − ½∇C(x).
Vector gradient_step(const Matrix& a, std::span<const double> y, std::span<const double> x);

RecoveryResult run_iht(const SensingProblem& problem, const RecoveryConfig& config,
                       const IterationObserver& observer = {});

RecoveryResult run_ilat(const SensingProblem& problem, const RecoveryConfig& config,
                        const IterationObserver& observer = {});

/// Dispatches on config.algorithm.
RecoveryResult recover(const SensingProblem& problem, const RecoveryConfig& config,
                       const IterationObserver& observer = {});

/// ‖estimate − truth‖₂ / ‖truth‖₂; +inf when the estimate is not finite.
double relative_error(std::span<const double> estimate, std::span<const double> truth);

/// ‖estimate − truth‖₂ ≤ rel_tol·‖truth‖₂.
bool check_success(const RecoveryResult& result, std::span<const double> truth, double rel_tol);

}  // namespace sparserec
