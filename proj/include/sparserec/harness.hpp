#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sparserec {

enum class ExperimentKind { PhaseTransition, NoisyError, ConstantCompute, ThresholdCompare };

std::string_view to_string(ExperimentKind kind) noexcept;
ExperimentKind parse_experiment_kind(std::string_view name);

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::PhaseTransition;
    std::size_t m = 128;
    std::size_t d = 256;
    std::vector<std::size_t> sparsity_grid = {10, 15, 20, 25, 30, 35, 40, 45, 50, 55, 60};
    std::vector<double> eta_grid = {0.25, 0.5, 1.0, 2.0};
    std::size_t trials_per_point = 100;
    std::size_t iters_iht = 1000;
    std::size_t iters_ilat = 1000;
    std::optional<double> snr_db;
    std::uint64_t base_seed = 0;
    double success_rel_tol = 1e-4;
};

/// Throws InvalidArgument when the spec cannot be run as its kind.
void validate(const ExperimentSpec& spec);

/// Which operator produced a record. Hard/Lat are single thresholding
/// passes (threshold comparison); Iht/Ilat are full recoveries.
enum class Method { Iht, Ilat, Hard, Lat };

std::string_view to_string(Method method) noexcept;
bool is_baseline(Method method) noexcept;

struct TrialRecord {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::size_t s = 0;
    /// NaN for the baselines, which have no η.
    double eta = 0.0;
    Method algorithm = Method::Iht;
    std::size_t iterations = 0;
    std::size_t gradient_evaluations = 0;
    bool success = false;
    /// ‖estimate − x*‖ / ‖x*‖; +inf for diverged runs.
    double rel_error = 0.0;
    std::optional<double> threshold_ratio;
    double runtime_ms = 0.0;
};

/// Equality on every field except runtime_ms (wall clock is not reproducible).
bool same_outcome(const TrialRecord& a, const TrialRecord& b);

/// Seed of trial unit `ordinal` (one sparsity level, one repetition). Every
/// method in a unit runs on the same (A, x*, noise) instance.
std::uint64_t trial_seed(const ExperimentSpec& spec, std::size_t ordinal) noexcept;

std::vector<TrialRecord> run_phase_transition(const ExperimentSpec& spec, std::size_t workers = 1);
std::vector<TrialRecord> run_noisy_error(const ExperimentSpec& spec, std::size_t workers = 1);
std::vector<TrialRecord> run_constant_compute(const ExperimentSpec& spec, std::size_t workers = 1);
std::vector<TrialRecord> run_threshold_compare(const ExperimentSpec& spec, std::size_t workers = 1);

/// Dispatches on spec.kind.
std::vector<TrialRecord> run_experiment(const ExperimentSpec& spec, std::size_t workers = 1);

enum class GroupKey { S, Algorithm, Eta };

struct Stat {
    double mean = 0.0;
    double stddev = 0.0;
    std::size_t count = 0;
};

struct SummaryRow {
    std::optional<std::size_t> s;
    std::optional<Method> algorithm;
    std::optional<double> eta;
    std::size_t count = 0;
    Stat success;
    Stat rel_error;
    /// Over records that carry a ratio; count 0 otherwise.
    Stat threshold_ratio;
};

/// Mean / sample stddev / count per group, rows sorted by group key.
std::vector<SummaryRow> aggregate(const std::vector<TrialRecord>& records,
                                  const std::vector<GroupKey>& keys = {GroupKey::S, GroupKey::Algorithm,
                                                                       GroupKey::Eta});

/// Lookup helper for summaries grouped by (s, algorithm, eta). NaN eta matches baselines.
const SummaryRow* find_row(const std::vector<SummaryRow>& rows, std::size_t s, Method algorithm, double eta);

void write_results_csv(const std::vector<TrialRecord>& records, const std::filesystem::path& path);
void write_summary_csv(const std::vector<SummaryRow>& rows, const std::vector<GroupKey>& keys,
                       const std::filesystem::path& path);
void write_spec_json(const ExperimentSpec& spec, const std::filesystem::path& path);
ExperimentSpec read_spec_json(const std::filesystem::path& path);

/// results.csv, summary.csv and spec.json into `dir`.
void write_experiment(const ExperimentSpec& spec, const std::vector<TrialRecord>& records,
                      const std::filesystem::path& dir);

}  // namespace sparserec
