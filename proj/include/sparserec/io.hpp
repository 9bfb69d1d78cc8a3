#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "sparserec/linalg.hpp"
#include "sparserec/recovery.hpp"
#include "sparserec/sensing.hpp"

namespace sparserec {

/// Doubles are written with 17 significant digits so they round-trip exactly.
std::string format_double(double x);

// Matrix CSV: one line per row, comma separated, no header.
void write_matrix_csv(const Matrix& m, const std::filesystem::path& path);
Matrix read_matrix_csv(const std::filesystem::path& path);

// Vector CSV: one value per line (a column vector).
void write_vector_csv(std::span<const double> v, const std::filesystem::path& path);
Vector read_vector_csv(const std::filesystem::path& path);

std::string to_string(Normalization normalization);
Normalization parse_normalization(const std::string& name);

struct ProblemMeta {
    std::size_t m = 0;
    std::size_t d = 0;
    std::size_t s = 0;
    double snr_db = kNoiselessSnr;
    std::uint64_t seed = 0;
    Normalization normalization = Normalization::OperatorNormOne;
};

/// Writes {A.csv, y.csv, xstar.csv, meta.json} into `dir` (created if needed).
void save_problem(const SensingProblem& problem, const ProblemMeta& meta, const std::filesystem::path& dir);

struct LoadedProblem {
    SensingProblem problem;
    ProblemMeta meta;
};

/// Reads a bundle written by save_problem. xstar.csv is optional; when
/// present the noise is reconstructed as y − Ax*.
LoadedProblem load_problem(const std::filesystem::path& dir);

struct RecoverySummary {
    std::string estimate_csv_path;
    std::size_t iterations = 0;
    /// Present only when ground truth was available.
    std::optional<bool> success;
    std::optional<double> rel_error;
    std::vector<double> residual_history;
};

void write_recovery_json(const RecoverySummary& summary, const std::filesystem::path& path);

}  // namespace sparserec
