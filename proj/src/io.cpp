#include "sparserec/io.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sparserec/error.hpp"

namespace sparserec {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) fail(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
    return out;
}

std::ifstream open_in(const fs::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open '" + path.string() + "' for reading");
    return in;
}

double parse_number(const std::string& token, const fs::path& path, std::size_t line) {
    std::string trimmed = token;
    trimmed.erase(0, trimmed.find_first_not_of(" \t\r"));
    trimmed.erase(trimmed.find_last_not_of(" \t\r") + 1);
    char* end = nullptr;
    errno = 0;
    const double value = std::strtod(trimmed.c_str(), &end);
    if (trimmed.empty() || end != trimmed.c_str() + trimmed.size() || errno == ERANGE || !std::isfinite(value))
        fail(ErrorKind::Parse, path.string() + ":" + std::to_string(line) + ": invalid number '" + trimmed + "'");
    return value;
}

}  // namespace

void write_matrix_csv(const Matrix& m, const fs::path& path) {
    auto out = open_out(path);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) out << ',';
            out << format_double(m(r, c));
        }
        out << '\n';
    }
    if (!out) fail(ErrorKind::Io, "failed writing '" + path.string() + "'");
}

Matrix read_matrix_csv(const fs::path& path) {
    auto in = open_in(path);
    std::vector<double> entries;
    std::size_t cols = 0;
    std::size_t rows = 0;
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::stringstream ss(line);
        std::string token;
        std::size_t count = 0;
        while (std::getline(ss, token, ',')) {
            entries.push_back(parse_number(token, path, lineno));
            ++count;
        }
        if (rows == 0) cols = count;
        if (count != cols)
            fail(ErrorKind::Parse, path.string() + ":" + std::to_string(lineno) + ": expected " + std::to_string(cols) +
                                       " columns, found " + std::to_string(count));
        ++rows;
    }
    if (rows == 0) fail(ErrorKind::Parse, path.string() + ": empty matrix file");
    return Matrix(rows, cols, std::move(entries));
}

void write_vector_csv(std::span<const double> v, const fs::path& path) {
    auto out = open_out(path);
    for (double x : v) out << format_double(x) << '\n';
    if (!out) fail(ErrorKind::Io, "failed writing '" + path.string() + "'");
}

Vector read_vector_csv(const fs::path& path) {
    auto in = open_in(path);
    Vector out;
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (line.find(',') != std::string::npos)
            fail(ErrorKind::Parse, path.string() + ":" + std::to_string(lineno) + ": expected one value per line");
        out.push_back(parse_number(line, path, lineno));
    }
    if (out.empty()) fail(ErrorKind::Parse, path.string() + ": empty vector file");
    return out;
}

std::string to_string(Normalization normalization) {
    return normalization == Normalization::OperatorNormOne ? "operator_norm_one" : "column_variance_one";
}

Normalization parse_normalization(const std::string& name) {
    if (name == "operator_norm_one" || name == "opnorm") return Normalization::OperatorNormOne;
    if (name == "column_variance_one" || name == "colvar") return Normalization::ColumnVarianceOne;
    fail(ErrorKind::InvalidArgument, "unknown normalization '" + name + "'");
}

void save_problem(const SensingProblem& problem, const ProblemMeta& meta, const fs::path& dir) {
    fs::create_directories(dir);
    write_matrix_csv(problem.matrix, dir / "A.csv");
    write_vector_csv(problem.measurements, dir / "y.csv");
    if (problem.ground_truth) write_vector_csv(*problem.ground_truth, dir / "xstar.csv");

    json j;
    j["m"] = meta.m;
    j["d"] = meta.d;
    j["s"] = meta.s;
    // JSON has no infinity; the noiseless case is written as null.
    j["snr_db"] = std::isinf(meta.snr_db) ? json(nullptr) : json(meta.snr_db);
    j["seed"] = meta.seed;
    j["normalization"] = to_string(meta.normalization);
    auto out = open_out(dir / "meta.json");
    out << j.dump(2) << '\n';
}

LoadedProblem load_problem(const fs::path& dir) {
    if (!fs::is_directory(dir)) fail(ErrorKind::Io, "problem directory '" + dir.string() + "' does not exist");
    json j;
    try {
        auto in = open_in(dir / "meta.json");
        j = json::parse(in);
    } catch (const json::exception& e) {
        fail(ErrorKind::Parse, (dir / "meta.json").string() + ": " + e.what());
    }

    LoadedProblem out;
    try {
        out.meta.m = j.at("m").get<std::size_t>();
        out.meta.d = j.at("d").get<std::size_t>();
        out.meta.s = j.at("s").get<std::size_t>();
        out.meta.snr_db = j.value("snr_db", json(nullptr)).is_null() ? kNoiselessSnr : j.at("snr_db").get<double>();
        out.meta.seed = j.value("seed", std::uint64_t{0});
        out.meta.normalization = parse_normalization(j.value("normalization", std::string("operator_norm_one")));
    } catch (const json::exception& e) {
        fail(ErrorKind::Parse, (dir / "meta.json").string() + ": " + e.what());
    }

    SensingProblem& p = out.problem;
    p.matrix = read_matrix_csv(dir / "A.csv");
    p.measurements = read_vector_csv(dir / "y.csv");
    p.sparsity = out.meta.s;
    p.normalization = out.meta.normalization;
    if (p.matrix.rows() != out.meta.m || p.matrix.cols() != out.meta.d)
        fail(ErrorKind::DimensionMismatch, "A.csv is " + std::to_string(p.matrix.rows()) + "x" +
                                               std::to_string(p.matrix.cols()) + " but meta.json declares " +
                                               std::to_string(out.meta.m) + "x" + std::to_string(out.meta.d));
    if (p.measurements.size() != p.matrix.rows())
        fail(ErrorKind::DimensionMismatch, "y.csv length does not match the rows of A.csv");
    if (fs::exists(dir / "xstar.csv")) {
        Vector truth = read_vector_csv(dir / "xstar.csv");
        if (truth.size() != p.matrix.cols())
            fail(ErrorKind::DimensionMismatch, "xstar.csv length does not match the columns of A.csv");
        p.noise = subtract(p.measurements, matvec(p.matrix, truth));
        p.ground_truth = std::move(truth);
    }
    return out;
}

void write_recovery_json(const RecoverySummary& summary, const fs::path& path) {
    json j;
    j["estimate_csv_path"] = summary.estimate_csv_path;
    j["iterations"] = summary.iterations;
    j["success"] = summary.success ? json(*summary.success) : json(nullptr);
    if (summary.rel_error && std::isfinite(*summary.rel_error))
        j["rel_error"] = *summary.rel_error;
    else
        j["rel_error"] = summary.rel_error ? json("inf") : json(nullptr);
    j["residual_history"] = summary.residual_history;
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

}  // namespace sparserec
