#include <gtest/gtest.h>

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "sparserec/error.hpp"
#include "sparserec/io.hpp"

using namespace sparserec;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("sparserec_io_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST(FormatDouble, RoundTripsAndSpecials) {
    const double v = 0.1 + 0.2;
    EXPECT_EQ(std::stod(format_double(v)), v);
    EXPECT_EQ(format_double(INFINITY), "inf");
    EXPECT_EQ(format_double(-INFINITY), "-inf");
    EXPECT_EQ(format_double(NAN), "nan");
}

TEST(MatrixCsv, RoundTrip) {
    const auto dir = scratch("matrix");
    const Matrix m(2, 3, {1.0 / 3.0, -2, 1e-300, 4, 5.5, 6});
    write_matrix_csv(m, dir / "m.csv");
    EXPECT_EQ(read_matrix_csv(dir / "m.csv"), m);
}

TEST(MatrixCsv, RaggedRowsReportLine) {
    const auto dir = scratch("ragged");
    write_text(dir / "m.csv", "1,2\n3\n");
    try {
        read_matrix_csv(dir / "m.csv");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Parse);
        EXPECT_NE(std::string(e.what()).find(":2"), std::string::npos) << e.what();
    }
}

TEST(MatrixCsv, BadNumber) {
    const auto dir = scratch("badnum");
    write_text(dir / "m.csv", "1,x\n");
    EXPECT_THROW(read_matrix_csv(dir / "m.csv"), Error);
}

TEST(MatrixCsv, MissingFile) {
    try {
        read_matrix_csv("/nonexistent/m.csv");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Io);
    }
}

TEST(VectorCsv, RoundTrip) {
    const auto dir = scratch("vector");
    const Vector v{1e-17, -3, 12345.678};
    write_vector_csv(v, dir / "v.csv");
    EXPECT_EQ(read_vector_csv(dir / "v.csv"), v);
}

TEST(ProblemBundle, RoundTrip) {
    const auto dir = scratch("bundle");
    const ProblemParams params{12, 20, 3, 25.0, 5, Normalization::OperatorNormOne};
    const auto p = generate_problem(params);
    save_problem(p, {12, 20, 3, 25.0, 5, Normalization::OperatorNormOne}, dir);
    for (const char* f : {"A.csv", "y.csv", "xstar.csv", "meta.json"}) EXPECT_TRUE(fs::exists(dir / f)) << f;
    const auto loaded = load_problem(dir);
    EXPECT_EQ(loaded.problem.matrix, p.matrix);
    EXPECT_EQ(loaded.problem.measurements, p.measurements);
    EXPECT_EQ(*loaded.problem.ground_truth, *p.ground_truth);
    EXPECT_EQ(loaded.problem.sparsity, 3u);
    EXPECT_EQ(loaded.meta.seed, 5u);
    EXPECT_EQ(loaded.meta.snr_db, 25.0);
}

TEST(ProblemBundle, NoiselessMetaIsNull) {
    const auto dir = scratch("noiseless");
    const auto p = generate_problem({6, 8, 2, kNoiselessSnr, 1, Normalization::OperatorNormOne});
    save_problem(p, {6, 8, 2, kNoiselessSnr, 1, Normalization::OperatorNormOne}, dir);
    std::ifstream in(dir / "meta.json");
    const auto meta = nlohmann::json::parse(in);
    EXPECT_TRUE(meta.at("snr_db").is_null());
    EXPECT_TRUE(std::isinf(load_problem(dir).meta.snr_db));
}

TEST(ProblemBundle, MissingDirectory) { EXPECT_THROW(load_problem("/nonexistent/bundle"), Error); }

TEST(Normalization, Names) {
    EXPECT_EQ(parse_normalization(to_string(Normalization::ColumnVarianceOne)), Normalization::ColumnVarianceOne);
    EXPECT_EQ(parse_normalization("opnorm"), Normalization::OperatorNormOne);
    EXPECT_THROW(parse_normalization("l1"), Error);
}

TEST(RecoveryJson, Fields) {
    const auto dir = scratch("result");
    RecoverySummary s;
    s.estimate_csv_path = "est.csv";
    s.iterations = 3;
    s.success = true;
    s.rel_error = 1e-9;
    s.residual_history = {1, 0.5, 0.25};
    write_recovery_json(s, dir / "result.json");
    std::ifstream in(dir / "result.json");
    const auto j = nlohmann::json::parse(in);
    EXPECT_EQ(j.at("estimate_csv_path"), "est.csv");
    EXPECT_EQ(j.at("iterations"), 3);
    EXPECT_EQ(j.at("success"), true);
    EXPECT_EQ(j.at("residual_history").size(), 3u);
}
