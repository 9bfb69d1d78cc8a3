#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "sparserec/sparserec.h"

namespace fs = std::filesystem;

namespace {

std::vector<double> values(const sr_vector* v) {
    std::vector<double> out(sr_vector_length(v));
    EXPECT_EQ(sr_vector_copy_data(v, out.data(), out.size()), SR_OK);
    return out;
}

}  // namespace

TEST(CApi, StatusNamesAndVersion) {
    EXPECT_STREQ(sr_status_name(SR_OK), "ok");
    EXPECT_STREQ(sr_status_name(SR_ERR_PARSE), "parse error");
    EXPECT_NE(std::string(sr_version()), "");
}

TEST(CApi, MatrixVectorBasics) {
    const double a[] = {1, 2, 3, 4};
    const double x[] = {1, 1};
    sr_matrix* m = nullptr;
    sr_vector* v = nullptr;
    sr_vector* out = nullptr;
    ASSERT_EQ(sr_matrix_create(2, 2, a, &m), SR_OK);
    ASSERT_EQ(sr_vector_create(2, x, &v), SR_OK);
    ASSERT_EQ(sr_matvec(m, v, &out), SR_OK);
    EXPECT_EQ(values(out), (std::vector<double>{3, 7}));
    double f = 0;
    ASSERT_EQ(sr_frobenius_norm_sq(m, &f), SR_OK);
    EXPECT_EQ(f, 30.0);
    double small[1];
    EXPECT_EQ(sr_matrix_copy_data(m, small, 1), SR_ERR_INVALID_ARGUMENT);
    sr_vector_free(out);
    sr_vector_free(v);
    sr_matrix_free(m);
}

TEST(CApi, ErrorsMapToStatus) {
    const double a[] = {1, 2, 3, 4, 5, 6};
    const double x[] = {1, 1};
    sr_matrix* m = nullptr;
    sr_vector* v = nullptr;
    sr_vector* out = nullptr;
    ASSERT_EQ(sr_matrix_create(2, 3, a, &m), SR_OK);
    ASSERT_EQ(sr_vector_create(2, x, &v), SR_OK);
    EXPECT_EQ(sr_matvec(m, v, &out), SR_ERR_DIMENSION);
    EXPECT_NE(std::string(sr_last_error()), "");
    EXPECT_EQ(sr_matrix_create(0, 3, a, &m), SR_ERR_INVALID_ARGUMENT);
    EXPECT_EQ(sr_matvec(nullptr, v, &out), SR_ERR_INVALID_ARGUMENT);
    sr_matrix* r = nullptr;
    EXPECT_EQ(sr_matrix_read_csv("/nonexistent.csv", &r), SR_ERR_IO);
    sr_vector_free(v);
    sr_matrix_free(m);
    sr_matrix_free(nullptr);
}

TEST(CApi, GenerateRecoverAndInspect) {
    sr_problem* p = nullptr;
    ASSERT_EQ(sr_problem_generate(64, 128, 4, INFINITY, 3, SR_NORM_OPERATOR_ONE, &p), SR_OK);
    EXPECT_EQ(sr_problem_m(p), 64u);
    EXPECT_EQ(sr_problem_d(p), 128u);
    EXPECT_EQ(sr_problem_has_ground_truth(p), 1);

    sr_recovery_config cfg = sr_recovery_config_default();
    cfg.sparsity = 4;
    cfg.max_iters = 300;
    cfg.record_history = 1;
    sr_result* r = nullptr;
    ASSERT_EQ(sr_recover(p, &cfg, &r), SR_OK);
    EXPECT_EQ(sr_result_iterations(r), 300u);
    EXPECT_EQ(sr_result_gradient_evaluations(r), 600u);
    EXPECT_EQ(sr_result_status(r), SR_RECOVERY_COMPLETED);
    std::vector<double> hist(sr_result_history_length(r));
    ASSERT_EQ(sr_result_error_history(r, hist.data(), hist.size()), SR_OK);

    sr_vector* truth = nullptr;
    ASSERT_EQ(sr_problem_ground_truth(p, &truth), SR_OK);
    int ok = 0;
    ASSERT_EQ(sr_check_success(r, truth, 1e-4, &ok), SR_OK);
    EXPECT_EQ(ok, 1);

    cfg.sparsity = 0;
    sr_result* bad = nullptr;
    EXPECT_EQ(sr_recover(p, &cfg, &bad), SR_ERR_INVALID_ARGUMENT);

    sr_vector_free(truth);
    sr_result_free(r);
    sr_problem_free(p);
}

TEST(CApi, BundleRoundTrip) {
    const auto dir = fs::temp_directory_path() / "sparserec_capi_bundle";
    fs::remove_all(dir);
    sr_problem* p = nullptr;
    ASSERT_EQ(sr_problem_generate(10, 20, 2, 20.0, 1, SR_NORM_OPERATOR_ONE, &p), SR_OK);
    ASSERT_EQ(sr_problem_save(p, dir.c_str()), SR_OK);
    sr_problem* q = nullptr;
    ASSERT_EQ(sr_problem_load(dir.c_str(), &q), SR_OK);
    sr_vector *yp = nullptr, *yq = nullptr, *ep = nullptr;
    ASSERT_EQ(sr_problem_measurements(p, &yp), SR_OK);
    ASSERT_EQ(sr_problem_measurements(q, &yq), SR_OK);
    EXPECT_EQ(values(yp), values(yq));
    ASSERT_EQ(sr_problem_effective_error(q, &ep), SR_OK);
    EXPECT_EQ(sr_vector_length(ep), 10u);
    for (auto* v : {yp, yq, ep}) sr_vector_free(v);
    sr_problem_free(p);
    sr_problem_free(q);
}

TEST(CApi, ThresholdingWorkedInstance) {
    const double id[] = {1, 0, 0, 1};
    const double zd[] = {0.5, 0.4};
    const double yd[] = {1, 0};
    sr_matrix* a = nullptr;
    sr_vector *z = nullptr, *y = nullptr, *lat = nullptr, *hard = nullptr, *g = nullptr;
    ASSERT_EQ(sr_matrix_create(2, 2, id, &a), SR_OK);
    ASSERT_EQ(sr_vector_create(2, zd, &z), SR_OK);
    ASSERT_EQ(sr_vector_create(2, yd, &y), SR_OK);
    ASSERT_EQ(sr_lat_threshold(z, a, y, 1, 0.5, &lat), SR_OK);
    ASSERT_EQ(sr_hard_threshold(z, 1, &hard), SR_OK);
    ASSERT_EQ(sr_cost_gradient(a, y, z, &g), SR_OK);
    EXPECT_EQ(values(lat), (std::vector<double>{0.5, 0}));
    EXPECT_EQ(values(hard), (std::vector<double>{0.5, 0}));
    EXPECT_NEAR(values(g)[0], -1.0, 1e-15);
    EXPECT_NEAR(values(g)[1], 0.8, 1e-15);
    for (auto* v : {z, y, lat, hard, g}) sr_vector_free(v);
    sr_matrix_free(a);
}

TEST(CApi, AnalysisEntryPoints) {
    const double id[] = {1, 0, 0, 0, 1, 0, 0, 0, 1};
    sr_matrix* a = nullptr;
    ASSERT_EQ(sr_matrix_create(3, 3, id, &a), SR_OK);
    double delta = -1;
    ASSERT_EQ(sr_rip_exact(a, 2, &delta), SR_OK);
    EXPECT_NEAR(delta, 0.0, 1e-14);
    ASSERT_EQ(sr_rip_sampled(a, 2, 2, 1, &delta), SR_OK);
    EXPECT_NEAR(delta, 0.0, 1e-14);
    double norm = 0;
    ASSERT_EQ(sr_operator_norm(a, 0, 0, &norm), SR_OK);
    EXPECT_NEAR(norm, 1.0, 1e-12);
    sr_matrix_free(a);

    sr_certificate c{};
    ASSERT_EQ(sr_certify(0.04, 0.0, 3.0, &c), SR_OK);
    EXPECT_NEAR(c.noisy_rho, 0.4, 1e-15);
    EXPECT_NEAR(c.noise_floor, 10.0, 1e-12);
    EXPECT_EQ(sr_certify(0.04, 2.0, 0.0, &c), SR_ERR_INVALID_ARGUMENT);

    sr_avg_case_bound b{};
    ASSERT_EQ(sr_avg_case(2, 4, 0.5, &b), SR_OK);
    EXPECT_NEAR(b.expected_frob_residual, 10.0, 1e-12);
    EXPECT_NEAR(b.expected_frob_gram, 14.0, 1e-12);

    const double etas[] = {0.1, 0.2};
    sr_moment_row rows[2];
    sr_column_moments cols{};
    ASSERT_EQ(sr_validate_moments(8, 16, etas, 2, 500, 1, 1, rows, &cols), SR_OK);
    EXPECT_EQ(rows[1].eta, 0.2);
    EXPECT_LT(rows[0].rel_err, 0.1);
}

TEST(CApi, ExperimentRunAndWrite) {
    const size_t grid[] = {2, 4};
    const double etas[] = {0.5};
    sr_experiment_spec spec = sr_experiment_spec_default(SR_EXP_THRESHOLD_COMPARE);
    spec.m = 16;
    spec.d = 32;
    spec.sparsity_grid = grid;
    spec.n_sparsity = 2;
    spec.eta_grid = etas;
    spec.n_eta = 1;
    spec.trials_per_point = 3;
    sr_experiment* e = nullptr;
    ASSERT_EQ(sr_experiment_run(&spec, 2, &e), SR_OK);
    ASSERT_EQ(sr_experiment_record_count(e), 12u);
    sr_trial_record rec{};
    ASSERT_EQ(sr_experiment_record(e, 0, &rec), SR_OK);
    EXPECT_EQ(rec.algorithm, SR_METHOD_HARD);
    EXPECT_EQ(rec.has_threshold_ratio, 1);
    EXPECT_EQ(sr_experiment_record(e, 12, &rec), SR_ERR_INVALID_ARGUMENT);

    const auto dir = fs::temp_directory_path() / "sparserec_capi_exp";
    fs::remove_all(dir);
    ASSERT_EQ(sr_experiment_write(e, dir.c_str()), SR_OK);
    EXPECT_TRUE(fs::exists(dir / "summary.csv"));
    const auto svg = dir / "ratio.svg";
    ASSERT_EQ(sr_emit_plot((dir / "summary.csv").c_str(), SR_PLOT_RATIO, svg.c_str()), SR_OK);
    EXPECT_TRUE(fs::exists(svg));
    sr_experiment_free(e);

    spec.kind = SR_EXP_NOISY_ERROR;
    EXPECT_EQ(sr_experiment_run(&spec, 1, &e), SR_ERR_INVALID_ARGUMENT);
}
