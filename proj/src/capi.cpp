#include "sparserec/sparserec.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <new>
#include <string>

#include "sparserec/analysis.hpp"
#include "sparserec/error.hpp"
#include "sparserec/harness.hpp"
#include "sparserec/io.hpp"
#include "sparserec/parallel.hpp"
#include "sparserec/plot.hpp"
#include "sparserec/recovery.hpp"
#include "sparserec/sensing.hpp"
#include "sparserec/thresholding.hpp"

struct sr_matrix {
    sparserec::Matrix value;
};

struct sr_vector {
    sparserec::Vector value;
};

struct sr_problem {
    sparserec::SensingProblem problem;
    sparserec::ProblemMeta meta;
};

struct sr_result {
    sparserec::RecoveryResult result;
};

struct sr_experiment {
    sparserec::ExperimentSpec spec;
    std::vector<sparserec::TrialRecord> records;
};

namespace {

thread_local std::string last_error;

sr_status set_error(sr_status status, const char* what) {
    last_error = what;
    return status;
}

sr_status map_kind(sparserec::ErrorKind kind) {
    using sparserec::ErrorKind;
    switch (kind) {
        case ErrorKind::InvalidArgument: return SR_ERR_INVALID_ARGUMENT;
        case ErrorKind::DimensionMismatch: return SR_ERR_DIMENSION;
        case ErrorKind::NoConvergence: return SR_ERR_NO_CONVERGENCE;
        case ErrorKind::CombinatorialGuard: return SR_ERR_COMBINATORIAL_GUARD;
        case ErrorKind::Io: return SR_ERR_IO;
        case ErrorKind::Parse: return SR_ERR_PARSE;
    }
    return SR_ERR_INTERNAL;
}

// Runs body and converts any exception into a status code.
template <class Body>
sr_status guarded(Body&& body) noexcept {
    try {
        body();
        return SR_OK;
    } catch (const sparserec::Error& e) {
        return set_error(map_kind(e.kind()), e.what());
    } catch (const std::bad_alloc&) {
        return set_error(SR_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return set_error(SR_ERR_INTERNAL, e.what());
    } catch (...) {
        return set_error(SR_ERR_INTERNAL, "unknown error");
    }
}

void need(const void* p, const char* name) {
    if (p == nullptr) sparserec::fail(sparserec::ErrorKind::InvalidArgument, std::string(name) + " is NULL");
}

template <class T>
void copy_out(const T& values, double* dst, std::size_t capacity) {
    need(dst, "destination buffer");
    if (capacity < values.size())
        sparserec::fail(sparserec::ErrorKind::InvalidArgument,
                        "destination buffer holds " + std::to_string(capacity) + " values, need " +
                            std::to_string(values.size()));
    std::copy(values.begin(), values.end(), dst);
}

sr_vector* wrap(sparserec::Vector v) { return new sr_vector{std::move(v)}; }
sr_matrix* wrap(sparserec::Matrix m) { return new sr_matrix{std::move(m)}; }

}  // namespace

extern "C" {

const char* sr_last_error(void) { return last_error.c_str(); }

const char* sr_status_name(sr_status status) {
    switch (status) {
        case SR_OK: return "ok";
        case SR_ERR_INVALID_ARGUMENT: return "invalid argument";
        case SR_ERR_DIMENSION: return "dimension mismatch";
        case SR_ERR_NO_CONVERGENCE: return "no convergence";
        case SR_ERR_COMBINATORIAL_GUARD: return "combinatorial guard";
        case SR_ERR_IO: return "i/o error";
        case SR_ERR_PARSE: return "parse error";
        case SR_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* sr_version(void) { return "1.0.0"; }

// ---- matrices and vectors

sr_status sr_matrix_create(size_t rows, size_t cols, const double* data, sr_matrix** out) {
    return guarded([&] {
        need(out, "out");
        need(data, "data");
        *out = wrap(sparserec::Matrix(rows, cols, std::vector<double>(data, data + rows * cols)));
    });
}

void sr_matrix_free(sr_matrix* m) { delete m; }
size_t sr_matrix_rows(const sr_matrix* m) { return m ? m->value.rows() : 0; }
size_t sr_matrix_cols(const sr_matrix* m) { return m ? m->value.cols() : 0; }

sr_status sr_matrix_copy_data(const sr_matrix* m, double* dst, size_t capacity) {
    return guarded([&] {
        need(m, "matrix");
        copy_out(m->value.entries(), dst, capacity);
    });
}

sr_status sr_matrix_read_csv(const char* path, sr_matrix** out) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = wrap(sparserec::read_matrix_csv(path));
    });
}

sr_status sr_matrix_write_csv(const sr_matrix* m, const char* path) {
    return guarded([&] {
        need(m, "matrix");
        need(path, "path");
        sparserec::write_matrix_csv(m->value, path);
    });
}

sr_status sr_vector_create(size_t length, const double* data, sr_vector** out) {
    return guarded([&] {
        need(out, "out");
        need(data, "data");
        sparserec::Vector v(data, data + length);
        sparserec::require(sparserec::all_finite(v), "vector entries must be finite");
        *out = wrap(std::move(v));
    });
}

void sr_vector_free(sr_vector* v) { delete v; }
size_t sr_vector_length(const sr_vector* v) { return v ? v->value.size() : 0; }

sr_status sr_vector_copy_data(const sr_vector* v, double* dst, size_t capacity) {
    return guarded([&] {
        need(v, "vector");
        copy_out(v->value, dst, capacity);
    });
}

sr_status sr_vector_read_csv(const char* path, sr_vector** out) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = wrap(sparserec::read_vector_csv(path));
    });
}

sr_status sr_vector_write_csv(const sr_vector* v, const char* path) {
    return guarded([&] {
        need(v, "vector");
        need(path, "path");
        sparserec::write_vector_csv(v->value, path);
    });
}

sr_status sr_matvec(const sr_matrix* m, const sr_vector* v, sr_vector** out) {
    return guarded([&] {
        need(m, "matrix");
        need(v, "vector");
        need(out, "out");
        *out = wrap(sparserec::matvec(m->value, v->value));
    });
}

sr_status sr_operator_norm(const sr_matrix* m, double tol, size_t max_iters, double* out) {
    return guarded([&] {
        need(m, "matrix");
        need(out, "out");
        *out = sparserec::operator_norm(m->value, tol > 0.0 ? tol : sparserec::kDefaultNormTolerance,
                                        max_iters > 0 ? max_iters : sparserec::kDefaultNormMaxIters);
    });
}

sr_status sr_frobenius_norm_sq(const sr_matrix* m, double* out) {
    return guarded([&] {
        need(m, "matrix");
        need(out, "out");
        *out = sparserec::frobenius_norm_sq(m->value);
    });
}

// ---- generation

sr_status sr_gaussian_matrix(size_t m, size_t d, sr_variance_mode mode, uint64_t seed, sr_matrix** out) {
    return guarded([&] {
        need(out, "out");
        sparserec::require(mode == SR_VARIANCE_ONE_OVER_M || mode == SR_VARIANCE_UNIT, "unknown variance mode");
        *out = wrap(sparserec::gaussian_matrix(
            m, d, mode == SR_VARIANCE_UNIT ? sparserec::VarianceMode::Unit : sparserec::VarianceMode::OneOverM, seed));
    });
}

sr_status sr_normalize_operator_norm(const sr_matrix* m, sr_matrix** out) {
    return guarded([&] {
        need(m, "matrix");
        need(out, "out");
        *out = wrap(sparserec::normalize_operator_norm(m->value));
    });
}

sr_status sr_random_sparse_signal(size_t d, size_t s, uint64_t seed, sr_vector** out) {
    return guarded([&] {
        need(out, "out");
        *out = wrap(sparserec::random_sparse_signal(d, s, seed));
    });
}

sr_status sr_add_noise(const sr_vector* clean, double snr_db, uint64_t seed, sr_vector** noisy, sr_vector** noise) {
    return guarded([&] {
        need(clean, "clean");
        auto result = sparserec::add_noise(clean->value, snr_db, seed);
        if (noisy) *noisy = wrap(std::move(result.noisy));
        if (noise) *noise = wrap(std::move(result.noise));
    });
}

sr_status sr_problem_generate(size_t m, size_t d, size_t s, double snr_db, uint64_t seed,
                              sr_normalization normalization, sr_problem** out) {
    return guarded([&] {
        need(out, "out");
        sparserec::require(normalization == SR_NORM_OPERATOR_ONE || normalization == SR_NORM_COLUMN_VARIANCE_ONE,
                           "unknown normalization");
        const auto norm = normalization == SR_NORM_OPERATOR_ONE ? sparserec::Normalization::OperatorNormOne
                                                                : sparserec::Normalization::ColumnVarianceOne;
        auto problem = sparserec::generate_problem({m, d, s, snr_db, seed, norm});
        *out = new sr_problem{std::move(problem), {m, d, s, snr_db, seed, norm}};
    });
}

sr_status sr_problem_create(const sr_matrix* a, const sr_vector* y, size_t s, const sr_vector* ground_truth,
                            sr_problem** out) {
    return guarded([&] {
        need(a, "matrix");
        need(y, "measurements");
        need(out, "out");
        sparserec::SensingProblem p;
        p.matrix = a->value;
        p.measurements = y->value;
        p.sparsity = s;
        if (p.measurements.size() != p.m())
            sparserec::fail(sparserec::ErrorKind::DimensionMismatch, "measurement length does not match matrix rows");
        sparserec::require(s >= 1 && s <= p.d(), "sparsity must lie in [1, d]");
        if (ground_truth) {
            if (ground_truth->value.size() != p.d())
                sparserec::fail(sparserec::ErrorKind::DimensionMismatch,
                                "ground truth length does not match matrix columns");
            p.ground_truth = ground_truth->value;
            p.noise = sparserec::subtract(p.measurements, sparserec::matvec(p.matrix, *p.ground_truth));
        }
        sparserec::ProblemMeta meta{p.m(), p.d(), s, sparserec::kNoiselessSnr, 0, p.normalization};
        *out = new sr_problem{std::move(p), meta};
    });
}

void sr_problem_free(sr_problem* p) { delete p; }

sr_status sr_problem_save(const sr_problem* p, const char* dir) {
    return guarded([&] {
        need(p, "problem");
        need(dir, "dir");
        sparserec::save_problem(p->problem, p->meta, dir);
    });
}

sr_status sr_problem_load(const char* dir, sr_problem** out) {
    return guarded([&] {
        need(dir, "dir");
        need(out, "out");
        auto loaded = sparserec::load_problem(dir);
        *out = new sr_problem{std::move(loaded.problem), loaded.meta};
    });
}

size_t sr_problem_m(const sr_problem* p) { return p ? p->problem.m() : 0; }
size_t sr_problem_d(const sr_problem* p) { return p ? p->problem.d() : 0; }
size_t sr_problem_sparsity(const sr_problem* p) { return p ? p->problem.sparsity : 0; }
int sr_problem_has_ground_truth(const sr_problem* p) { return p && p->problem.ground_truth ? 1 : 0; }

sr_status sr_problem_matrix(const sr_problem* p, sr_matrix** out) {
    return guarded([&] {
        need(p, "problem");
        need(out, "out");
        *out = wrap(p->problem.matrix);
    });
}

sr_status sr_problem_measurements(const sr_problem* p, sr_vector** out) {
    return guarded([&] {
        need(p, "problem");
        need(out, "out");
        *out = wrap(p->problem.measurements);
    });
}

sr_status sr_problem_ground_truth(const sr_problem* p, sr_vector** out) {
    return guarded([&] {
        need(p, "problem");
        need(out, "out");
        sparserec::require(p->problem.ground_truth.has_value(), "problem has no ground truth");
        *out = wrap(*p->problem.ground_truth);
    });
}

sr_status sr_problem_effective_error(const sr_problem* p, sr_vector** out) {
    return guarded([&] {
        need(p, "problem");
        need(out, "out");
        *out = wrap(sparserec::effective_error(p->problem));
    });
}

// ---- recovery

sr_recovery_config sr_recovery_config_default(void) {
    return sr_recovery_config{SR_ALG_ILAT, 0.5, 0, 1000, 0.0, 0};
}

sr_status sr_recover(const sr_problem* p, const sr_recovery_config* config, sr_result** out) {
    return guarded([&] {
        need(p, "problem");
        need(config, "config");
        need(out, "out");
        sparserec::require(config->algorithm == SR_ALG_IHT || config->algorithm == SR_ALG_ILAT, "unknown algorithm");
        sparserec::require(config->sparsity >= 1, "config.sparsity must be at least 1");
        sparserec::RecoveryConfig cfg;
        cfg.algorithm = config->algorithm == SR_ALG_IHT ? sparserec::Algorithm::Iht : sparserec::Algorithm::Ilat;
        cfg.eta = config->eta;
        cfg.sparsity = config->sparsity;
        cfg.max_iters = config->max_iters;
        cfg.stop_tolerance = config->stop_tolerance;
        cfg.record_history = config->record_history != 0;
        *out = new sr_result{sparserec::recover(p->problem, cfg)};
    });
}

void sr_result_free(sr_result* r) { delete r; }

sr_status sr_result_estimate(const sr_result* r, sr_vector** out) {
    return guarded([&] {
        need(r, "result");
        need(out, "out");
        *out = wrap(r->result.estimate);
    });
}

size_t sr_result_iterations(const sr_result* r) { return r ? r->result.iterations_run : 0; }
size_t sr_result_gradient_evaluations(const sr_result* r) { return r ? r->result.gradient_evaluations : 0; }

sr_recovery_status sr_result_status(const sr_result* r) {
    if (!r) return SR_RECOVERY_COMPLETED;
    switch (r->result.status) {
        case sparserec::RecoveryStatus::Completed: return SR_RECOVERY_COMPLETED;
        case sparserec::RecoveryStatus::Stopped: return SR_RECOVERY_STOPPED;
        case sparserec::RecoveryStatus::Diverged: return SR_RECOVERY_DIVERGED;
    }
    return SR_RECOVERY_COMPLETED;
}

size_t sr_result_history_length(const sr_result* r) { return r ? r->result.residual_history.size() : 0; }

sr_status sr_result_residual_history(const sr_result* r, double* dst, size_t capacity) {
    return guarded([&] {
        need(r, "result");
        copy_out(r->result.residual_history, dst, capacity);
    });
}

sr_status sr_result_error_history(const sr_result* r, double* dst, size_t capacity) {
    return guarded([&] {
        need(r, "result");
        sparserec::require(r->result.error_history.has_value(),
                           "no error history (enable record_history on a problem with ground truth)");
        copy_out(*r->result.error_history, dst, capacity);
    });
}

sr_status sr_result_relative_error(const sr_result* r, const sr_vector* truth, double* out) {
    return guarded([&] {
        need(r, "result");
        need(truth, "truth");
        need(out, "out");
        *out = sparserec::relative_error(r->result.estimate, truth->value);
    });
}

sr_status sr_check_success(const sr_result* r, const sr_vector* truth, double rel_tol, int* out) {
    return guarded([&] {
        need(r, "result");
        need(truth, "truth");
        need(out, "out");
        *out = sparserec::check_success(r->result, truth->value, rel_tol) ? 1 : 0;
    });
}

sr_status sr_result_write(const sr_result* r, const sr_vector* truth, double rel_tol, const char* json_path,
                          const char* estimate_csv) {
    return guarded([&] {
        need(r, "result");
        need(json_path, "json_path");
        need(estimate_csv, "estimate_csv");
        sparserec::write_vector_csv(r->result.estimate, estimate_csv);
        sparserec::RecoverySummary summary;
        summary.estimate_csv_path = estimate_csv;
        summary.iterations = r->result.iterations_run;
        summary.residual_history = r->result.residual_history;
        if (truth) {
            const bool diverged = r->result.status == sparserec::RecoveryStatus::Diverged;
            summary.rel_error = diverged ? std::numeric_limits<double>::infinity()
                                         : sparserec::relative_error(r->result.estimate, truth->value);
            summary.success = !diverged && sparserec::check_success(r->result, truth->value, rel_tol);
        }
        sparserec::write_recovery_json(summary, json_path);
    });
}

// ---- thresholding

sr_status sr_hard_threshold(const sr_vector* z, size_t s, sr_vector** out) {
    return guarded([&] {
        need(z, "z");
        need(out, "out");
        *out = wrap(sparserec::hard_threshold(z->value, s).values);
    });
}

sr_status sr_lat_threshold(const sr_vector* z, const sr_matrix* a, const sr_vector* y, size_t s, double eta,
                           sr_vector** out) {
    return guarded([&] {
        need(z, "z");
        need(a, "matrix");
        need(y, "y");
        need(out, "out");
        *out = wrap(sparserec::lat_threshold(z->value, a->value, y->value, s, eta).values);
    });
}

sr_status sr_cost_gradient(const sr_matrix* a, const sr_vector* y, const sr_vector* z, sr_vector** out) {
    return guarded([&] {
        need(a, "matrix");
        need(y, "y");
        need(z, "z");
        need(out, "out");
        *out = wrap(sparserec::cost_gradient(a->value, y->value, z->value));
    });
}

// ---- analysis

sr_status sr_rip_exact(const sr_matrix* a, size_t s, double* out) {
    return guarded([&] {
        need(a, "matrix");
        need(out, "out");
        *out = sparserec::rip_constant_exact(a->value, s);
    });
}

sr_status sr_rip_sampled(const sr_matrix* a, size_t s, size_t n_supports, uint64_t seed, double* out) {
    return guarded([&] {
        need(a, "matrix");
        need(out, "out");
        *out = sparserec::rip_constant_sampled(a->value, s, n_supports, seed);
    });
}

sr_status sr_certify(double delta_2s, double eta, double e_tilde_norm, sr_certificate* out) {
    return guarded([&] {
        need(out, "out");
        const auto clean = sparserec::noiseless_certificate(delta_2s, eta);
        const auto noisy = sparserec::noisy_certificate(delta_2s, eta, e_tilde_norm);
        *out = sr_certificate{clean.rho, clean.condition_met ? 1 : 0, noisy.rho, noisy.condition_met ? 1 : 0,
                              noisy.floor};
    });
}

sr_status sr_avg_case(size_t m, size_t d, double eta, sr_avg_case_bound* out) {
    return guarded([&] {
        need(out, "out");
        const auto bound = sparserec::avg_case_rho(m, d, eta);
        *out = sr_avg_case_bound{bound.rho, bound.eta_valid_upper, bound.eta_star, sparserec::expected_frob_residual(m, d, eta),
                           sparserec::expected_frob_gram(m, d, eta)};
    });
}

sr_status sr_validate_moments(size_t m, size_t d, const double* etas, size_t n_eta, size_t draws, uint64_t seed,
                              size_t workers, sr_moment_row* rows, sr_column_moments* columns) {
    return guarded([&] {
        need(etas, "etas");
        need(rows, "rows");
        const auto result = sparserec::validate_moments(m, d, std::span<const double>(etas, n_eta), draws, seed,
                                                        workers == 0 ? sparserec::default_workers() : workers);
        for (std::size_t i = 0; i < result.rows.size(); ++i) {
            const auto& r = result.rows[i];
            rows[i] = sr_moment_row{r.eta, r.predicted_residual, r.mc_residual, r.predicted_gram, r.mc_gram, r.rel_err};
        }
        if (columns)
            *columns = sr_column_moments{result.columns.mean_entry, result.columns.mean_entry_sq,
                                         result.columns.mean_inner_sq, result.columns.mean_col_norm4};
    });
}

sr_status sr_write_moments_csv(const sr_moment_row* rows, size_t n_rows, const char* path) {
    return guarded([&] {
        need(rows, "rows");
        need(path, "path");
        std::filesystem::path p(path);
        if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
        std::ofstream out(p);
        if (!out) sparserec::fail(sparserec::ErrorKind::Io, "cannot open '" + p.string() + "' for writing");
        out << "eta,predicted_residual,mc_residual,predicted_gram,mc_gram,rel_err\n";
        using sparserec::format_double;
        for (std::size_t i = 0; i < n_rows; ++i) {
            const auto& r = rows[i];
            out << format_double(r.eta) << ',' << format_double(r.predicted_residual) << ','
                << format_double(r.mc_residual) << ',' << format_double(r.predicted_gram) << ','
                << format_double(r.mc_gram) << ',' << format_double(r.rel_err) << '\n';
        }
        if (!out) sparserec::fail(sparserec::ErrorKind::Io, "failed writing '" + p.string() + "'");
    });
}

// ---- experiments

sr_experiment_spec sr_experiment_spec_default(sr_experiment_kind kind) {
    sr_experiment_spec spec{};
    spec.kind = kind;
    spec.m = 128;
    spec.d = 256;
    spec.trials_per_point = 100;
    spec.iters_iht = 1000;
    spec.iters_ilat = 1000;
    spec.has_snr = 0;
    spec.snr_db = std::numeric_limits<double>::infinity();
    spec.base_seed = 0;
    spec.success_rel_tol = 1e-4;
    return spec;
}

sr_status sr_experiment_run(const sr_experiment_spec* spec, size_t workers, sr_experiment** out) {
    return guarded([&] {
        need(spec, "spec");
        need(out, "out");
        sparserec::require(spec->kind >= SR_EXP_PHASE_TRANSITION && spec->kind <= SR_EXP_THRESHOLD_COMPARE,
                           "unknown experiment kind");
        sparserec::require(spec->n_sparsity == 0 || spec->sparsity_grid != nullptr, "sparsity_grid is NULL");
        sparserec::require(spec->n_eta == 0 || spec->eta_grid != nullptr, "eta_grid is NULL");
        sparserec::ExperimentSpec s;
        s.kind = static_cast<sparserec::ExperimentKind>(spec->kind);
        s.m = spec->m;
        s.d = spec->d;
        s.sparsity_grid.assign(spec->sparsity_grid, spec->sparsity_grid + spec->n_sparsity);
        s.eta_grid.assign(spec->eta_grid, spec->eta_grid + spec->n_eta);
        s.trials_per_point = spec->trials_per_point;
        s.iters_iht = spec->iters_iht;
        s.iters_ilat = spec->iters_ilat;
        if (spec->has_snr) s.snr_db = spec->snr_db;
        s.base_seed = spec->base_seed;
        s.success_rel_tol = spec->success_rel_tol;
        auto records = sparserec::run_experiment(s, workers == 0 ? sparserec::default_workers() : workers);
        *out = new sr_experiment{std::move(s), std::move(records)};
    });
}

void sr_experiment_free(sr_experiment* e) { delete e; }
size_t sr_experiment_record_count(const sr_experiment* e) { return e ? e->records.size() : 0; }

sr_status sr_experiment_record(const sr_experiment* e, size_t index, sr_trial_record* out) {
    return guarded([&] {
        need(e, "experiment");
        need(out, "out");
        sparserec::require(index < e->records.size(), "record index out of range");
        const auto& r = e->records[index];
        *out = sr_trial_record{r.trial,
                               r.seed,
                               r.s,
                               r.eta,
                               static_cast<sr_method>(r.algorithm),
                               r.iterations,
                               r.gradient_evaluations,
                               r.success ? 1 : 0,
                               r.rel_error,
                               r.threshold_ratio ? 1 : 0,
                               r.threshold_ratio.value_or(std::numeric_limits<double>::quiet_NaN()),
                               r.runtime_ms};
    });
}

sr_status sr_experiment_write(const sr_experiment* e, const char* dir) {
    return guarded([&] {
        need(e, "experiment");
        need(dir, "dir");
        sparserec::write_experiment(e->spec, e->records, dir);
    });
}

// ---- plotting

sr_status sr_emit_plot(const char* summary_csv, sr_plot_kind kind, const char* out_svg) {
    return guarded([&] {
        need(summary_csv, "summary_csv");
        need(out_svg, "out_svg");
        sparserec::require(kind >= SR_PLOT_SUCCESS && kind <= SR_PLOT_RATIO, "unknown plot kind");
        const auto k = kind == SR_PLOT_SUCCESS ? sparserec::PlotKind::SuccessCurve
                       : kind == SR_PLOT_ERROR ? sparserec::PlotKind::ErrorCurve
                                               : sparserec::PlotKind::RatioCurve;
        sparserec::emit_plot(summary_csv, k, out_svg);
    });
}

}  // extern "C"
