// sparserec command-line front end. Talks to the library only through the C API.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sparserec/sparserec.h"

namespace {

using json = nlohmann::json;

struct RuntimeFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check(sr_status status, const char* what) {
    if (status != SR_OK)
        throw RuntimeFailure(std::string(what) + ": " + sr_status_name(status) + ": " + sr_last_error());
}

template <class T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const { Free(p); }
};
using MatrixPtr = std::unique_ptr<sr_matrix, Deleter<sr_matrix, sr_matrix_free>>;
using VectorPtr = std::unique_ptr<sr_vector, Deleter<sr_vector, sr_vector_free>>;
using ProblemPtr = std::unique_ptr<sr_problem, Deleter<sr_problem, sr_problem_free>>;
using ResultPtr = std::unique_ptr<sr_result, Deleter<sr_result, sr_result_free>>;
using ExperimentPtr = std::unique_ptr<sr_experiment, Deleter<sr_experiment, sr_experiment_free>>;

std::string path_join(const std::string& dir, const std::string& name) {
    if (dir.empty()) return name;
    return dir.back() == '/' ? dir + name : dir + "/" + name;
}

double parse_snr(const std::string& text) {
    if (text == "inf" || text == "none") return std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || std::isnan(v)) throw CLI::ValidationError("--snr", "not a number: " + text);
    return v;
}

// All flag values for every subcommand.
struct Options {
    std::string config;
    std::size_t workers = 0;

    std::size_t m = 128;
    std::size_t d = 256;
    std::size_t sparsity = 10;
    std::string snr = "inf";
    std::uint64_t seed = 0;
    std::string normalization = "operator_norm_one";
    std::string variance = "one_over_m";
    bool normalize = false;
    std::string out;

    std::string problem;
    std::string algorithm = "ilat";
    double eta = 0.5;
    std::size_t iters = 1000;
    double tol = 0.0;
    double success_tol = 1e-4;

    std::string matrix;
    bool exact = false;
    std::size_t sample = 0;
    std::optional<double> rip_eta;
    std::optional<double> e_tilde;

    double delta = 0.0;

    std::vector<double> eta_grid;
    std::size_t draws = 20000;

    std::vector<std::size_t> sparsity_grid;
    std::size_t trials = 100;
    std::size_t iters_iht = 1000;
    std::size_t iters_ilat = 1000;

    std::string summary;
    std::string kind = "success";
};

struct App {
    CLI::App root{"Sparse recovery toolkit: IHT, ILAT and look-ahead thresholding", "sparserec"};
    std::vector<CLI::App*> subs;
};

void add_workers(CLI::App* sub, Options& o) {
    sub->add_option("--workers", o.workers, "Worker threads (0 = available parallelism)")
        ->check(CLI::NonNegativeNumber);
}

std::unique_ptr<App> build_app(Options& o) {
    auto app = std::make_unique<App>();
    auto& root = app->root;
    root.require_subcommand(1);
    root.set_version_flag("--version", std::string(sr_version()));

    auto add = [&](const char* name, const char* desc) {
        CLI::App* sub = root.add_subcommand(name, desc);
        sub->add_option("--config", o.config, "JSON file whose keys mirror the flags");
        app->subs.push_back(sub);
        return sub;
    };

    {
        auto* sub = add("gen-matrix", "Draw a Gaussian measurement matrix");
        sub->add_option("--m", o.m, "Rows")->required()->check(CLI::PositiveNumber);
        sub->add_option("--d", o.d, "Columns")->required()->check(CLI::PositiveNumber);
        sub->add_option("--seed", o.seed, "Seed");
        sub->add_option("--variance", o.variance, "Entry variance")
            ->check(CLI::IsMember({"one_over_m", "unit"}));
        sub->add_flag("--normalize", o.normalize, "Scale to unit operator norm");
        sub->add_option("--out", o.out, "Output CSV")->required();
    }
    {
        auto* sub = add("gen-problem", "Generate a problem bundle (A.csv, y.csv, xstar.csv, meta.json)");
        sub->add_option("--m", o.m, "Measurements")->check(CLI::PositiveNumber);
        sub->add_option("--d", o.d, "Signal dimension")->check(CLI::PositiveNumber);
        sub->add_option("--sparsity", o.sparsity, "Nonzeros in x*")->check(CLI::PositiveNumber);
        sub->add_option("--snr", o.snr, "Measurement SNR in dB, or inf");
        sub->add_option("--seed", o.seed, "Seed");
        sub->add_option("--normalization", o.normalization, "Matrix normalization")
            ->check(CLI::IsMember({"operator_norm_one", "opnorm", "column_variance_one", "colvar"}));
        sub->add_option("--out", o.out, "Output directory")->required();
    }
    {
        auto* sub = add("recover", "Run IHT or ILAT on a problem bundle");
        sub->add_option("--problem", o.problem, "Problem directory")->required();
        sub->add_option("--algorithm", o.algorithm, "iht or ilat")->check(CLI::IsMember({"iht", "ilat"}));
        sub->add_option("--eta", o.eta, "Look-ahead step")->check(CLI::NonNegativeNumber);
        sub->add_option("--sparsity", o.sparsity, "Sparsity (default: from the bundle)")->check(CLI::PositiveNumber);
        sub->add_option("--iters", o.iters, "Iteration budget")->check(CLI::PositiveNumber);
        sub->add_option("--tol", o.tol, "Stop when the step norm falls to this (0 = never)")
            ->check(CLI::NonNegativeNumber);
        sub->add_option("--success-tol", o.success_tol, "Relative error counted as success")
            ->check(CLI::PositiveNumber);
        sub->add_option("--out", o.out, "Output directory (default: the problem directory)");
    }
    {
        auto* sub = add("rip", "Restricted isometry constant of a matrix");
        sub->add_option("--matrix", o.matrix, "Matrix CSV")->required();
        sub->add_option("--sparsity", o.sparsity, "Support size s")->required()->check(CLI::PositiveNumber);
        auto* exact = sub->add_flag("--exact", o.exact, "Enumerate every support (default)");
        auto* sample = sub->add_option("--sample", o.sample, "Sample this many supports")->check(CLI::PositiveNumber);
        exact->excludes(sample);
        sub->add_option("--seed", o.seed, "Sampling seed");
        sub->add_option("--eta", o.rip_eta, "Also report certificates at this η (uses δ_2s)")
            ->check(CLI::NonNegativeNumber);
        sub->add_option("--e-tilde", o.e_tilde, "Effective error norm for the noisy floor")
            ->check(CLI::NonNegativeNumber);
    }
    {
        auto* sub = add("certify", "Convergence certificates from a given δ_2s");
        sub->add_option("--delta", o.delta, "δ_2s")->required()->check(CLI::NonNegativeNumber);
        sub->add_option("--eta", o.eta, "Look-ahead step")->required()->check(CLI::NonNegativeNumber);
        sub->add_option("--e-tilde", o.e_tilde, "Effective error norm")->check(CLI::NonNegativeNumber);
    }
    {
        auto* sub = add("validate-moments", "Monte Carlo check of the Frobenius moment formulas");
        sub->add_option("--m", o.m, "Rows")->required()->check(CLI::PositiveNumber);
        sub->add_option("--d", o.d, "Columns")->required()->check(CLI::PositiveNumber);
        sub->add_option("--eta-grid", o.eta_grid, "Comma-separated η values")->required()->delimiter(',');
        sub->add_option("--draws", o.draws, "Monte Carlo draws")->check(CLI::PositiveNumber);
        sub->add_option("--seed", o.seed, "Seed");
        sub->add_option("--out", o.out, "Output CSV (default moments.csv)");
        add_workers(sub, o);
    }
    for (const char* name : {"phase-transition", "noisy-error", "constant-compute", "threshold-compare"}) {
        auto* sub = add(name, "Run the experiment and write results.csv, summary.csv, spec.json");
        sub->add_option("--m", o.m, "Measurements")->check(CLI::PositiveNumber);
        sub->add_option("--d", o.d, "Signal dimension")->check(CLI::PositiveNumber);
        sub->add_option("--sparsity-grid", o.sparsity_grid, "Comma-separated sparsities")->delimiter(',');
        sub->add_option("--eta-grid", o.eta_grid, "Comma-separated η values")->delimiter(',');
        sub->add_option("--trials", o.trials, "Trials per sparsity")->check(CLI::PositiveNumber);
        sub->add_option("--iters-iht", o.iters_iht, "IHT iterations")->check(CLI::PositiveNumber);
        sub->add_option("--iters-ilat", o.iters_ilat, "ILAT iterations")->check(CLI::PositiveNumber);
        sub->add_option("--snr", o.snr, "Measurement SNR in dB");
        sub->add_option("--seed", o.seed, "Base seed (SPARSEREC_SEED overrides)");
        sub->add_option("--success-tol", o.success_tol, "Relative error counted as success")
            ->check(CLI::PositiveNumber);
        sub->add_option("--out", o.out, "Output directory")->required();
        add_workers(sub, o);
    }
    {
        auto* sub = add("plot", "Render summary.csv as an SVG chart");
        sub->add_option("--summary", o.summary, "summary.csv")->required();
        sub->add_option("--kind", o.kind, "success, error or ratio")->check(CLI::IsMember({"success", "error", "ratio"}));
        sub->add_option("--out", o.out, "Output SVG")->required();
    }
    return app;
}

bool given(const std::vector<std::string>& args, const std::string& flag) {
    for (const auto& a : args)
        if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    return false;
}

std::string json_scalar(const json& v, const std::string& key) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
    if (v.is_number_float()) {
        std::ostringstream ss;
        ss.precision(17);
        ss << v.get<double>();
        return ss.str();
    }
    throw CLI::ValidationError("--config", "key '" + key + "' has an unsupported value type");
}

// Appends config-file entries as flags, unless the flag was given on the command line.
std::vector<std::string> inject_config(const std::vector<std::string>& args) {
    if (args.empty()) return args;
    const std::string& name = args[0];
    std::string config;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) config = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) config = args[i].substr(9);
    }
    if (config.empty()) return args;

    std::ifstream in(config);
    if (!in) throw CLI::ValidationError("--config", "cannot open '" + config + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw CLI::ValidationError("--config", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw CLI::ValidationError("--config", "top level must be an object");

    Options scratch;
    auto probe = build_app(scratch);
    CLI::App* sub = probe->root.get_subcommand_ptr(name).get();

    std::vector<std::string> out = args;
    for (const auto& [key, value] : doc.items()) {
        const std::string flag = "--" + key;
        const CLI::Option* opt = sub->get_option_no_throw(flag);
        if (opt == nullptr || key == "config")
            throw CLI::ValidationError("--config", "unknown key '" + key + "' for " + name);
        if (given(args, flag)) continue;
        if (opt->get_type_size() == 0) {
            if (!value.is_boolean()) throw CLI::ValidationError("--config", "key '" + key + "' must be a boolean");
            if (value.get<bool>()) out.push_back(flag);
            continue;
        }
        if (value.is_null()) continue;
        std::string text;
        if (value.is_array()) {
            for (const auto& item : value) text += (text.empty() ? "" : ",") + json_scalar(item, key);
        } else {
            text = json_scalar(value, key);
        }
        out.push_back(flag);
        out.push_back(text);
    }
    return out;
}

// ---- subcommands

int cmd_gen_matrix(const Options& o) {
    sr_matrix* raw = nullptr;
    check(sr_gaussian_matrix(o.m, o.d, o.variance == "unit" ? SR_VARIANCE_UNIT : SR_VARIANCE_ONE_OVER_M, o.seed, &raw),
          "gen-matrix");
    MatrixPtr a(raw);
    if (o.normalize) {
        check(sr_normalize_operator_norm(a.get(), &raw), "gen-matrix");
        a.reset(raw);
    }
    check(sr_matrix_write_csv(a.get(), o.out.c_str()), "gen-matrix");
    return 0;
}

sr_normalization parse_normalization(const std::string& s) {
    return s == "column_variance_one" || s == "colvar" ? SR_NORM_COLUMN_VARIANCE_ONE : SR_NORM_OPERATOR_ONE;
}

int cmd_gen_problem(const Options& o) {
    sr_problem* raw = nullptr;
    check(sr_problem_generate(o.m, o.d, o.sparsity, parse_snr(o.snr), o.seed, parse_normalization(o.normalization),
                              &raw),
          "gen-problem");
    ProblemPtr p(raw);
    check(sr_problem_save(p.get(), o.out.c_str()), "gen-problem");
    return 0;
}

int cmd_recover(const Options& o, bool sparsity_given) {
    sr_problem* raw = nullptr;
    check(sr_problem_load(o.problem.c_str(), &raw), "recover");
    ProblemPtr p(raw);

    sr_recovery_config cfg = sr_recovery_config_default();
    cfg.algorithm = o.algorithm == "iht" ? SR_ALG_IHT : SR_ALG_ILAT;
    cfg.eta = o.eta;
    cfg.sparsity = sparsity_given ? o.sparsity : sr_problem_sparsity(p.get());
    cfg.max_iters = o.iters;
    cfg.stop_tolerance = o.tol;
    cfg.record_history = 1;

    sr_result* rr = nullptr;
    check(sr_recover(p.get(), &cfg, &rr), "recover");
    ResultPtr r(rr);

    VectorPtr truth;
    if (sr_problem_has_ground_truth(p.get())) {
        sr_vector* t = nullptr;
        check(sr_problem_ground_truth(p.get(), &t), "recover");
        truth.reset(t);
    }
    const std::string dir = o.out.empty() ? o.problem : o.out;
    const std::string json_path = path_join(dir, "result.json");
    const std::string est_path = path_join(dir, "estimate.csv");
    check(sr_result_write(r.get(), truth.get(), o.success_tol, json_path.c_str(), est_path.c_str()), "recover");
    std::cout << json_path << '\n';
    return 0;
}

json number_or_string(double v) {
    if (std::isfinite(v)) return v;
    return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

json certificate_json(const sr_certificate& c) {
    return json{{"noiseless", {{"rho", number_or_string(c.noiseless_rho)}, {"condition_met", c.noiseless_condition_met != 0}}},
                {"noisy",
                 {{"rho", number_or_string(c.noisy_rho)},
                  {"condition_met", c.noisy_condition_met != 0},
                  {"floor", number_or_string(c.noise_floor)}}}};
}

int cmd_rip(const Options& o) {
    sr_matrix* raw = nullptr;
    check(sr_matrix_read_csv(o.matrix.c_str(), &raw), "rip");
    MatrixPtr a(raw);
    auto delta = [&](std::size_t s) {
        double v = 0.0;
        if (o.sample > 0) check(sr_rip_sampled(a.get(), s, o.sample, o.seed, &v), "rip");
        else check(sr_rip_exact(a.get(), s, &v), "rip");
        return v;
    };
    json out{{"sparsity", o.sparsity}, {"method", o.sample > 0 ? "sampled" : "exact"}, {"delta_s", delta(o.sparsity)}};
    if (o.rip_eta) {
        const double d2s = delta(2 * o.sparsity);
        sr_certificate c{};
        check(sr_certify(d2s, *o.rip_eta, o.e_tilde.value_or(0.0), &c), "rip");
        out["eta"] = *o.rip_eta;
        out["delta_2s"] = d2s;
        out["certificates"] = certificate_json(c);
    }
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_certify(const Options& o) {
    sr_certificate c{};
    check(sr_certify(o.delta, o.eta, o.e_tilde.value_or(0.0), &c), "certify");
    json out{{"delta_2s", o.delta}, {"eta", o.eta}, {"certificates", certificate_json(c)}};
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_validate_moments(const Options& o) {
    std::vector<sr_moment_row> rows(o.eta_grid.size());
    sr_column_moments cols{};
    check(sr_validate_moments(o.m, o.d, o.eta_grid.data(), o.eta_grid.size(), o.draws, o.seed, o.workers, rows.data(),
                              &cols),
          "validate-moments");
    const std::string path = o.out.empty() ? "moments.csv" : o.out;
    check(sr_write_moments_csv(rows.data(), rows.size(), path.c_str()), "validate-moments");
    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, r.rel_err);
    json out{{"csv", path},
             {"max_rel_err", worst},
             {"mean_entry", cols.mean_entry},
             {"m_mean_entry_sq", cols.mean_entry_sq * static_cast<double>(o.m)},
             {"m_mean_inner_sq", cols.mean_inner_sq * static_cast<double>(o.m)},
             {"mean_col_norm4", cols.mean_col_norm4},
             {"predicted_col_norm4", 1.0 + 2.0 / static_cast<double>(o.m)}};
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_experiment(const std::string& name, const Options& o, bool snr_given) {
    const sr_experiment_kind kind = name == "phase-transition" ? SR_EXP_PHASE_TRANSITION
                                    : name == "noisy-error"    ? SR_EXP_NOISY_ERROR
                                    : name == "constant-compute" ? SR_EXP_CONSTANT_COMPUTE
                                                                 : SR_EXP_THRESHOLD_COMPARE;
    sr_experiment_spec spec = sr_experiment_spec_default(kind);
    std::vector<std::size_t> s_grid = o.sparsity_grid;
    if (s_grid.empty())
        for (std::size_t s = 10; s <= 60; s += 5) s_grid.push_back(s);
    std::vector<double> eta_grid = o.eta_grid;
    if (eta_grid.empty()) eta_grid = {0.25, 0.5, 1.0, 2.0};

    spec.m = o.m;
    spec.d = o.d;
    spec.sparsity_grid = s_grid.data();
    spec.n_sparsity = s_grid.size();
    spec.eta_grid = eta_grid.data();
    spec.n_eta = eta_grid.size();
    spec.trials_per_point = o.trials;
    spec.iters_iht = o.iters_iht;
    spec.iters_ilat = o.iters_ilat;
    spec.has_snr = snr_given ? 1 : 0;
    spec.snr_db = snr_given ? parse_snr(o.snr) : std::numeric_limits<double>::infinity();
    spec.base_seed = o.seed;
    if (const char* env = std::getenv("SPARSEREC_SEED"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (*end != '\0') throw CLI::ValidationError("SPARSEREC_SEED", std::string("not an integer: ") + env);
        spec.base_seed = v;
    }
    spec.success_rel_tol = o.success_tol;

    sr_experiment* raw = nullptr;
    check(sr_experiment_run(&spec, o.workers, &raw), name.c_str());
    ExperimentPtr e(raw);
    check(sr_experiment_write(e.get(), o.out.c_str()), name.c_str());
    std::cout << path_join(o.out, "summary.csv") << '\n';
    return 0;
}

int cmd_plot(const Options& o) {
    const sr_plot_kind kind = o.kind == "error" ? SR_PLOT_ERROR : o.kind == "ratio" ? SR_PLOT_RATIO : SR_PLOT_SUCCESS;
    check(sr_emit_plot(o.summary.c_str(), kind, o.out.c_str()), "plot");
    return 0;
}

void print_usage(const App& app, const CLI::App* failing) {
    const CLI::App* target = failing != nullptr ? failing : &app.root;
    std::cerr << target->help();
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    Options o;
    auto app = build_app(o);
    const CLI::App* selected = nullptr;
    try {
        args = inject_config(args);
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app->root.parse(reversed);
        for (CLI::App* sub : app->subs)
            if (sub->parsed()) selected = sub;
    } catch (const CLI::CallForHelp& e) {
        return app->root.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app->root.exit(e);
    } catch (const CLI::Error& e) {
        for (CLI::App* sub : app->subs)
            if (sub->parsed()) selected = sub;
        std::cerr << "error: " << e.what() << "\n\n";
        print_usage(*app, selected);
        return 1;
    }

    const std::string name = selected->get_name();
    try {
        if (name == "gen-matrix") return cmd_gen_matrix(o);
        if (name == "gen-problem") return cmd_gen_problem(o);
        if (name == "recover") return cmd_recover(o, selected->count("--sparsity") > 0);
        if (name == "rip") return cmd_rip(o);
        if (name == "certify") return cmd_certify(o);
        if (name == "validate-moments") return cmd_validate_moments(o);
        if (name == "plot") return cmd_plot(o);
        return cmd_experiment(name, o, selected->count("--snr") > 0);
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n\n";
        print_usage(*app, selected);
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
