#include "sparserec/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <tuple>

#include <json.hpp>

#include "sparserec/error.hpp"
#include "sparserec/io.hpp"
#include "sparserec/parallel.hpp"
#include "sparserec/recovery.hpp"
#include "sparserec/rng.hpp"
#include "sparserec/sensing.hpp"
#include "sparserec/thresholding.hpp"

namespace sparserec {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(ExperimentKind kind) noexcept {
    switch (kind) {
        case ExperimentKind::PhaseTransition: return "phase-transition";
        case ExperimentKind::NoisyError: return "noisy-error";
        case ExperimentKind::ConstantCompute: return "constant-compute";
        case ExperimentKind::ThresholdCompare: return "threshold-compare";
    }
    return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
    for (auto kind : {ExperimentKind::PhaseTransition, ExperimentKind::NoisyError, ExperimentKind::ConstantCompute,
                      ExperimentKind::ThresholdCompare})
        if (to_string(kind) == name) return kind;
    fail(ErrorKind::InvalidArgument, "unknown experiment kind '" + std::string(name) + "'");
}

std::string_view to_string(Method method) noexcept {
    switch (method) {
        case Method::Iht: return "iht";
        case Method::Ilat: return "ilat";
        case Method::Hard: return "hard";
        case Method::Lat: return "lat";
    }
    return "unknown";
}

namespace {

Method parse_method(std::string_view name) {
    for (auto m : {Method::Iht, Method::Ilat, Method::Hard, Method::Lat})
        if (to_string(m) == name) return m;
    fail(ErrorKind::Parse, "unknown algorithm label '" + std::string(name) + "'");
}

constexpr double kNoEta = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

bool is_baseline(Method method) noexcept { return method == Method::Iht || method == Method::Hard; }

void validate(const ExperimentSpec& spec) {
    require(spec.m >= 1 && spec.d >= 1, "experiment: m and d must be at least 1");
    require(!spec.sparsity_grid.empty(), "experiment: sparsity grid is empty");
    require(!spec.eta_grid.empty(), "experiment: eta grid is empty");
    require(spec.trials_per_point >= 1, "experiment: trials_per_point must be at least 1");
    require(spec.success_rel_tol > 0.0, "experiment: success_rel_tol must be positive");
    for (std::size_t s : spec.sparsity_grid)
        require(s >= 1 && s <= spec.d, "experiment: sparsity grid entries must lie in [1, d]");
    for (double eta : spec.eta_grid) require(eta >= 0.0 && std::isfinite(eta), "experiment: eta must be >= 0");
    if (spec.kind != ExperimentKind::ThresholdCompare)
        require(spec.iters_iht >= 1 && spec.iters_ilat >= 1, "experiment: iteration budgets must be at least 1");
    if (spec.kind == ExperimentKind::NoisyError)
        require(spec.snr_db.has_value() && !std::isnan(*spec.snr_db) &&
                    *spec.snr_db != -std::numeric_limits<double>::infinity(),
                "noisy-error: snr_db is required");
    if (spec.kind == ExperimentKind::ConstantCompute)
        require(spec.iters_iht == 2 * spec.iters_ilat,
                "constant-compute: iters_iht must be exactly twice iters_ilat (got " + std::to_string(spec.iters_iht) +
                    " and " + std::to_string(spec.iters_ilat) + ")");
}

bool same_outcome(const TrialRecord& a, const TrialRecord& b) {
    auto same_double = [](double x, double y) { return (std::isnan(x) && std::isnan(y)) || x == y; };
    return a.trial == b.trial && a.seed == b.seed && a.s == b.s && same_double(a.eta, b.eta) &&
           a.algorithm == b.algorithm && a.iterations == b.iterations &&
           a.gradient_evaluations == b.gradient_evaluations && a.success == b.success &&
           same_double(a.rel_error, b.rel_error) && a.threshold_ratio.has_value() == b.threshold_ratio.has_value() &&
           (!a.threshold_ratio || same_double(*a.threshold_ratio, *b.threshold_ratio));
}

std::uint64_t trial_seed(const ExperimentSpec& spec, std::size_t ordinal) noexcept {
    return spec.base_seed + static_cast<std::uint64_t>(ordinal);
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::vector<TrialRecord> recovery_unit(const ExperimentSpec& spec, std::size_t ordinal) {
    const std::size_t s = spec.sparsity_grid[ordinal / spec.trials_per_point];
    const std::uint64_t seed = trial_seed(spec, ordinal);
    const double snr = spec.kind == ExperimentKind::NoisyError ? *spec.snr_db : kNoiselessSnr;
    const SensingProblem problem = generate_problem({spec.m, spec.d, s, snr, seed, Normalization::OperatorNormOne});

    std::vector<TrialRecord> out;
    auto run = [&](Method method, double eta) {
        RecoveryConfig config;
        config.algorithm = method == Method::Iht ? Algorithm::Iht : Algorithm::Ilat;
        config.eta = std::isnan(eta) ? 0.0 : eta;
        config.sparsity = s;
        config.max_iters = method == Method::Iht ? spec.iters_iht : spec.iters_ilat;

        const auto start = Clock::now();
        const RecoveryResult result = recover(problem, config);
        TrialRecord rec;
        rec.runtime_ms = elapsed_ms(start);
        rec.trial = ordinal;
        rec.seed = seed;
        rec.s = s;
        rec.eta = eta;
        rec.algorithm = method;
        rec.iterations = result.iterations_run;
        rec.gradient_evaluations = result.gradient_evaluations;
        rec.rel_error = result.status == RecoveryStatus::Diverged
                            ? kInf
                            : relative_error(result.estimate, *problem.ground_truth);
        rec.success = rec.rel_error <= spec.success_rel_tol;
        out.push_back(rec);
    };
    run(Method::Iht, kNoEta);
    for (double eta : spec.eta_grid) run(Method::Ilat, eta);
    return out;
}

std::vector<TrialRecord> threshold_unit(const ExperimentSpec& spec, std::size_t ordinal) {
    const std::size_t s = spec.sparsity_grid[ordinal / spec.trials_per_point];
    const std::uint64_t seed = trial_seed(spec, ordinal);

    const Vector truth = random_sparse_signal(spec.d, s, derive_seed(seed, static_cast<std::uint64_t>(Stream::Signal)));
    Vector z(spec.d);
    CounterRng dense(derive_seed(seed, static_cast<std::uint64_t>(Stream::Dense)));
    for (double& v : z) v = dense.normal();
    const Matrix a = normalize_operator_norm(
        gaussian_matrix(spec.m, spec.d, VarianceMode::Unit, derive_seed(seed, static_cast<std::uint64_t>(Stream::Matrix))));
    const Vector y = matvec(a, truth);
    const double base = distance(z, truth);
    const double truth_norm = norm2(truth);

    std::vector<TrialRecord> out;
    auto record = [&](Method method, double eta, std::size_t grads, const Vector& thresholded, double ms) {
        TrialRecord rec;
        rec.trial = ordinal;
        rec.seed = seed;
        rec.s = s;
        rec.eta = eta;
        rec.algorithm = method;
        rec.gradient_evaluations = grads;
        const double err = distance(thresholded, truth);
        rec.rel_error = err / truth_norm;
        rec.success = rec.rel_error <= spec.success_rel_tol;
        rec.threshold_ratio = err / base;
        rec.runtime_ms = ms;
        out.push_back(rec);
    };

    auto start = Clock::now();
    const Thresholded hard = hard_threshold(z, s);
    record(Method::Hard, kNoEta, 0, hard.values, elapsed_ms(start));

    start = Clock::now();
    const Vector grad = cost_gradient(a, y, z);
    const double grad_ms = elapsed_ms(start);
    for (double eta : spec.eta_grid) {
        start = Clock::now();
        const Thresholded lat = lat_threshold_with_gradient(z, grad, s, eta);
        record(Method::Lat, eta, 1, lat.values, grad_ms + elapsed_ms(start));
    }
    return out;
}

template <class Unit>
std::vector<TrialRecord> run_units(const ExperimentSpec& spec, std::size_t workers, Unit unit) {
    const std::size_t n_units = spec.sparsity_grid.size() * spec.trials_per_point;
    std::vector<std::vector<TrialRecord>> slots(n_units);
    parallel_for(n_units, workers, [&](std::size_t u) { slots[u] = unit(spec, u); });
    std::vector<TrialRecord> out;
    for (auto& slot : slots) out.insert(out.end(), slot.begin(), slot.end());
    return out;
}

void require_kind(const ExperimentSpec& spec, ExperimentKind kind) {
    require(spec.kind == kind, "experiment kind mismatch: spec is " + std::string(to_string(spec.kind)) +
                                   ", expected " + std::string(to_string(kind)));
    validate(spec);
}

}  // namespace

std::vector<TrialRecord> run_phase_transition(const ExperimentSpec& spec, std::size_t workers) {
    require_kind(spec, ExperimentKind::PhaseTransition);
    return run_units(spec, workers, recovery_unit);
}

std::vector<TrialRecord> run_noisy_error(const ExperimentSpec& spec, std::size_t workers) {
    require_kind(spec, ExperimentKind::NoisyError);
    return run_units(spec, workers, recovery_unit);
}

std::vector<TrialRecord> run_constant_compute(const ExperimentSpec& spec, std::size_t workers) {
    require_kind(spec, ExperimentKind::ConstantCompute);
    return run_units(spec, workers, recovery_unit);
}

std::vector<TrialRecord> run_threshold_compare(const ExperimentSpec& spec, std::size_t workers) {
    require_kind(spec, ExperimentKind::ThresholdCompare);
    return run_units(spec, workers, threshold_unit);
}

std::vector<TrialRecord> run_experiment(const ExperimentSpec& spec, std::size_t workers) {
    switch (spec.kind) {
        case ExperimentKind::PhaseTransition: return run_phase_transition(spec, workers);
        case ExperimentKind::NoisyError: return run_noisy_error(spec, workers);
        case ExperimentKind::ConstantCompute: return run_constant_compute(spec, workers);
        case ExperimentKind::ThresholdCompare: return run_threshold_compare(spec, workers);
    }
    fail(ErrorKind::InvalidArgument, "unknown experiment kind");
}

namespace {

// NaN-aware total order on η so baselines sort first.
struct EtaKey {
    double value;
    friend bool operator<(const EtaKey& a, const EtaKey& b) {
        if (std::isnan(a.value)) return !std::isnan(b.value);
        if (std::isnan(b.value)) return false;
        return a.value < b.value;
    }
};

Stat summarize(const std::vector<double>& values) {
    Stat st;
    st.count = values.size();
    if (values.empty()) {
        st.mean = std::numeric_limits<double>::quiet_NaN();
        st.stddev = std::numeric_limits<double>::quiet_NaN();
        return st;
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    st.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1 && std::isfinite(st.mean)) {
        double sq = 0.0;
        for (double v : values) sq += (v - st.mean) * (v - st.mean);
        st.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
    } else if (values.size() > 1) {
        st.stddev = std::numeric_limits<double>::quiet_NaN();
    }
    return st;
}

bool has_key(const std::vector<GroupKey>& keys, GroupKey key) {
    return std::find(keys.begin(), keys.end(), key) != keys.end();
}

}  // namespace

std::vector<SummaryRow> aggregate(const std::vector<TrialRecord>& records, const std::vector<GroupKey>& keys) {
    require(!records.empty(), "aggregate: no records");
    const bool by_s = has_key(keys, GroupKey::S);
    const bool by_alg = has_key(keys, GroupKey::Algorithm);
    const bool by_eta = has_key(keys, GroupKey::Eta);

    using Key = std::tuple<std::size_t, int, EtaKey>;
    struct Bucket {
        std::vector<double> success, rel_error, ratio;
    };
    std::map<Key, Bucket> groups;
    for (const auto& r : records) {
        const Key key{by_s ? r.s : 0, by_alg ? static_cast<int>(r.algorithm) : 0,
                      EtaKey{by_eta ? r.eta : 0.0}};
        auto& b = groups[key];
        b.success.push_back(r.success ? 1.0 : 0.0);
        b.rel_error.push_back(r.rel_error);
        if (r.threshold_ratio) b.ratio.push_back(*r.threshold_ratio);
    }

    std::vector<SummaryRow> rows;
    for (auto& [key, bucket] : groups) {
        // Sum order must not depend on input order.
        std::sort(bucket.success.begin(), bucket.success.end());
        std::sort(bucket.rel_error.begin(), bucket.rel_error.end());
        std::sort(bucket.ratio.begin(), bucket.ratio.end());
        SummaryRow row;
        if (by_s) row.s = std::get<0>(key);
        if (by_alg) row.algorithm = static_cast<Method>(std::get<1>(key));
        if (by_eta) row.eta = std::get<2>(key).value;
        row.count = bucket.success.size();
        row.success = summarize(bucket.success);
        row.rel_error = summarize(bucket.rel_error);
        row.threshold_ratio = summarize(bucket.ratio);
        rows.push_back(row);
    }
    return rows;
}

const SummaryRow* find_row(const std::vector<SummaryRow>& rows, std::size_t s, Method algorithm, double eta) {
    for (const auto& row : rows) {
        if (row.s != s || row.algorithm != algorithm || !row.eta) continue;
        if ((std::isnan(eta) && std::isnan(*row.eta)) || *row.eta == eta) return &row;
    }
    return nullptr;
}

namespace {

std::ofstream open_csv(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) fail(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
    return out;
}

std::string format_eta(double eta) { return std::isnan(eta) ? "none" : format_double(eta); }

}  // namespace

void write_results_csv(const std::vector<TrialRecord>& records, const fs::path& path) {
    auto out = open_csv(path);
    out << "trial,seed,s,eta,algorithm,iterations,grad_evals,success,rel_error,threshold_ratio,runtime_ms\n";
    for (const auto& r : records) {
        out << r.trial << ',' << r.seed << ',' << r.s << ',' << format_eta(r.eta) << ',' << to_string(r.algorithm) << ','
            << r.iterations << ',' << r.gradient_evaluations << ',' << (r.success ? 1 : 0) << ','
            << format_double(r.rel_error) << ',' << (r.threshold_ratio ? format_double(*r.threshold_ratio) : "") << ','
            << format_double(r.runtime_ms) << '\n';
    }
    if (!out) fail(ErrorKind::Io, "failed writing '" + path.string() + "'");
}

void write_summary_csv(const std::vector<SummaryRow>& rows, const std::vector<GroupKey>& keys, const fs::path& path) {
    auto out = open_csv(path);
    const bool by_s = has_key(keys, GroupKey::S);
    const bool by_alg = has_key(keys, GroupKey::Algorithm);
    const bool by_eta = has_key(keys, GroupKey::Eta);
    if (by_s) out << "s,";
    if (by_alg) out << "algorithm,";
    if (by_eta) out << "eta,";
    out << "count,success_mean,success_std,rel_error_mean,rel_error_std,threshold_ratio_mean,threshold_ratio_std\n";
    for (const auto& row : rows) {
        if (by_s) out << *row.s << ',';
        if (by_alg) out << to_string(*row.algorithm) << ',';
        if (by_eta) out << format_eta(*row.eta) << ',';
        out << row.count << ',' << format_double(row.success.mean) << ',' << format_double(row.success.stddev) << ','
            << format_double(row.rel_error.mean) << ',' << format_double(row.rel_error.stddev) << ','
            << format_double(row.threshold_ratio.mean) << ',' << format_double(row.threshold_ratio.stddev) << '\n';
    }
    if (!out) fail(ErrorKind::Io, "failed writing '" + path.string() + "'");
}

void write_spec_json(const ExperimentSpec& spec, const fs::path& path) {
    json j;
    j["kind"] = std::string(to_string(spec.kind));
    j["m"] = spec.m;
    j["d"] = spec.d;
    j["sparsity_grid"] = spec.sparsity_grid;
    j["eta_grid"] = spec.eta_grid;
    j["trials_per_point"] = spec.trials_per_point;
    j["iters_iht"] = spec.iters_iht;
    j["iters_ilat"] = spec.iters_ilat;
    if (spec.snr_db)
        j["snr_db"] = std::isinf(*spec.snr_db) ? json("inf") : json(*spec.snr_db);
    else
        j["snr_db"] = nullptr;
    j["base_seed"] = spec.base_seed;
    j["success_rel_tol"] = spec.success_rel_tol;
    auto out = open_csv(path);
    out << j.dump(2) << '\n';
}

ExperimentSpec read_spec_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open '" + path.string() + "' for reading");
    try {
        const json j = json::parse(in);
        ExperimentSpec spec;
        spec.kind = parse_experiment_kind(j.at("kind").get<std::string>());
        spec.m = j.at("m").get<std::size_t>();
        spec.d = j.at("d").get<std::size_t>();
        spec.sparsity_grid = j.at("sparsity_grid").get<std::vector<std::size_t>>();
        spec.eta_grid = j.at("eta_grid").get<std::vector<double>>();
        spec.trials_per_point = j.at("trials_per_point").get<std::size_t>();
        spec.iters_iht = j.at("iters_iht").get<std::size_t>();
        spec.iters_ilat = j.at("iters_ilat").get<std::size_t>();
        const json& snr = j.at("snr_db");
        if (snr.is_string() && snr.get<std::string>() == "inf")
            spec.snr_db = std::numeric_limits<double>::infinity();
        else if (!snr.is_null())
            spec.snr_db = snr.get<double>();
        spec.base_seed = j.at("base_seed").get<std::uint64_t>();
        spec.success_rel_tol = j.at("success_rel_tol").get<double>();
        return spec;
    } catch (const json::exception& e) {
        fail(ErrorKind::Parse, path.string() + ": " + e.what());
    }
}

void write_experiment(const ExperimentSpec& spec, const std::vector<TrialRecord>& records, const fs::path& dir) {
    fs::create_directories(dir);
    const std::vector<GroupKey> keys{GroupKey::S, GroupKey::Algorithm, GroupKey::Eta};
    write_results_csv(records, dir / "results.csv");
    write_summary_csv(aggregate(records, keys), keys, dir / "summary.csv");
    write_spec_json(spec, dir / "spec.json");
}

}  // namespace sparserec
