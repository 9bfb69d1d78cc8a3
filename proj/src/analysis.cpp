#include "sparserec/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "sparserec/error.hpp"
#include "sparserec/parallel.hpp"
#include "sparserec/rng.hpp"
#include "sparserec/sensing.hpp"

namespace sparserec {

double binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0.0;
    k = std::min(k, n - k);
    double out = 1.0;
    for (std::size_t i = 1; i <= k; ++i) out = out * static_cast<double>(n - k + i) / static_cast<double>(i);
    return std::round(out);
}

void for_each_combination(std::size_t n, std::size_t k, const std::function<void(std::span<const std::size_t>)>& visit) {
    if (k > n) return;
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    while (true) {
        visit(idx);
        // Advance to the next subset in lexicographic order.
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

namespace {

void guard_enumeration(std::size_t d, std::size_t s, const char* where, const char* advice) {
    const double count = binomial(d, s);
    if (count > kMaxEnumeratedSupports) {
        std::ostringstream msg;
        msg << where << ": C(" << d << ", " << s << ") = " << count << " supports exceeds the enumeration limit of "
            << kMaxEnumeratedSupports << "; " << advice;
        fail(ErrorKind::CombinatorialGuard, msg.str());
    }
}

std::vector<std::size_t> sample_support(CounterRng& rng, std::size_t d, std::size_t s) {
    std::vector<std::size_t> idx(d);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < s; ++i) std::swap(idx[i], idx[i + static_cast<std::size_t>(rng.below(d - i))]);
    idx.resize(s);
    std::sort(idx.begin(), idx.end());
    return idx;
}

}  // namespace

double support_deviation(const Matrix& gram_matrix, std::span<const std::size_t> support) {
    const std::size_t k = support.size();
    if (k == 0) return 0.0;
    if (k == 1) return std::abs(gram_matrix(support[0], support[0]) - 1.0);
    Matrix sub(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) sub(i, j) = gram_matrix(support[i], support[j]) - (i == j ? 1.0 : 0.0);
    const Vector eig = symmetric_eigenvalues(sub);
    return std::max(std::abs(eig.front()), std::abs(eig.back()));
}

double rip_constant_exact(const Matrix& a, std::size_t s) {
    require(s <= a.cols(), "rip_constant_exact: sparsity exceeds column count");
    guard_enumeration(a.cols(), s, "rip_constant_exact", "use rip_constant_sampled for a lower bound");
    if (s == 0) return 0.0;
    const Matrix g = gram(a);
    double delta = 0.0;
    for_each_combination(a.cols(), s, [&](std::span<const std::size_t> support) {
        delta = std::max(delta, support_deviation(g, support));
    });
    return delta;
}

double rip_constant_sampled(const Matrix& a, std::size_t s, std::size_t n_supports, std::uint64_t seed) {
    require(n_supports >= 1, "rip_constant_sampled: n_supports must be at least 1");
    require(s <= a.cols(), "rip_constant_sampled: sparsity exceeds column count");
    if (s == 0) return 0.0;
    if (static_cast<double>(n_supports) >= binomial(a.cols(), s)) return rip_constant_exact(a, s);

    const Matrix g = gram(a);
    CounterRng rng(seed);
    std::set<std::vector<std::size_t>> seen;
    double delta = 0.0;
    while (seen.size() < n_supports) {
        auto support = sample_support(rng, a.cols(), s);
        if (!seen.insert(support).second) continue;
        delta = std::max(delta, support_deviation(g, support));
    }
    return delta;
}

NoiselessCertificate noiseless_certificate(double delta_2s, double eta) {
    require(delta_2s >= 0.0, "noiseless_certificate: delta_2s must be non-negative");
    require(eta >= 0.0 && eta <= 1.0, "noiseless_certificate: eta must lie in [0, 1]");
    const double rho = std::sqrt(delta_2s) * (1.0 + std::sqrt(1.0 + 4.0 * eta * eta));
    return {rho, rho < 1.0};
}

NoisyCertificate noisy_certificate(double delta_2s, double eta, double e_tilde_norm) {
    require(delta_2s >= 0.0, "noisy_certificate: delta_2s must be non-negative");
    require(eta >= 0.0 && eta <= 1.0, "noisy_certificate: eta must lie in [0, 1]");
    require(e_tilde_norm >= 0.0, "noisy_certificate: noise norm must be non-negative");
    const double rho = (2.0 + 2.0 * eta) * std::sqrt(delta_2s);
    const bool met = rho < 1.0;
    const double floor = met ? (2.0 + 8.0 * eta) * e_tilde_norm / (1.0 - rho) : std::numeric_limits<double>::infinity();
    return {rho, met, floor};
}

TheoryReport theory_report(const Matrix& a, std::size_t s, double eta, double e_tilde_norm) {
    require(s >= 1 && 2 * s <= a.cols(), "theory_report: need 1 <= s and 2s <= d");
    TheoryReport report;
    report.eta = eta;
    for (std::size_t k = 1; k <= 2 * s; ++k) report.delta_s[k] = rip_constant_exact(a, k);
    const double delta_2s = report.delta_s.at(2 * s);
    const auto clean = noiseless_certificate(delta_2s, eta);
    const auto noisy = noisy_certificate(delta_2s, eta, e_tilde_norm);
    report.noiseless_rho = clean.rho;
    report.noiseless_condition_met = clean.condition_met;
    report.noisy_rho = noisy.rho;
    report.noisy_condition_met = noisy.condition_met;
    report.noise_floor_bound = noisy.floor;
    return report;
}

namespace {

void check_moment_args(std::size_t m, std::size_t d, double eta) {
    require(m >= 1 && d >= 1, "moment formulas: m and d must be at least 1");
    require(eta >= 0.0, "moment formulas: eta must be non-negative");
}

double spread(std::size_t m, std::size_t d) {
    return static_cast<double>(d + m + 1) / static_cast<double>(m);
}

}  // namespace

double expected_frob_residual(std::size_t m, std::size_t d, double eta) {
    check_moment_args(m, d, eta);
    return 4.0 * static_cast<double>(d) * (spread(m, d) * eta * eta - eta + 0.25);
}

double expected_frob_gram(std::size_t m, std::size_t d, double eta) {
    check_moment_args(m, d, eta);
    return 4.0 * static_cast<double>(d) * spread(m, d) * eta * eta;
}

AvgCaseBound avg_case_rho(std::size_t m, std::size_t d, double eta) {
    check_moment_args(m, d, eta);
    const double c = spread(m, d);
    const double radicand = 8.0 * c * eta * eta - 4.0 * eta + 1.0;
    return {2.0 * std::sqrt(radicand), 1.0 / (2.0 * c), 1.0 / (4.0 * c)};
}

MomentPrediction predict_moments(std::size_t m, std::size_t d, double eta) {
    const auto bound = avg_case_rho(m, d, eta);
    return {m, d, eta, expected_frob_residual(m, d, eta), expected_frob_gram(m, d, eta), bound.rho,
            bound.eta_valid_upper};
}

MomentValidation validate_moments(std::size_t m, std::size_t d, std::span<const double> etas, std::size_t draws,
                                  std::uint64_t seed, std::size_t workers) {
    require(draws >= 1, "validate_moments: draws must be at least 1");
    require(!etas.empty(), "validate_moments: eta grid is empty");
    for (double eta : etas) check_moment_args(m, d, eta);

    const std::size_t n_eta = etas.size();
    // Per draw: [residual(η)…, gram(η)…, Σ entries, Σ entries², mean off-diagonal ⟨A_i,A_j⟩², mean ‖A_i‖⁴]
    const std::size_t width = 2 * n_eta + 4;
    std::vector<double> per_draw(draws * width);

    parallel_for(draws, workers, [&](std::size_t k) {
        const Matrix a = gaussian_matrix(m, d, VarianceMode::OneOverM, seed + k);
        const Matrix g = gram(a);
        double* slot = per_draw.data() + k * width;
        for (std::size_t e = 0; e < n_eta; ++e) {
            Matrix residual(d, d);
            Matrix scaled_gram(d, d);
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = 0; j < d; ++j) {
                    scaled_gram(i, j) = 2.0 * etas[e] * g(i, j);
                    residual(i, j) = (i == j ? 1.0 : 0.0) - scaled_gram(i, j);
                }
            }
            slot[e] = frobenius_norm_sq(residual);
            slot[n_eta + e] = frobenius_norm_sq(scaled_gram);
        }
        double sum = 0.0;
        double sum_sq = 0.0;
        for (double x : a.entries()) {
            sum += x;
            sum_sq += x * x;
        }
        double off = 0.0;
        double diag = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            diag += g(i, i) * g(i, i);
            for (std::size_t j = 0; j < d; ++j)
                if (i != j) off += g(i, j) * g(i, j);
        }
        slot[2 * n_eta] = sum;
        slot[2 * n_eta + 1] = sum_sq;
        slot[2 * n_eta + 2] = d > 1 ? off / static_cast<double>(d * (d - 1)) : 0.0;
        slot[2 * n_eta + 3] = diag / static_cast<double>(d);
    });

    std::vector<double> totals(width, 0.0);
    for (std::size_t k = 0; k < draws; ++k)
        for (std::size_t c = 0; c < width; ++c) totals[c] += per_draw[k * width + c];
    const double n = static_cast<double>(draws);
    const double entries = n * static_cast<double>(m * d);

    MomentValidation out;
    out.draws = draws;
    for (std::size_t e = 0; e < n_eta; ++e) {
        MomentRow row{};
        row.eta = etas[e];
        row.predicted_residual = expected_frob_residual(m, d, etas[e]);
        row.predicted_gram = expected_frob_gram(m, d, etas[e]);
        row.mc_residual = totals[e] / n;
        row.mc_gram = totals[n_eta + e] / n;
        const double err_residual = std::abs(row.mc_residual - row.predicted_residual) / row.predicted_residual;
        const double err_gram = row.predicted_gram > 0.0
                                    ? std::abs(row.mc_gram - row.predicted_gram) / row.predicted_gram
                                    : std::abs(row.mc_gram);
        row.rel_err = std::max(err_residual, err_gram);
        out.rows.push_back(row);
    }
    out.columns.mean_entry = totals[2 * n_eta] / entries;
    out.columns.mean_entry_sq = totals[2 * n_eta + 1] / entries;
    out.columns.mean_inner_sq = totals[2 * n_eta + 2] / n;
    out.columns.mean_col_norm4 = totals[2 * n_eta + 3] / n;
    return out;
}

SupportSet oracle_nearest_sparse_to(std::span<const double> z, std::span<const double> target, std::size_t s) {
    require(z.size() == target.size(), "oracle_nearest_sparse_to: z and target lengths differ");
    require(s <= z.size(), "oracle_nearest_sparse_to: sparsity exceeds dimension");
    guard_enumeration(z.size(), s, "oracle_nearest_sparse_to", "reduce the dimension");

    std::vector<std::size_t> best;
    double best_dist = std::numeric_limits<double>::infinity();
    for_each_combination(z.size(), s, [&](std::span<const std::size_t> support) {
        const SupportSet omega(std::vector<std::size_t>(support.begin(), support.end()), z.size());
        const double dist = distance(project(z, omega), target);
        if (dist < best_dist) {
            best_dist = dist;
            best.assign(support.begin(), support.end());
        }
    });
    return SupportSet(std::move(best), z.size());
}

namespace {

// Cholesky solve of the s×s normal equations; false if not positive definite
// to working precision.
bool solve_normal_equations(Matrix g, Vector rhs, Vector& solution) {
    const std::size_t k = g.rows();
    double trace = 0.0;
    for (std::size_t i = 0; i < k; ++i) trace += g(i, i);
    const double pivot_floor = 1e-12 * std::max(trace, 1e-300);
    for (std::size_t j = 0; j < k; ++j) {
        double diag = g(j, j);
        for (std::size_t p = 0; p < j; ++p) diag -= g(j, p) * g(j, p);
        if (!(diag > pivot_floor)) return false;
        g(j, j) = std::sqrt(diag);
        for (std::size_t i = j + 1; i < k; ++i) {
            double v = g(i, j);
            for (std::size_t p = 0; p < j; ++p) v -= g(i, p) * g(j, p);
            g(i, j) = v / g(j, j);
        }
    }
    for (std::size_t i = 0; i < k; ++i) {
        double v = rhs[i];
        for (std::size_t p = 0; p < i; ++p) v -= g(i, p) * rhs[p];
        rhs[i] = v / g(i, i);
    }
    for (std::size_t i = k; i-- > 0;) {
        double v = rhs[i];
        for (std::size_t p = i + 1; p < k; ++p) v -= g(p, i) * rhs[p];
        rhs[i] = v / g(i, i);
    }
    solution = std::move(rhs);
    return true;
}

}  // namespace

L0Solution oracle_l0_recover(const Matrix& a, std::span<const double> y, std::size_t s) {
    const std::size_t d = a.cols();
    require(d <= 12, "oracle_l0_recover: exhaustive search is limited to d <= 12");
    require(s <= d, "oracle_l0_recover: sparsity exceeds dimension");
    if (y.size() != a.rows())
        fail(ErrorKind::DimensionMismatch, "oracle_l0_recover: measurement length does not match matrix rows");

    L0Solution best;
    best.residual_norm = std::numeric_limits<double>::infinity();
    if (s == 0) {
        best.estimate = Vector(d, 0.0);
        best.support = SupportSet({}, d);
        best.residual_norm = norm2(y);
        return best;
    }

    const Matrix g = gram(a);
    const Vector aty = matvec_transposed(a, y);
    std::size_t skipped = 0;
    for_each_combination(d, s, [&](std::span<const std::size_t> support) {
        Matrix sub(s, s);
        Vector rhs(s);
        for (std::size_t i = 0; i < s; ++i) {
            rhs[i] = aty[support[i]];
            for (std::size_t j = 0; j < s; ++j) sub(i, j) = g(support[i], support[j]);
        }
        Vector coef;
        if (!solve_normal_equations(sub, rhs, coef)) {
            ++skipped;
            return;
        }
        Vector x(d, 0.0);
        for (std::size_t i = 0; i < s; ++i) x[support[i]] = coef[i];
        const double res = norm2(subtract(y, matvec(a, x)));
        if (res < best.residual_norm) {
            best.residual_norm = res;
            best.estimate = std::move(x);
            best.support = SupportSet(std::vector<std::size_t>(support.begin(), support.end()), d);
        }
    });
    best.skipped_supports = skipped;
    if (best.estimate.empty())
        fail(ErrorKind::InvalidArgument, "oracle_l0_recover: every support was rank deficient");
    return best;
}

}  // namespace sparserec
