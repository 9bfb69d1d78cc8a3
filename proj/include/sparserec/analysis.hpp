#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "sparserec/linalg.hpp"
#include "sparserec/thresholding.hpp"

namespace sparserec {

/// Upper limit on enumerated supports for exhaustive routines.
inline constexpr double kMaxEnumeratedSupports = 1e6;

/// C(n, k) in floating point (exact below 2^53).
double binomial(std::size_t n, std::size_t k);

/// Calls visit(indices) for every size-k subset of {0, …, n−1} in lexicographic order.
void for_each_combination(std::size_t n, std::size_t k, const std::function<void(std::span<const std::size_t>)>& visit);

// --- restricted isometry constants ---

/// max over supports Ω of |λ|_max(A_ΩᵀA_Ω − I). Exhaustive; throws
/// CombinatorialGuard when C(d, s) > 1e6.
double rip_constant_exact(const Matrix& a, std::size_t s);

/// Same spectral deviation maximized over `n_supports` distinct uniformly
/// drawn supports; a lower bound on δ_s. Falls back to exhaustive
/// enumeration when n_supports ≥ C(d, s).
double rip_constant_sampled(const Matrix& a, std::size_t s, std::size_t n_supports, std::uint64_t seed);

/// |λ|_max(A_ΩᵀA_Ω − I) for one support.
double support_deviation(const Matrix& gram_matrix, std::span<const std::size_t> support);

// --- convergence certificates ---

struct NoiselessCertificate {
    double rho;
    bool condition_met;
};

struct NoisyCertificate {
    double rho;
    bool condition_met;
    /// (2+8η)‖ẽ‖/(1−ρ), the fixed point of the error recurrence; +inf when ρ ≥ 1.
    double floor;
};

/// ρ = √δ_2s·(1 + √(1+4η²)); requires η ∈ [0, 1].
NoiselessCertificate noiseless_certificate(double delta_2s, double eta);

/// ρ = (2+2η)·√δ_2s; requires η ∈ [0, 1].
NoisyCertificate noisy_certificate(double delta_2s, double eta, double e_tilde_norm);

struct TheoryReport {
    std::map<std::size_t, double> delta_s;
    double eta = 0.0;
    double noiseless_rho = 0.0;
    bool noiseless_condition_met = false;
    double noisy_rho = 0.0;
    bool noisy_condition_met = false;
    double noise_floor_bound = 0.0;
};

/// Exact δ_1 … δ_2s of A plus both certificates at (η, ‖ẽ‖).
TheoryReport theory_report(const Matrix& a, std::size_t s, double eta, double e_tilde_norm);

// --- Gaussian moment predictions for A with i.i.d. N(0, 1/m) entries ---

/// E‖I − 2ηAᵀA‖_F² = 4d[((d+m+1)/m)η² − η + 1/4].
double expected_frob_residual(std::size_t m, std::size_t d, double eta);

/// E‖2ηAᵀA‖_F² = 4d·((d+m+1)/m)η².
double expected_frob_gram(std::size_t m, std::size_t d, double eta);

struct AvgCaseBound {
    /// 2·√(8((d+m+1)/m)η² − 4η + 1)
    double rho;
    /// m / (2(m+d+1)); rho < 2 strictly inside (0, upper).
    double eta_valid_upper;
    /// m / (4(m+d+1)); minimizer of rho over η.
    double eta_star;
};

AvgCaseBound avg_case_rho(std::size_t m, std::size_t d, double eta);

struct MomentPrediction {
    std::size_t m = 0;
    std::size_t d = 0;
    double eta = 0.0;
    double e_frob_residual = 0.0;
    double e_frob_gram = 0.0;
    double avg_case_rho = 0.0;
    double eta_valid_range_upper = 0.0;
};

MomentPrediction predict_moments(std::size_t m, std::size_t d, double eta);

struct MomentRow {
    double eta;
    double predicted_residual;
    double mc_residual;
    double predicted_gram;
    double mc_gram;
    /// max of the two relative errors
    double rel_err;
};

struct ColumnMoments {
    double mean_entry;
    double mean_entry_sq;
    /// mean of ⟨A_i, A_j⟩² over i ≠ j
    double mean_inner_sq;
    /// mean of ‖A_i‖₂⁴
    double mean_col_norm4;
};

struct MomentValidation {
    std::vector<MomentRow> rows;
    ColumnMoments columns;
    std::size_t draws = 0;
};

/// Monte Carlo estimates of the Frobenius moments from `draws` independent
/// N(0, 1/m) matrices (draw k uses seed + k), explicitly forming I − 2ηAᵀA
/// and 2ηAᵀA. Deterministic for any worker count.
MomentValidation validate_moments(std::size_t m, std::size_t d, std::span<const double> etas, std::size_t draws,
                                  std::uint64_t seed, std::size_t workers = 1);

// --- exhaustive oracles ---

/// argmin over size-s supports of ‖P_Ω z − target‖₂; the lexicographically
/// first support wins ties.
SupportSet oracle_nearest_sparse_to(std::span<const double> z, std::span<const double> target, std::size_t s);

struct L0Solution {
    Vector estimate;
    SupportSet support;
    double residual_norm = 0.0;
    std::size_t skipped_supports = 0;
};

/// Best s-sparse least-squares fit by enumerating every support (d ≤ 12).
/// Rank-deficient supports are skipped and counted.
L0Solution oracle_l0_recover(const Matrix& a, std::span<const double> y, std::size_t s);

}  // namespace sparserec
