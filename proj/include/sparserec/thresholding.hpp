#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sparserec/linalg.hpp"

namespace sparserec {

// Sorted, duplicate-free coordinate indices in {0, …, d−1}.
class SupportSet {
public:
    SupportSet() = default;
    SupportSet(std::vector<std::size_t> indices, std::size_t ambient_dim);

    static SupportSet full(std::size_t d);
    /// Indices of the nonzero entries of v.
    static SupportSet of_nonzeros(std::span<const double> v);

    const std::vector<std::size_t>& indices() const noexcept { return indices_; }
    std::size_t ambient_dim() const noexcept { return ambient_dim_; }
    std::size_t size() const noexcept { return indices_.size(); }
    bool contains(std::size_t i) const;

    friend bool operator==(const SupportSet&, const SupportSet&) = default;

private:
    std::vector<std::size_t> indices_;
    std::size_t ambient_dim_ = 0;
};

struct Thresholded {
    Vector values;
    SupportSet support;
};

/// Indices of the s largest scores; ties go to the lower index.
SupportSet top_s(std::span<const double> scores, std::size_t s);

/// Agrees with z on support, zero elsewhere.
Vector project(std::span<const double> z, const SupportSet& support);

/// H_s: keep the s largest-magnitude entries (lowest index wins ties).
Thresholded hard_threshold(std::span<const double> z, std::size_t s);

/// ∇C(z) = −2Aᵀ(y − Az) for C(z) = ‖y − Az‖².
Vector cost_gradient(const Matrix& a, std::span<const double> y, std::span<const double> z);

/// ℓ_η = z − η·∇C(z).
Vector look_ahead_point(std::span<const double> z, std::span<const double> grad, double eta);

struct LatScores {
    Vector scores;
    Vector gradient;
    double eta = 0.0;
};

/// score_i = z_i² − 2η·z_i·g_i. Larger is better.
LatScores lat_scores(std::span<const double> z, std::span<const double> grad, double eta);

/// Look-ahead thresholding H_{s,η}(z) with a caller-supplied ∇C(z).
Thresholded lat_threshold_with_gradient(std::span<const double> z, std::span<const double> grad, std::size_t s,
                                        double eta);

/// Look-ahead thresholding H_{s,η}(z); evaluates ∇C(z) from (A, y).
Thresholded lat_threshold(std::span<const double> z, const Matrix& a, std::span<const double> y, std::size_t s,
                          double eta);

}  // namespace sparserec
