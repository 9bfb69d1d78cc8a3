#include "sparserec/thresholding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "sparserec/error.hpp"

namespace sparserec {

namespace {

void check_sparsity(std::size_t s, std::size_t d, const char* where) {
    if (s > d) {
        std::ostringstream msg;
        msg << where << ": sparsity " << s << " exceeds dimension " << d;
        fail(ErrorKind::InvalidArgument, msg.str());
    }
}

void check_same_length(std::size_t a, std::size_t b, const char* where) {
    if (a != b) {
        std::ostringstream msg;
        msg << where << ": dimension mismatch (" << a << " vs " << b << ")";
        fail(ErrorKind::DimensionMismatch, msg.str());
    }
}

}  // namespace

SupportSet::SupportSet(std::vector<std::size_t> indices, std::size_t ambient_dim)
    : indices_(std::move(indices)), ambient_dim_(ambient_dim) {
    std::sort(indices_.begin(), indices_.end());
    require(std::adjacent_find(indices_.begin(), indices_.end()) == indices_.end(),
            "SupportSet: duplicate index");
    require(indices_.empty() || indices_.back() < ambient_dim_, "SupportSet: index out of range");
}

SupportSet SupportSet::full(std::size_t d) {
    std::vector<std::size_t> idx(d);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return SupportSet(std::move(idx), d);
}

SupportSet SupportSet::of_nonzeros(std::span<const double> v) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0.0) idx.push_back(i);
    return SupportSet(std::move(idx), v.size());
}

bool SupportSet::contains(std::size_t i) const { return std::binary_search(indices_.begin(), indices_.end(), i); }

SupportSet top_s(std::span<const double> scores, std::size_t s) {
    const std::size_t d = scores.size();
    check_sparsity(s, d, "top_s");
    std::vector<std::size_t> idx(d);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    auto better = [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    };
    std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(s), idx.end(), better);
    idx.resize(s);
    return SupportSet(std::move(idx), d);
}

Vector project(std::span<const double> z, const SupportSet& support) {
    check_same_length(support.ambient_dim(), z.size(), "project");
    Vector out(z.size(), 0.0);
    for (std::size_t i : support.indices()) out[i] = z[i];
    return out;
}

Thresholded hard_threshold(std::span<const double> z, std::size_t s) {
    check_sparsity(s, z.size(), "hard_threshold");
    Vector magnitude(z.size());
    std::transform(z.begin(), z.end(), magnitude.begin(), [](double x) { return std::abs(x); });
    SupportSet support = top_s(magnitude, s);
    Vector values = project(z, support);
    return {std::move(values), std::move(support)};
}

Vector cost_gradient(const Matrix& a, std::span<const double> y, std::span<const double> z) {
    check_same_length(a.rows(), y.size(), "cost_gradient");
    const Vector residual = subtract(y, matvec(a, z));
    return scaled(matvec_transposed(a, residual), -2.0);
}

Vector look_ahead_point(std::span<const double> z, std::span<const double> grad, double eta) {
    check_same_length(z.size(), grad.size(), "look_ahead_point");
    return axpy(z, -eta, grad);
}

LatScores lat_scores(std::span<const double> z, std::span<const double> grad, double eta) {
    check_same_length(z.size(), grad.size(), "lat_scores");
    require(eta >= 0.0, "lat_scores: eta must be non-negative");
    LatScores out{Vector(z.size()), Vector(grad.begin(), grad.end()), eta};
    for (std::size_t i = 0; i < z.size(); ++i) out.scores[i] = z[i] * z[i] - 2.0 * eta * z[i] * grad[i];
    return out;
}

Thresholded lat_threshold_with_gradient(std::span<const double> z, std::span<const double> grad, std::size_t s,
                                        double eta) {
    check_sparsity(s, z.size(), "lat_threshold");
    const LatScores scores = lat_scores(z, grad, eta);
    SupportSet support = top_s(scores.scores, s);
    Vector values = project(z, support);
    return {std::move(values), std::move(support)};
}

Thresholded lat_threshold(std::span<const double> z, const Matrix& a, std::span<const double> y, std::size_t s,
                          double eta) {
    check_sparsity(s, z.size(), "lat_threshold");
    return lat_threshold_with_gradient(z, cost_gradient(a, y, z), s, eta);
}

}  // namespace sparserec
