#include "sparserec/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "sparserec/error.hpp"

namespace sparserec {

namespace {

void check_length(std::size_t expected, std::size_t got, const char* what) {
    if (expected != got) {
        std::ostringstream msg;
        msg << what << ": dimension mismatch (expected " << expected << ", got " << got << ")";
        fail(ErrorKind::DimensionMismatch, msg.str());
    }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {
    require(rows >= 1 && cols >= 1, "matrix dimensions must be at least 1x1");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    require(rows >= 1 && cols >= 1, "matrix dimensions must be at least 1x1");
    check_length(rows * cols, entries_.size(), "matrix entries");
    require(all_finite(entries_), "matrix entries must be finite");
}

Matrix Matrix::identity(std::size_t n) {
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
    return out;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
    Matrix out(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) out(i, i) = diag[i];
    return out;
}

Matrix Matrix::transposed() const {
    Matrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
    return out;
}

Vector matvec(const Matrix& m, std::span<const double> v) {
    check_length(m.cols(), v.size(), "matvec");
    Vector out(m.rows(), 0.0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto row = m.row(r);
        double acc = 0.0;
        for (std::size_t c = 0; c < row.size(); ++c) acc += row[c] * v[c];
        out[r] = acc;
    }
    return out;
}

Vector matvec_transposed(const Matrix& m, std::span<const double> v) {
    check_length(m.rows(), v.size(), "matvec_transposed");
    Vector out(m.cols(), 0.0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto row = m.row(r);
        const double scale = v[r];
        for (std::size_t c = 0; c < row.size(); ++c) out[c] += row[c] * scale;
    }
    return out;
}

Matrix gram(const Matrix& m) {
    const std::size_t n = m.cols();
    Matrix out(n, n);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto row = m.row(r);
        for (std::size_t i = 0; i < n; ++i) {
            const double ri = row[i];
            for (std::size_t j = i; j < n; ++j) out(i, j) += ri * row[j];
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) out(i, j) = out(j, i);
    return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
    check_length(a.size(), b.size(), "dot");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double norm2_sq(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return acc;
}

double norm2(std::span<const double> v) { return std::sqrt(norm2_sq(v)); }

double distance(std::span<const double> a, std::span<const double> b) {
    check_length(a.size(), b.size(), "distance");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        acc += diff * diff;
    }
    return std::sqrt(acc);
}

Vector add(std::span<const double> a, std::span<const double> b) { return axpy(a, 1.0, b); }

Vector subtract(std::span<const double> a, std::span<const double> b) {
    check_length(a.size(), b.size(), "subtract");
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

Vector scaled(std::span<const double> v, double factor) {
    Vector out(v.begin(), v.end());
    for (double& x : out) x *= factor;
    return out;
}

Vector axpy(std::span<const double> a, double factor, std::span<const double> b) {
    check_length(a.size(), b.size(), "axpy");
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + factor * b[i];
    return out;
}

std::size_t count_nonzeros(std::span<const double> v) {
    return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](double x) { return x != 0.0; }));
}

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double frobenius_norm_sq(const Matrix& m) { return norm2_sq(m.entries()); }

double operator_norm(const Matrix& m, double tol, std::size_t max_iters) {
    require(tol > 0.0, "operator_norm: tolerance must be positive");
    const std::size_t n = m.cols();
    Vector v(n, 1.0 / std::sqrt(static_cast<double>(n)));

    double lambda = 0.0;
    for (std::size_t iter = 1; iter <= max_iters; ++iter) {
        const Vector mv = matvec(m, v);
        // Rayleigh quotient of MᵀM at unit v.
        const double next = norm2_sq(mv);
        Vector w = matvec_transposed(m, mv);
        const double wnorm = norm2(w);
        if (wnorm == 0.0) return 0.0;
        for (double& x : w) x /= wnorm;
        v = std::move(w);
        if (iter > 1 && std::abs(next - lambda) <= tol * next) return std::sqrt(next);
        lambda = next;
    }
    std::ostringstream msg;
    msg.precision(17);
    msg << "operator_norm: power iteration did not converge in " << max_iters
        << " iterations (last Rayleigh quotient " << lambda << ")";
    fail(ErrorKind::NoConvergence, msg.str());
}

Vector symmetric_eigenvalues(const Matrix& symmetric, double tol, std::size_t max_sweeps) {
    require(symmetric.rows() == symmetric.cols(), "symmetric_eigenvalues: matrix must be square");
    const std::size_t n = symmetric.rows();
    Matrix a = symmetric;

    auto off_diagonal_sq = [&] {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) acc += a(i, j) * a(i, j);
        return acc;
    };
    const double scale = std::max(frobenius_norm_sq(a), 1e-300);

    for (std::size_t sweep = 0; sweep < max_sweeps && off_diagonal_sq() > tol * tol * scale; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }

    Vector eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

}  // namespace sparserec
