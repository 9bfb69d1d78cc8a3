#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sparserec {

using Vector = std::vector<double>;

// Dense row-major real matrix. Dimensions are fixed at construction.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::span<const double> diag);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return entries_.empty(); }

    double operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
    double& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const { return {entries_.data() + r * cols_, cols_}; }
    std::span<const double> entries() const noexcept { return entries_; }
    std::span<double> entries() noexcept { return entries_; }

    Matrix transposed() const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> entries_;
};

/// Mv with left-to-right accumulation per row.
Vector matvec(const Matrix& m, std::span<const double> v);

/// Mᵀv without forming the transpose.
Vector matvec_transposed(const Matrix& m, std::span<const double> v);

/// MᵀM (cols × cols, symmetric).
Matrix gram(const Matrix& m);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);
double norm2_sq(std::span<const double> v);
double distance(std::span<const double> a, std::span<const double> b);

Vector add(std::span<const double> a, std::span<const double> b);
Vector subtract(std::span<const double> a, std::span<const double> b);
Vector scaled(std::span<const double> v, double factor);
/// a + factor·b
Vector axpy(std::span<const double> a, double factor, std::span<const double> b);

std::size_t count_nonzeros(std::span<const double> v);
bool all_finite(std::span<const double> v);

double frobenius_norm_sq(const Matrix& m);

inline constexpr double kDefaultNormTolerance = 1e-10;
inline constexpr std::size_t kDefaultNormMaxIters = 10000;

/// Largest singular value by power iteration on MᵀM from the normalized
/// all-ones vector. Stops once the Rayleigh quotient changes by at most
/// `tol` relative; throws NoConvergence after `max_iters`.
double operator_norm(const Matrix& m, double tol = kDefaultNormTolerance,
                     std::size_t max_iters = kDefaultNormMaxIters);

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
Vector symmetric_eigenvalues(const Matrix& symmetric, double tol = 1e-14, std::size_t max_sweeps = 100);

}  // namespace sparserec
