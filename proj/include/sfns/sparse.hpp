#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "sfns/fe_space.hpp"

namespace sfns {

/// Square CSR matrix. The pattern is shared between matrices assembled on the
/// same FeSpace, so sums of such matrices reduce to sums of value arrays.
class CsrMatrix {
public:
    CsrMatrix() = default;
    /// Zero matrix on an existing pattern.
    explicit CsrMatrix(std::shared_ptr<const CsrPattern> pattern);
    /// Validates sorted, duplicate-free, in-range columns.
    CsrMatrix(std::vector<std::int64_t> row_ptr, std::vector<int> col, std::vector<double> values);

    static CsrMatrix identity(int n);
    /// Keeps the exact nonzeros of a row-major dense n-by-n matrix.
    static CsrMatrix from_dense(int n, std::span<const double> dense);

    int rows() const { return pattern_ ? pattern_->rows() : 0; }
    std::int64_t nnz() const { return static_cast<std::int64_t>(values_.size()); }

    const CsrPattern& pattern() const { return *pattern_; }
    const std::shared_ptr<const CsrPattern>& shared_pattern() const { return pattern_; }
    std::span<const std::int64_t> row_ptr() const { return pattern_->row_ptr; }
    std::span<const int> col() const { return pattern_->col; }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    /// Entry (i, j), zero when outside the pattern.
    double at(int i, int j) const;
    std::vector<double> diagonal() const;
    std::vector<double> to_dense() const;

    CsrMatrix& operator+=(const CsrMatrix& other);
    CsrMatrix& operator*=(double s);

private:
    std::shared_ptr<const CsrPattern> pattern_;
    std::vector<double> values_;
};

CsrMatrix operator+(CsrMatrix a, const CsrMatrix& b);

// Data-parallel kernels. Each OpenMP kernel has a serial twin used as the
// reference in tests and benchmarks.

/// y = A x, rows distributed over threads. Throws on dimension mismatch.
void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);
void spmv_serial(const CsrMatrix& a, std::span<const double> x, std::span<double> y);
Vector spmv(const CsrMatrix& a, std::span<const double> x);

/// Inner product summed in fixed-size blocks whose partials are combined in
/// block order, so the result does not depend on the thread count.
double dot(std::span<const double> a, std::span<const double> b);
double dot_serial(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

/// Applies D^{-1} for D = diag(A).
class JacobiPreconditioner {
public:
    /// Throws InvalidArgument naming the first zero diagonal entry.
    explicit JacobiPreconditioner(const CsrMatrix& a);

    void apply(std::span<const double> in, std::span<double> out) const;
    const std::vector<double>& inverse_diagonal() const { return inv_diag_; }

private:
    std::vector<double> inv_diag_;
};

JacobiPreconditioner jacobi_precondition(const CsrMatrix& a);

}  // namespace sfns
