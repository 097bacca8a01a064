#include "sfns/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sfns/error.hpp"

namespace sfns {

namespace {

constexpr std::size_t kDotBlock = 2048;

void check_spmv_dims(const CsrMatrix& a, std::size_t nx, std::size_t ny) {
    if (static_cast<std::size_t>(a.rows()) != nx || static_cast<std::size_t>(a.rows()) != ny) {
        throw InvalidArgument("spmv: dimension mismatch (matrix " + std::to_string(a.rows()) + ", x " +
                              std::to_string(nx) + ", y " + std::to_string(ny) + ")");
    }
}

}  // namespace

CsrMatrix::CsrMatrix(std::shared_ptr<const CsrPattern> pattern)
    : pattern_(std::move(pattern)), values_(static_cast<std::size_t>(pattern_->nnz()), 0.0) {}

CsrMatrix::CsrMatrix(std::vector<std::int64_t> row_ptr, std::vector<int> col, std::vector<double> values) {
    if (row_ptr.empty() || row_ptr.front() != 0 || static_cast<std::size_t>(row_ptr.back()) != col.size() ||
        col.size() != values.size()) {
        throw InvalidArgument("CsrMatrix: inconsistent array sizes");
    }
    const int n = static_cast<int>(row_ptr.size()) - 1;
    for (int i = 0; i < n; ++i) {
        if (row_ptr[i + 1] < row_ptr[i]) throw InvalidArgument("CsrMatrix: row pointers must be nondecreasing");
        for (auto k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
            if (col[k] < 0 || col[k] >= n) throw InvalidArgument("CsrMatrix: column index out of range");
            if (k > row_ptr[i] && col[k] <= col[k - 1]) {
                throw InvalidArgument("CsrMatrix: columns must be strictly increasing within row " +
                                      std::to_string(i));
            }
        }
    }
    auto p = std::make_shared<CsrPattern>();
    p->row_ptr = std::move(row_ptr);
    p->col = std::move(col);
    pattern_ = std::move(p);
    values_ = std::move(values);
}

CsrMatrix CsrMatrix::identity(int n) {
    std::vector<std::int64_t> rp(n + 1);
    std::vector<int> col(n);
    for (int i = 0; i < n; ++i) {
        rp[i + 1] = i + 1;
        col[i] = i;
    }
    return CsrMatrix(std::move(rp), std::move(col), std::vector<double>(n, 1.0));
}

CsrMatrix CsrMatrix::from_dense(int n, std::span<const double> dense) {
    if (dense.size() != static_cast<std::size_t>(n) * n) throw InvalidArgument("from_dense: size mismatch");
    std::vector<std::int64_t> rp(n + 1, 0);
    std::vector<int> col;
    std::vector<double> val;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double v = dense[static_cast<std::size_t>(i) * n + j];
            if (v != 0.0) {
                col.push_back(j);
                val.push_back(v);
            }
        }
        rp[i + 1] = static_cast<std::int64_t>(col.size());
    }
    return CsrMatrix(std::move(rp), std::move(col), std::move(val));
}

double CsrMatrix::at(int i, int j) const {
    const auto begin = pattern_->col.begin() + pattern_->row_ptr[i];
    const auto end = pattern_->col.begin() + pattern_->row_ptr[i + 1];
    const auto it = std::lower_bound(begin, end, j);
    if (it == end || *it != j) return 0.0;
    return values_[it - pattern_->col.begin()];
}

std::vector<double> CsrMatrix::diagonal() const {
    std::vector<double> d(rows(), 0.0);
    for (int i = 0; i < rows(); ++i) d[i] = at(i, i);
    return d;
}

std::vector<double> CsrMatrix::to_dense() const {
    const int n = rows();
    std::vector<double> dense(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (auto k = pattern_->row_ptr[i]; k < pattern_->row_ptr[i + 1]; ++k) {
            dense[static_cast<std::size_t>(i) * n + pattern_->col[k]] = values_[k];
        }
    }
    return dense;
}

CsrMatrix& CsrMatrix::operator+=(const CsrMatrix& other) {
    if (pattern_ != other.pattern_ &&
        (pattern_->row_ptr != other.pattern_->row_ptr || pattern_->col != other.pattern_->col)) {
        throw InvalidArgument("CsrMatrix: sum requires identical sparsity patterns");
    }
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
    return *this;
}

CsrMatrix& CsrMatrix::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

CsrMatrix operator+(CsrMatrix a, const CsrMatrix& b) {
    a += b;
    return a;
}

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
    check_spmv_dims(a, x.size(), y.size());
    const auto rp = a.row_ptr();
    const auto col = a.col();
    const auto val = a.values();
    const int n = a.rows();
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        double sum = 0.0;
        for (auto k = rp[i]; k < rp[i + 1]; ++k) sum += val[k] * x[col[k]];
        y[i] = sum;
    }
}

void spmv_serial(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
    check_spmv_dims(a, x.size(), y.size());
    const auto rp = a.row_ptr();
    const auto col = a.col();
    const auto val = a.values();
    for (int i = 0; i < a.rows(); ++i) {
        double sum = 0.0;
        for (auto k = rp[i]; k < rp[i + 1]; ++k) sum += val[k] * x[col[k]];
        y[i] = sum;
    }
}

Vector spmv(const CsrMatrix& a, std::span<const double> x) {
    Vector y(a.rows());
    spmv(a, x, y);
    return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw InvalidArgument("dot: length mismatch");
    const std::size_t n = a.size();
    const std::size_t blocks = (n + kDotBlock - 1) / kDotBlock;
    if (blocks <= 1) return dot_serial(a, b);
    std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::size_t blk = 0; blk < blocks; ++blk) {
        const std::size_t lo = blk * kDotBlock;
        const std::size_t hi = std::min(n, lo + kDotBlock);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
        partial[blk] = s;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

double dot_serial(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw InvalidArgument("dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) {
    return std::sqrt(dot(a, a));
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    if (x.size() != y.size()) throw InvalidArgument("axpy: length mismatch");
    const std::size_t n = x.size();
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

JacobiPreconditioner::JacobiPreconditioner(const CsrMatrix& a) {
    const auto d = a.diagonal();
    inv_diag_.resize(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] == 0.0) {
            throw InvalidArgument("jacobi_precondition: zero diagonal entry at row " + std::to_string(i));
        }
        inv_diag_[i] = 1.0 / d[i];
    }
}

void JacobiPreconditioner::apply(std::span<const double> in, std::span<double> out) const {
    if (in.size() != inv_diag_.size() || out.size() != inv_diag_.size()) {
        throw InvalidArgument("JacobiPreconditioner: length mismatch");
    }
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = inv_diag_[i] * in[i];
}

JacobiPreconditioner jacobi_precondition(const CsrMatrix& a) {
    return JacobiPreconditioner(a);
}

}  // namespace sfns
