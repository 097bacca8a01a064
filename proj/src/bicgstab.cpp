#include "sfns/bicgstab.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "sfns/error.hpp"

namespace sfns {

void SolverConfig::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw InvalidArgument("SolverConfig: tolerances must be positive");
    if (max_iter && *max_iter < 1) throw InvalidArgument("SolverConfig: max_iter must be >= 1");
}

namespace {

class Operator {
public:
    Operator(const CsrMatrix& a, const SolverConfig& cfg, SolveReport& report) : a_(a), report_(report) {
        if (cfg.preconditioner == Preconditioner::Jacobi) jacobi_.emplace(a);
    }

    void apply(std::span<const double> x, std::span<double> y) {
        ++report_.spmv_calls;
        spmv(a_, x, y);
    }

    void precondition(std::span<const double> in, std::span<double> out) const {
        if (jacobi_) {
            jacobi_->apply(in, out);
        } else {
            std::copy(in.begin(), in.end(), out.begin());
        }
    }

private:
    const CsrMatrix& a_;
    SolveReport& report_;
    std::optional<JacobiPreconditioner> jacobi_;
};

}  // namespace

SolveResult bicgstab(const CsrMatrix& a, std::span<const double> rhs, std::span<const double> x0,
                     const SolverConfig& cfg) {
    cfg.validate();
    const std::size_t n = static_cast<std::size_t>(a.rows());
    if (rhs.size() != n || x0.size() != n) throw InvalidArgument("bicgstab: dimension mismatch");

    SolveResult result;
    SolveReport& rep = result.report;
    Operator op(a, cfg, rep);
    const int max_iter = cfg.max_iter.value_or(std::max<int>(1, 10 * static_cast<int>(n)));

    Vector& x = result.x;
    x.assign(x0.begin(), x0.end());
    Vector r(n), tmp(n);

    const double bnorm = norm2(rhs);
    const double target = std::max(cfg.rel_tol * bnorm, cfg.abs_tol);

    auto true_residual = [&](Vector& out) {
        ++rep.spmv_outside_iterations;
        op.apply(x, tmp);
        for (std::size_t i = 0; i < n; ++i) out[i] = rhs[i] - tmp[i];
        return norm2(out);
    };
    auto finish = [&](double rnorm) {
        rep.absolute_residual = rnorm;
        rep.relative_residual = bnorm > 0.0 ? rnorm / bnorm : rnorm;
        return result;
    };

    double rnorm = true_residual(r);
    if (rnorm <= target) {
        rep.converged = true;
        return finish(rnorm);
    }

    const Vector r_hat = r;
    Vector p(n, 0.0), v(n, 0.0), p_hat(n), s(n), s_hat(n), t(n);
    double rho_prev = 1.0, alpha = 1.0, omega = 1.0;

    Vector x_best = x;
    double best_norm = rnorm;
    const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();

    auto accept_if_true = [&](Vector& residual_out) {
        const double true_norm = true_residual(residual_out);
        if (true_norm <= target) {
            rep.converged = true;
            return true;
        }
        ++rep.residual_replacements;
        rnorm = true_norm;
        return false;
    };

    for (int iter = 1; iter <= max_iter; ++iter) {
        const double rho = dot(r_hat, r);
        if (std::abs(rho) <= tiny * bnorm) {
            rep.breakdown = true;
            break;
        }
        if (iter == 1) {
            p = r;
        } else {
            const double beta = (rho / rho_prev) * (alpha / omega);
            for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        op.precondition(p, p_hat);
        op.apply(p_hat, v);
        const double rv = dot(r_hat, v);
        if (rv == 0.0) {
            rep.breakdown = true;
            rep.iterations = iter;
            ++rep.short_iterations;
            break;
        }
        alpha = rho / rv;
        for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];

        rep.iterations = iter;
        if (norm2(s) <= target) {
            axpy(alpha, p_hat, x);
            ++rep.short_iterations;
            if (accept_if_true(r)) {
                rep.half_step_exit = true;
                return finish(norm2(r));
            }
            rho_prev = rho;
            omega = 1.0;
            // Restart the search direction from the true residual.
            std::fill(p.begin(), p.end(), 0.0);
            std::fill(v.begin(), v.end(), 0.0);
            continue;
        }

        op.precondition(s, s_hat);
        op.apply(s_hat, t);
        const double tt = dot(t, t);
        const double ts = dot(t, s);
        omega = tt > 0.0 ? ts / tt : 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p_hat[i] + omega * s_hat[i];
            r[i] = s[i] - omega * t[i];
        }
        rnorm = norm2(r);
        if (!std::isfinite(rnorm)) {
            rep.breakdown = true;
            break;
        }
        if (rnorm < best_norm) {
            best_norm = rnorm;
            x_best = x;
        }
        if (rnorm <= target && accept_if_true(r)) return finish(norm2(r));
        if (omega == 0.0) {
            rep.breakdown = true;
            break;
        }
        rho_prev = rho;
    }

    // Not converged: hand back the best iterate and its true residual.
    if (rep.breakdown || !std::isfinite(rnorm) || best_norm < rnorm) x = x_best;
    const double final_norm = true_residual(r);
    if (final_norm <= target) rep.converged = true;
    return finish(final_norm);
}

}  // namespace sfns
