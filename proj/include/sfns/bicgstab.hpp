#pragma once

#include <optional>

#include "sfns/sparse.hpp"

namespace sfns {

enum class Preconditioner { None, Jacobi };

struct SolverConfig {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    /// Iteration cap; unset means 10 times the system size.
    std::optional<int> max_iter;
    Preconditioner preconditioner = Preconditioner::Jacobi;

    /// Throws InvalidArgument on non-positive tolerances or max_iter < 1.
    void validate() const;
};

struct SolveReport {
    int iterations = 0;
    /// True residual ||rhs - A x|| / ||rhs|| of the returned iterate
    /// (absolute residual when rhs = 0).
    double relative_residual = 0.0;
    double absolute_residual = 0.0;
    bool converged = false;
    bool breakdown = false;
    /// Final iteration stopped after its first half (s small enough).
    bool half_step_exit = false;
    /// Iterations that performed a single spmv (half-step exit or breakdown
    /// after the first product); every other iteration performs exactly two.
    int short_iterations = 0;
    /// Every spmv performed, and the ones not belonging to an iteration body
    /// (initial residual, true-residual checks).
    int spmv_calls = 0;
    int spmv_outside_iterations = 0;
    int residual_replacements = 0;
};

struct SolveResult {
    Vector x;
    SolveReport report;
};

/// Right-preconditioned BiCGSTAB. Convergence is declared on the recomputed
/// true residual, never on the recurrence alone; when the two disagree the
/// recurrence residual is replaced by the true one and iteration continues.
/// On breakdown (rho or omega vanishing) the best iterate seen is returned.
SolveResult bicgstab(const CsrMatrix& a, std::span<const double> rhs, std::span<const double> x0,
                     const SolverConfig& cfg);

}  // namespace sfns
