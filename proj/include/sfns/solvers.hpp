#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sfns/assembly.hpp"
#include "sfns/bicgstab.hpp"
#include "sfns/error.hpp"
#include "sfns/field.hpp"

namespace sfns {

enum class InitialGuess {
    Zero,
    Stokes,  // solve a(psi, phi) = l(phi) first
};

struct NewtonConfig {
    /// Newton stops once both ||R(psi_k)|| and ||psi_k - psi_{k-1}|| (free-DOF
    /// Euclidean norms) are <= tol.
    double tol = 1e-3;
    int max_newton = 25;
    InitialGuess initial_guess = InitialGuess::Stokes;
    /// Increasing Reynolds numbers solved in turn, each warm-starting the next.
    /// Empty means solve directly at the target Reynolds number.
    std::vector<double> continuation;
    /// A Newton update longer than this aborts the solve.
    double max_step = 1e6;

    void validate() const;
};

/// Per-level solve record.
struct LevelStats {
    int nx = 0;
    int ny = 0;
    double h = 0.0;
    int free_dofs = 0;
    int newton_iters = 0;
    /// BiCGSTAB iterations of each Newton (or single linear) solve.
    std::vector<int> bicgstab_iters;
    /// BiCGSTAB iterations spent on the initial guess (Stokes solve).
    int initial_guess_iters = 0;
    /// ||R(psi_k)|| and ||psi_k - psi_{k-1}|| after each Newton step.
    std::vector<double> residual_history;
    std::vector<double> step_history;
    /// Number of nonlinear residual evaluations performed at this level.
    int nonlinear_residual_evals = 0;
    /// Number of linear systems solved at this level.
    int linear_solves = 0;
    double final_residual = 0.0;
    bool linear_converged = true;
    bool converged = false;
};

/// Newton did not meet its stopping rule; carries the best iterate seen.
class NewtonFailure : public Error {
public:
    NewtonFailure(const std::string& what, DofVector best, LevelStats stats)
        : Error(what), best_(std::move(best)), stats_(std::move(stats)) {}

    const DofVector& best_iterate() const { return best_; }
    const LevelStats& stats() const { return stats_; }

private:
    DofVector best_;
    LevelStats stats_;
};

/// A linear solve broke down or (for the single fine-level solve) failed to converge.
class LinearSolveFailure : public Error {
public:
    LinearSolveFailure(const std::string& what, SolveReport report, LevelStats stats, bool fine_level = false)
        : Error(what), report_(report), stats_(std::move(stats)), fine_level_(fine_level) {}

    const SolveReport& report() const { return report_; }
    const LevelStats& stats() const { return stats_; }
    /// Raised by the fine-level step of the two-level method.
    bool fine_level() const { return fine_level_; }

private:
    SolveReport report_;
    LevelStats stats_;
    bool fine_level_;
};

struct OneLevelResult {
    DofVector psi;
    LevelStats stats;
};

/// Newton's method for a(psi, phi) + b(psi; psi, phi) = l(phi) on one mesh.
/// Boundary data comes from the space.
OneLevelResult solve_one_level(const FeSpace& space, double reynolds, const VectorField& f,
                               const NewtonConfig& newton = {}, const SolverConfig& linear = {},
                               const AssemblyOptions& assembly = {});

struct TwoLevelConfig {
    int coarse_nx = 4;
    int coarse_ny = 4;
    int fine_nx = 8;
    int fine_ny = 8;
    NewtonConfig newton;
    SolverConfig linear;
    AssemblyOptions assembly;

    /// Coarse n-by-n with the fine mesh obtained by halving.
    static TwoLevelConfig halving(int coarse_n);
    /// Throws InvalidArgument unless the fine mesh nests the coarse one.
    void validate() const;
};

struct TwoLevelResult {
    FeSpace coarse_space;
    FeSpace fine_space;
    DofVector coarse;
    DofVector fine;
    LevelStats coarse_stats;
    LevelStats fine_stats;
};

/// Nonlinear solve on the coarse mesh, then one linear solve on the fine mesh
/// with the convection field frozen at the prolonged coarse solution.
TwoLevelResult solve_two_level(const TwoLevelConfig& cfg, double reynolds, const VectorField& f,
                               const BoundarySpec& bc = ClampedHomogeneous{});

/// Hermite interpolation of a coarse field onto a nested fine space: fine
/// DOFs are the coarse value, d/dx, d/dy and d2/dxdy at each fine node.
DofVector prolongate(const DiscreteField& coarse, const FeSpace& fine_space);

enum class ElementKind { Argyris, CloughTocher, BognerFoxSchmit, BicubicSpline };

inline constexpr ElementKind kAllElementKinds[] = {ElementKind::Argyris, ElementKind::CloughTocher,
                                                   ElementKind::BognerFoxSchmit, ElementKind::BicubicSpline};

std::string_view element_name(ElementKind kind);
/// Exponent p in h |ln h|^{-1/4} = H^p.
double scaling_exponent(ElementKind kind);

/// Fine width h solving h |ln h|^{-1/4} = H^p (unit constant) by bisection on
/// (0, H]. Throws InvalidArgument unless 0 < H < 1.
double scaling_h_for_H(ElementKind kind, double coarse_h);

}  // namespace sfns
