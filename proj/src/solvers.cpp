#include "sfns/solvers.hpp"

#include <cmath>
#include <limits>

namespace sfns {

namespace {

double euclid(std::span<const double> v) {
    return norm2(v);
}

LevelStats level_stats_for(const FeSpace& space) {
    LevelStats s;
    s.nx = space.mesh().nx();
    s.ny = space.mesh().ny();
    s.h = space.mesh().h();
    s.free_dofs = space.n_free();
    return s;
}

SolveResult checked_solve(const CsrMatrix& m, const Vector& rhs, const Vector& x0, const SolverConfig& cfg,
                          LevelStats& stats, const char* what) {
    SolveResult res = bicgstab(m, rhs, x0, cfg);
    ++stats.linear_solves;
    if (!res.report.converged) stats.linear_converged = false;
    if (res.report.breakdown && !res.report.converged) {
        throw LinearSolveFailure(std::string(what) + ": BiCGSTAB breakdown", res.report, stats);
    }
    return res;
}

// Newton at a single Reynolds number starting from psi (boundary data set).
void newton_stage(const FeSpace& space, double re, const Vector& load, const NewtonConfig& cfg,
                  const SolverConfig& linear, const AssemblyOptions& opts, DofVector& psi, LevelStats& stats,
                  bool final_stage) {
    DofVector best = psi;
    double best_res = std::numeric_limits<double>::infinity();
    Vector residual = nonlinear_residual(space, re, psi, load, opts);
    ++stats.nonlinear_residual_evals;
    for (int k = 1; k <= cfg.max_newton; ++k) {
        const CsrMatrix jac = assemble_jacobian(space, re, psi, opts);
        Vector rhs(residual.size());
        for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = -residual[i];
        const SolveResult step = checked_solve(jac, rhs, Vector(rhs.size(), 0.0), linear, stats, "Newton step");
        stats.bicgstab_iters.push_back(step.report.iterations);
        ++stats.newton_iters;

        const double step_norm = euclid(step.x);
        if (!std::isfinite(step_norm) || step_norm > cfg.max_step) {
            throw NewtonFailure("Newton update norm " + std::to_string(step_norm) + " exceeds the step safeguard",
                                best, stats);
        }
        const auto& free = space.free_dofs();
        for (std::size_t i = 0; i < free.size(); ++i) psi[free[i]] += step.x[i];

        residual = nonlinear_residual(space, re, psi, load, opts);
        ++stats.nonlinear_residual_evals;
        const double res_norm = euclid(residual);
        stats.residual_history.push_back(res_norm);
        stats.step_history.push_back(step_norm);
        stats.final_residual = res_norm;
        if (res_norm < best_res) {
            best_res = res_norm;
            best = psi;
        }
        // Intermediate continuation stages only need to get close.
        const double tol = final_stage ? cfg.tol : std::max(cfg.tol, 1e-6);
        if (res_norm <= tol && step_norm <= tol) return;
    }
    throw NewtonFailure("Newton did not converge in " + std::to_string(cfg.max_newton) + " iterations (residual " +
                            std::to_string(best_res) + ")",
                        best, stats);
}

}  // namespace

void NewtonConfig::validate() const {
    if (!(tol > 0.0)) throw InvalidArgument("NewtonConfig: tol must be positive");
    if (max_newton < 1) throw InvalidArgument("NewtonConfig: max_newton must be >= 1");
    if (!(max_step > 0.0)) throw InvalidArgument("NewtonConfig: max_step must be positive");
    for (std::size_t i = 0; i < continuation.size(); ++i) {
        if (!(continuation[i] > 0.0)) throw InvalidArgument("NewtonConfig: continuation values must be positive");
        if (i > 0 && !(continuation[i] > continuation[i - 1])) {
            throw InvalidArgument("NewtonConfig: continuation schedule must be strictly increasing");
        }
    }
}

OneLevelResult solve_one_level(const FeSpace& space, double reynolds, const VectorField& f,
                               const NewtonConfig& newton, const SolverConfig& linear,
                               const AssemblyOptions& assembly) {
    newton.validate();
    linear.validate();
    if (!(reynolds > 0.0)) throw InvalidArgument("solve_one_level: Reynolds number must be positive");

    std::vector<double> schedule = newton.continuation;
    if (!schedule.empty()) {
        if (schedule.back() > reynolds) {
            throw InvalidArgument("solve_one_level: continuation schedule must end at the target Reynolds number");
        }
        if (schedule.back() < reynolds) schedule.push_back(reynolds);
    } else {
        schedule.push_back(reynolds);
    }

    OneLevelResult result;
    result.stats = level_stats_for(space);
    LevelStats& stats = result.stats;
    const Vector load = assemble_load(space, f, assembly);
    DofVector psi = space.lift();

    if (newton.initial_guess == InitialGuess::Stokes) {
        // a(psi, phi) = l(phi) with the boundary data moved to the right-hand side.
        const CsrMatrix a = assemble_a(space, schedule.front(), assembly);
        const Vector coupling = apply_oseen(space, schedule.front(), DofVector(space.n_dofs(), 0.0), psi, assembly);
        Vector rhs = load;
        for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] -= coupling[i];
        const SolveResult s = checked_solve(a, rhs, Vector(rhs.size(), 0.0), linear, stats, "Stokes initial guess");
        stats.initial_guess_iters = s.report.iterations;
        psi = space.expand(s.x);
    }

    for (std::size_t stage = 0; stage < schedule.size(); ++stage) {
        newton_stage(space, schedule[stage], load, newton, linear, assembly, psi, stats,
                     stage + 1 == schedule.size());
    }
    stats.converged = true;
    result.psi = std::move(psi);
    return result;
}

TwoLevelConfig TwoLevelConfig::halving(int coarse_n) {
    TwoLevelConfig cfg;
    cfg.coarse_nx = cfg.coarse_ny = coarse_n;
    cfg.fine_nx = cfg.fine_ny = 2 * coarse_n;
    return cfg;
}

void TwoLevelConfig::validate() const {
    if (coarse_nx < 1 || coarse_ny < 1 || fine_nx < 1 || fine_ny < 1) {
        throw InvalidArgument("TwoLevelConfig: mesh sizes must be >= 1");
    }
    if (fine_nx % coarse_nx != 0 || fine_ny % coarse_ny != 0) {
        throw InvalidArgument("TwoLevelConfig: fine mesh must be a refinement of the coarse mesh");
    }
    newton.validate();
    linear.validate();
}

TwoLevelResult solve_two_level(const TwoLevelConfig& cfg, double reynolds, const VectorField& f,
                               const BoundarySpec& bc) {
    cfg.validate();
    FeSpace coarse_space(build_uniform(cfg.coarse_nx, cfg.coarse_ny), bc);
    FeSpace fine_space(build_uniform(cfg.fine_nx, cfg.fine_ny), bc);

    // Step 1: nonlinear problem on the coarse mesh.
    OneLevelResult coarse = solve_one_level(coarse_space, reynolds, f, cfg.newton, cfg.linear, cfg.assembly);

    // Step 2: one linear solve on the fine mesh, b(psi_H; psi_h, phi_h).
    LevelStats fine_stats = level_stats_for(fine_space);
    const DofVector xi = prolongate(DiscreteField(coarse_space, coarse.psi), fine_space);
    const CsrMatrix m = assemble_oseen(fine_space, reynolds, xi, cfg.assembly);
    const Vector load = assemble_load(fine_space, f, cfg.assembly);
    const Vector coupling = apply_oseen(fine_space, reynolds, xi, fine_space.lift(), cfg.assembly);
    Vector rhs(load.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = load[i] - coupling[i];

    SolveResult s;
    try {
        s = checked_solve(m, rhs, fine_space.restrict_free(xi), cfg.linear, fine_stats, "fine solve");
    } catch (const LinearSolveFailure& e) {
        throw LinearSolveFailure(e.what(), e.report(), e.stats(), true);
    }
    fine_stats.bicgstab_iters.push_back(s.report.iterations);
    fine_stats.final_residual = s.report.absolute_residual;
    fine_stats.converged = s.report.converged;
    if (!s.report.converged) {
        throw LinearSolveFailure("fine-level linear solve did not converge (relative residual " +
                                     std::to_string(s.report.relative_residual) + ")",
                                 s.report, fine_stats, true);
    }

    DofVector fine = fine_space.expand(s.x);
    return TwoLevelResult{std::move(coarse_space), std::move(fine_space), std::move(coarse.psi), std::move(fine),
                          std::move(coarse.stats), std::move(fine_stats)};
}

DofVector prolongate(const DiscreteField& coarse, const FeSpace& fine_space) {
    const RectMesh& cm = coarse.mesh();
    const RectMesh& fm = fine_space.mesh();
    if (fm.nx() % cm.nx() != 0 || fm.ny() % cm.ny() != 0) {
        throw InvalidArgument("prolongate: fine mesh does not nest the coarse mesh");
    }
    const int rx = fm.nx() / cm.nx();
    const int ry = fm.ny() / cm.ny();
    DofVector out(fine_space.n_dofs());
    for (int j = 0; j <= fm.ny(); ++j) {
        for (int i = 0; i <= fm.nx(); ++i) {
            // Locate the coarse element with integer arithmetic so nodes on
            // coarse edges land exactly on xi, eta in {0, 1}.
            const int ci = std::min(i / rx, cm.nx() - 1);
            const int cj = std::min(j / ry, cm.ny() - 1);
            const double xi = static_cast<double>(i - ci * rx) / rx;
            const double eta = static_cast<double>(j - cj * ry) / ry;
            const FieldEval v = coarse.evaluate_in_element(cm.element_index(ci, cj), xi, eta);
            const int node = fm.node_index(i, j);
            out[FeSpace::global_dof(node, DofKind::Value)] = v.value;
            out[FeSpace::global_dof(node, DofKind::Dx)] = v.dx;
            out[FeSpace::global_dof(node, DofKind::Dy)] = v.dy;
            out[FeSpace::global_dof(node, DofKind::Dxy)] = v.dxy;
        }
    }
    return out;
}

std::string_view element_name(ElementKind kind) {
    switch (kind) {
        case ElementKind::Argyris: return "Argyris triangle";
        case ElementKind::CloughTocher: return "Clough-Tocher triangle";
        case ElementKind::BognerFoxSchmit: return "Bogner-Fox-Schmit rectangle";
        case ElementKind::BicubicSpline: return "Bicubic spline rectangle";
    }
    return "unknown";
}

double scaling_exponent(ElementKind kind) {
    return kind == ElementKind::Argyris ? 2.5 : 1.5;
}

double scaling_h_for_H(ElementKind kind, double coarse_h) {
    if (!(coarse_h > 0.0) || !(coarse_h < 1.0)) {
        throw InvalidArgument("scaling_h_for_H: coarse width must lie in (0, 1)");
    }
    const double target = std::pow(coarse_h, scaling_exponent(kind));
    // g(h) = h |ln h|^{-1/4} is increasing on (0, 1), g(0+) = 0, g(H) >= H^p.
    auto g = [](double h) { return h * std::pow(-std::log(h), -0.25); };
    double lo = 0.0;
    double hi = coarse_h;
    for (int it = 0; it < 2000 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (g(mid) < target) lo = mid;
        else hi = mid;
    }
    if (lo > 0.0 && std::abs(g(lo) - target) <= std::abs(g(hi) - target)) return lo;
    return hi;
}

}  // namespace sfns
