#pragma once

#include <array>
#include <functional>

#include "sfns/field.hpp"
#include "sfns/sparse.hpp"

namespace sfns {

/// Body force f(x, y) = (f1, f2).
using VectorField = std::function<std::array<double, 2>(double x, double y)>;

/// Element loop strategy. Parallel runs the four element colours
/// ((i mod 2, j mod 2)) one after another with an OpenMP loop inside each
/// colour; same-colour elements share no node, so every matrix or vector
/// entry receives its contributions in a fixed order. Serial is the
/// lexicographic reference loop.
enum class Execution { Parallel, Serial };

struct AssemblyOptions {
    int quadrature = kDefaultAssemblyQuadrature;
    Execution execution = Execution::Parallel;
};

// Matrices are over free DOFs (rows = test functions, columns = trial
// functions). Coefficient vectors are full DofVectors.

/// a(psi, phi) = Re^{-1} * integral of lap(psi) * lap(phi).
CsrMatrix assemble_a(const FeSpace& space, double reynolds, const AssemblyOptions& opts = {});

/// B(xi) with (B(xi) psi) . phi = b(xi; psi, phi)
///   = integral of lap(xi) * (psi_y phi_x - psi_x phi_y).
CsrMatrix assemble_b_first_slot(const FeSpace& space, const DofVector& xi, const AssemblyOptions& opts = {});

/// C(psi) with (C(psi) delta) . phi = b(delta; psi, phi).
CsrMatrix assemble_b_middle_slot(const FeSpace& space, const DofVector& psi, const AssemblyOptions& opts = {});

/// Newton Jacobian A + B(psi) + C(psi), assembled in a single element pass.
CsrMatrix assemble_jacobian(const FeSpace& space, double reynolds, const DofVector& psi,
                            const AssemblyOptions& opts = {});

/// Oseen-type operator A + B(xi), used by the fine-level two-level step.
CsrMatrix assemble_oseen(const FeSpace& space, double reynolds, const DofVector& xi,
                         const AssemblyOptions& opts = {});

/// l(phi_i) = integral of f . curl(phi_i) with curl(phi) = (phi_y, -phi_x),
/// over free test functions.
Vector assemble_load(const FeSpace& space, const VectorField& f, const AssemblyOptions& opts = {});

/// a(v, phi_i) + b(xi; v, phi_i) over free i, for full vectors v and xi
/// (fixed entries included, so boundary data is accounted for).
Vector apply_oseen(const FeSpace& space, double reynolds, const DofVector& xi, const DofVector& v,
                   const AssemblyOptions& opts = {});

/// R(psi) = a(psi, .) + b(psi; psi, .) - l over free DOFs.
Vector nonlinear_residual(const FeSpace& space, double reynolds, const DofVector& psi, const Vector& load,
                          const AssemblyOptions& opts = {});

}  // namespace sfns
