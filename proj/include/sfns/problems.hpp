#pragma once

#include <functional>
#include <vector>

#include "sfns/assembly.hpp"
#include "sfns/field.hpp"

namespace sfns {

/// Smooth manufactured flow on the unit square:
///   psi = x^2 (x-1)^2 y^2 (y-1)^2,  p = x^3 + y^3 - 0.5,  u = (psi_y, -psi_x),
/// with body force f = -Re^{-1} lap(u) + (u . grad) u + grad(p).
class ManufacturedProblem {
public:
    explicit ManufacturedProblem(double reynolds);

    double reynolds() const { return reynolds_; }

    FieldEval psi(double x, double y) const;
    /// (psi, psi_x, psi_y, psi_xy) for Hermite interpolation.
    std::array<double, 4> hermite_data(double x, double y) const;
    std::array<double, 2> velocity(double x, double y) const;
    double pressure(double x, double y) const;
    std::array<double, 2> body_force(double x, double y) const;

    VectorField force_field() const;
    HermiteData exact_hermite() const;

private:
    double reynolds_;
};

/// Shorthand for ManufacturedProblem(re).force_field().
VectorField manufactured_f(double reynolds);

/// Lid-driven cavity: no body force, clamped walls, tangential lid speed on y = 1.
struct CavityProblem {
    double reynolds = 1.0;
    double lid_speed = 1.0;

    BoundarySpec boundary() const { return LidDriven{lid_speed}; }
    VectorField force_field() const;
};

enum class NormKind {
    Full,      // sum of all derivative orders 0..j
    Seminorm,  // order-j derivative terms only
};

struct ErrorReport {
    double l2 = 0.0;
    double h1 = 0.0;
    double h2 = 0.0;
};

using ExactSolution = std::function<FieldEval(double x, double y)>;

inline constexpr int kDefaultErrorQuadrature = 6;

/// Element-summed Gauss quadrature of psi - psi_h and its derivatives.
ErrorReport error_norms(const DiscreteField& field, const ExactSolution& exact,
                        int quad_order = kDefaultErrorQuadrature, NormKind kind = NormKind::Full);
ErrorReport error_norms(const DiscreteField& field, const ManufacturedProblem& problem,
                        int quad_order = kDefaultErrorQuadrature, NormKind kind = NormKind::Full);

struct FieldSample {
    double x;
    double y;
    double psi;
    double u;
    double v;
};

/// n-by-n uniform grid over the closed unit square, x fastest; u = psi_y,
/// v = -psi_x. Throws InvalidArgument for n < 2.
std::vector<FieldSample> sample_field(const DiscreteField& field, int n);

enum class ProfileAxis {
    Vertical,    // x = c, report u = psi_y against y
    Horizontal,  // y = c, report v = -psi_x against x
};

struct ProfileLine {
    ProfileAxis axis;
    double c;
};

struct ProfilePoint {
    double coordinate;
    double velocity;
};

/// Velocity along a line through the domain at `samples` equispaced points,
/// endpoints included.
std::vector<ProfilePoint> velocity_profile(const DiscreteField& field, ProfileLine line, int samples);

}  // namespace sfns
