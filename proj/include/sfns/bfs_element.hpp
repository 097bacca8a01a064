#pragma once

#include <array>
#include <vector>

namespace sfns {

/// Hermite degree-of-freedom kinds carried by every BFS vertex.
enum class DofKind : int { Value = 0, Dx = 1, Dy = 2, Dxy = 3 };

inline constexpr int kKindsPerNode = 4;
inline constexpr int kLocalDofs = 16;

/// Local DOF index: vertex-major (lower-left, lower-right, upper-right,
/// upper-left), kind-minor (Value, Dx, Dy, Dxy).
constexpr int local_dof(int vertex, DofKind kind) {
    return vertex * kKindsPerNode + static_cast<int>(kind);
}

/// Values and derivatives up to order two of the 16 BFS shape functions at
/// one point. On the reference square the "x" and "y" fields hold xi and eta
/// derivatives; after to_physical() they are physical derivatives.
struct BasisEval {
    std::array<double, kLocalDofs> value{};
    std::array<double, kLocalDofs> dx{};
    std::array<double, kLocalDofs> dy{};
    std::array<double, kLocalDofs> dxx{};
    std::array<double, kLocalDofs> dxy{};
    std::array<double, kLocalDofs> dyy{};

    double laplacian(int k) const { return dxx[k] + dyy[k]; }
};

/// Bicubic Hermite shape functions on the reference square [0,1]^2.
BasisEval shape_eval(double xi, double eta);

/// Multiplier applied to a reference shape function so that the matching
/// global DOF is a physical derivative: 1, hx, hy, hx*hy by kind.
struct HermiteScaling {
    std::array<double, kKindsPerNode> per_kind{};

    double operator()(DofKind kind) const { return per_kind[static_cast<int>(kind)]; }
    double for_local(int k) const { return per_kind[k % kKindsPerNode]; }
};

HermiteScaling physical_scaling(double hx, double hy);

/// Shape functions of an hx-by-hy element in physical coordinates, with the
/// Hermite scaling folded in.
BasisEval to_physical(const BasisEval& reference, double hx, double hy);

struct QuadraturePoint {
    double xi;
    double eta;
    double weight;
};

/// Tensor-product Gauss-Legendre rule on [0,1]^2; weights sum to one.
struct QuadratureRule {
    int order = 0;
    std::vector<QuadraturePoint> points;
};

/// Gauss-Legendre nodes and weights on [0,1] with n points.
std::vector<std::pair<double, double>> gauss_legendre_1d(int n);

/// Throws InvalidArgument unless 1 <= n <= 10.
QuadratureRule gauss_rule(int n);

inline constexpr int kDefaultAssemblyQuadrature = 4;

}  // namespace sfns
