#include "sfns/bfs_element.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sfns/error.hpp"

namespace sfns {

namespace {

// Cubic Hermite basis on [0,1] with its first two derivatives.
// index 0: value at 0, 1: slope at 0, 2: value at 1, 3: slope at 1.
struct Hermite1d {
    std::array<double, 4> f;
    std::array<double, 4> d1;
    std::array<double, 4> d2;
};

Hermite1d hermite_1d(double t) {
    const double t2 = t * t;
    const double t3 = t2 * t;
    Hermite1d h;
    h.f = {1.0 - 3.0 * t2 + 2.0 * t3, t - 2.0 * t2 + t3, 3.0 * t2 - 2.0 * t3, -t2 + t3};
    h.d1 = {-6.0 * t + 6.0 * t2, 1.0 - 4.0 * t + 3.0 * t2, 6.0 * t - 6.0 * t2, -2.0 * t + 3.0 * t2};
    h.d2 = {-6.0 + 12.0 * t, -4.0 + 6.0 * t, 6.0 - 12.0 * t, -2.0 + 6.0 * t};
    return h;
}

// Vertex position on the reference square: lower-left, lower-right,
// upper-right, upper-left.
constexpr std::array<std::array<int, 2>, 4> kVertexCorner = {{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};

}  // namespace

BasisEval shape_eval(double xi, double eta) {
    const Hermite1d hx = hermite_1d(xi);
    const Hermite1d hy = hermite_1d(eta);
    BasisEval out;
    for (int v = 0; v < 4; ++v) {
        const int ax = kVertexCorner[v][0];
        const int ay = kVertexCorner[v][1];
        for (int kind = 0; kind < kKindsPerNode; ++kind) {
            // Value/slope selection per axis for this DOF kind.
            const bool slope_x = kind == 1 || kind == 3;
            const bool slope_y = kind == 2 || kind == 3;
            const int ix = 2 * ax + (slope_x ? 1 : 0);
            const int iy = 2 * ay + (slope_y ? 1 : 0);
            const int k = v * kKindsPerNode + kind;
            out.value[k] = hx.f[ix] * hy.f[iy];
            out.dx[k] = hx.d1[ix] * hy.f[iy];
            out.dy[k] = hx.f[ix] * hy.d1[iy];
            out.dxx[k] = hx.d2[ix] * hy.f[iy];
            out.dxy[k] = hx.d1[ix] * hy.d1[iy];
            out.dyy[k] = hx.f[ix] * hy.d2[iy];
        }
    }
    return out;
}

HermiteScaling physical_scaling(double hx, double hy) {
    if (!(hx > 0.0) || !(hy > 0.0)) {
        throw InvalidArgument("physical_scaling: element widths must be positive");
    }
    return HermiteScaling{{1.0, hx, hy, hx * hy}};
}

BasisEval to_physical(const BasisEval& ref, double hx, double hy) {
    const HermiteScaling s = physical_scaling(hx, hy);
    BasisEval out;
    for (int k = 0; k < kLocalDofs; ++k) {
        const double c = s.for_local(k);
        out.value[k] = c * ref.value[k];
        out.dx[k] = c * ref.dx[k] / hx;
        out.dy[k] = c * ref.dy[k] / hy;
        out.dxx[k] = c * ref.dxx[k] / (hx * hx);
        out.dxy[k] = c * ref.dxy[k] / (hx * hy);
        out.dyy[k] = c * ref.dyy[k] / (hy * hy);
    }
    return out;
}

std::vector<std::pair<double, double>> gauss_legendre_1d(int n) {
    if (n < 1 || n > 10) {
        throw InvalidArgument("gauss_rule: points per axis must be in [1, 10], got " + std::to_string(n));
    }
    std::vector<std::pair<double, double>> rule(n);
    // Newton iteration for the roots of P_n on [-1,1], then map to [0,1].
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        if (n % 2 == 1 && i == n / 2) z = 0.0;
        // Recompute the derivative at the converged root for the weight.
        double p0 = 1.0;
        double p1 = 0.0;
        for (int j = 1; j <= n; ++j) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
        }
        dp = (n == 1) ? 1.0 : n * (z * p0 - p1) / (z * z - 1.0);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule[i] = {0.5 * (1.0 - z), 0.5 * w};
        rule[n - 1 - i] = {0.5 * (1.0 + z), 0.5 * w};
    }
    return rule;
}

QuadratureRule gauss_rule(int n) {
    const auto line = gauss_legendre_1d(n);
    QuadratureRule rule;
    rule.order = n;
    rule.points.reserve(static_cast<std::size_t>(n) * n);
    for (const auto& [eta, wy] : line) {
        for (const auto& [xi, wx] : line) {
            rule.points.push_back({xi, eta, wx * wy});
        }
    }
    return rule;
}

}  // namespace sfns
