#include "sfns/problems.hpp"

#include <cmath>

#include "sfns/error.hpp"

namespace sfns {

namespace {

// g(t) = t^2 (t-1)^2 and its derivatives.
struct G {
    double g, d1, d2, d3;
};

G g_of(double t) {
    return {t * t * (t - 1.0) * (t - 1.0), 4.0 * t * t * t - 6.0 * t * t + 2.0 * t, 12.0 * t * t - 12.0 * t + 2.0,
            24.0 * t - 12.0};
}

}  // namespace

ManufacturedProblem::ManufacturedProblem(double reynolds) : reynolds_(reynolds) {
    if (!(reynolds > 0.0) || !std::isfinite(reynolds)) {
        throw InvalidArgument("ManufacturedProblem: Reynolds number must be positive");
    }
}

FieldEval ManufacturedProblem::psi(double x, double y) const {
    const G gx = g_of(x);
    const G gy = g_of(y);
    return {gx.g * gy.g, gx.d1 * gy.g, gx.g * gy.d1, gx.d2 * gy.g, gx.d1 * gy.d1, gx.g * gy.d2};
}

std::array<double, 4> ManufacturedProblem::hermite_data(double x, double y) const {
    const FieldEval p = psi(x, y);
    return {p.value, p.dx, p.dy, p.dxy};
}

std::array<double, 2> ManufacturedProblem::velocity(double x, double y) const {
    const FieldEval p = psi(x, y);
    return {p.dy, -p.dx};
}

double ManufacturedProblem::pressure(double x, double y) const {
    return x * x * x + y * y * y - 0.5;
}

std::array<double, 2> ManufacturedProblem::body_force(double x, double y) const {
    const G gx = g_of(x);
    const G gy = g_of(y);
    // u1 = g(x) g'(y), u2 = -g'(x) g(y)
    const double u1 = gx.g * gy.d1;
    const double u2 = -gx.d1 * gy.g;
    const double u1_x = gx.d1 * gy.d1;
    const double u1_y = gx.g * gy.d2;
    const double u2_x = -gx.d2 * gy.g;
    const double u2_y = -gx.d1 * gy.d1;
    const double lap_u1 = gx.d2 * gy.d1 + gx.g * gy.d3;
    const double lap_u2 = -(gx.d3 * gy.g + gx.d1 * gy.d2);
    const double inv_re = 1.0 / reynolds_;
    return {-inv_re * lap_u1 + u1 * u1_x + u2 * u1_y + 3.0 * x * x,
            -inv_re * lap_u2 + u1 * u2_x + u2 * u2_y + 3.0 * y * y};
}

VectorField ManufacturedProblem::force_field() const {
    return [problem = *this](double x, double y) { return problem.body_force(x, y); };
}

HermiteData ManufacturedProblem::exact_hermite() const {
    return [problem = *this](double x, double y) { return problem.hermite_data(x, y); };
}

VectorField manufactured_f(double reynolds) {
    return ManufacturedProblem(reynolds).force_field();
}

VectorField CavityProblem::force_field() const {
    return [](double, double) { return std::array<double, 2>{0.0, 0.0}; };
}

ErrorReport error_norms(const DiscreteField& field, const ExactSolution& exact, int quad_order, NormKind kind) {
    const RectMesh& mesh = field.mesh();
    const QuadratureRule rule = gauss_rule(quad_order);
    const double area = mesh.hx() * mesh.hy();
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (int e = 0; e < static_cast<int>(mesh.num_elements()); ++e) {
        const Point origin = mesh.lower_left(e);
        for (const auto& q : rule.points) {
            const FieldEval h = field.evaluate_in_element(e, q.xi, q.eta);
            const FieldEval ex = exact(origin.x + q.xi * mesh.hx(), origin.y + q.eta * mesh.hy());
            const double w = q.weight * area;
            const double e0 = ex.value - h.value;
            const double ex_ = ex.dx - h.dx;
            const double ey = ex.dy - h.dy;
            const double exx = ex.dxx - h.dxx;
            const double exy = ex.dxy - h.dxy;
            const double eyy = ex.dyy - h.dyy;
            s0 += w * e0 * e0;
            s1 += w * (ex_ * ex_ + ey * ey);
            s2 += w * (exx * exx + 2.0 * exy * exy + eyy * eyy);
        }
    }
    ErrorReport r;
    r.l2 = std::sqrt(s0);
    if (kind == NormKind::Full) {
        r.h1 = std::sqrt(s0 + s1);
        r.h2 = std::sqrt(s0 + s1 + s2);
    } else {
        r.h1 = std::sqrt(s1);
        r.h2 = std::sqrt(s2);
    }
    return r;
}

ErrorReport error_norms(const DiscreteField& field, const ManufacturedProblem& problem, int quad_order,
                        NormKind kind) {
    return error_norms(field, [&](double x, double y) { return problem.psi(x, y); }, quad_order, kind);
}

std::vector<FieldSample> sample_field(const DiscreteField& field, int n) {
    if (n < 2) throw InvalidArgument("sample_field: resolution must be >= 2");
    std::vector<FieldSample> out;
    out.reserve(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
        const double y = static_cast<double>(j) / (n - 1);
        for (int i = 0; i < n; ++i) {
            const double x = static_cast<double>(i) / (n - 1);
            const FieldEval f = field.evaluate(x, y);
            out.push_back({x, y, f.value, f.dy, -f.dx});
        }
    }
    return out;
}

std::vector<ProfilePoint> velocity_profile(const DiscreteField& field, ProfileLine line, int samples) {
    if (samples < 2) throw InvalidArgument("velocity_profile: need at least 2 samples");
    if (!(line.c >= 0.0 && line.c <= 1.0)) throw InvalidArgument("velocity_profile: line must lie in [0,1]");
    std::vector<ProfilePoint> out;
    out.reserve(samples);
    for (int k = 0; k < samples; ++k) {
        const double s = static_cast<double>(k) / (samples - 1);
        if (line.axis == ProfileAxis::Vertical) {
            out.push_back({s, field.evaluate(line.c, s).dy});
        } else {
            out.push_back({s, -field.evaluate(s, line.c).dx});
        }
    }
    return out;
}

}  // namespace sfns
