#include "sfns/field.hpp"

#include <algorithm>
#include <cmath>

#include "sfns/error.hpp"

namespace sfns {

DiscreteField::DiscreteField(RectMesh mesh, DofVector coefficients)
    : mesh_(std::move(mesh)), coeffs_(std::move(coefficients)) {
    if (coeffs_.size() != mesh_.num_nodes() * kKindsPerNode) {
        throw InvalidArgument("DiscreteField: coefficient count does not match the mesh");
    }
}

DiscreteField::DiscreteField(const FeSpace& space, DofVector coefficients)
    : DiscreteField(space.mesh(), std::move(coefficients)) {}

ElementLocation locate(const RectMesh& mesh, double x, double y) {
    const double sx = x * mesh.nx();
    const double sy = y * mesh.ny();
    const int i = std::clamp(static_cast<int>(std::floor(sx)), 0, mesh.nx() - 1);
    const int j = std::clamp(static_cast<int>(std::floor(sy)), 0, mesh.ny() - 1);
    return {mesh.element_index(i, j), sx - i, sy - j};
}

FieldEval DiscreteField::evaluate(double x, double y) const {
    const ElementLocation loc = locate(mesh_, x, y);
    return evaluate_in_element(loc.element, loc.xi, loc.eta);
}

FieldEval DiscreteField::evaluate_in_element(int element, double xi, double eta) const {
    const BasisEval basis = to_physical(shape_eval(xi, eta), mesh_.hx(), mesh_.hy());
    const auto& verts = mesh_.elements()[element];
    FieldEval out;
    for (int v = 0; v < 4; ++v) {
        for (int kind = 0; kind < kKindsPerNode; ++kind) {
            const int k = v * kKindsPerNode + kind;
            const double c = coeffs_[static_cast<std::size_t>(verts[v]) * kKindsPerNode + kind];
            out.value += c * basis.value[k];
            out.dx += c * basis.dx[k];
            out.dy += c * basis.dy[k];
            out.dxx += c * basis.dxx[k];
            out.dxy += c * basis.dxy[k];
            out.dyy += c * basis.dyy[k];
        }
    }
    return out;
}

DofVector interpolate(const RectMesh& mesh, const HermiteData& g) {
    DofVector out(mesh.num_nodes() * kKindsPerNode);
    for (std::size_t node = 0; node < mesh.num_nodes(); ++node) {
        const Point p = mesh.nodes()[node];
        const auto d = g(p.x, p.y);
        for (int kind = 0; kind < kKindsPerNode; ++kind) out[node * kKindsPerNode + kind] = d[kind];
    }
    return out;
}

}  // namespace sfns
