#pragma once

#include <functional>

#include "sfns/fe_space.hpp"

namespace sfns {

/// Value and derivatives to second order of a scalar field at a point.
struct FieldEval {
    double value = 0.0;
    double dx = 0.0;
    double dy = 0.0;
    double dxx = 0.0;
    double dxy = 0.0;
    double dyy = 0.0;

    double laplacian() const { return dxx + dyy; }
};

/// Hermite nodal data (value, d/dx, d/dy, d2/dxdy) of a smooth function.
using HermiteData = std::function<std::array<double, 4>(double x, double y)>;

/// A BFS finite element function: mesh plus coefficients over all DOFs.
class DiscreteField {
public:
    DiscreteField(RectMesh mesh, DofVector coefficients);
    DiscreteField(const FeSpace& space, DofVector coefficients);

    const RectMesh& mesh() const { return mesh_; }
    const DofVector& coefficients() const { return coeffs_; }

    /// Evaluates at (x, y) in the closed unit square. Points on element
    /// edges use the element to the lower-left, which is exact for a C1 field.
    FieldEval evaluate(double x, double y) const;
    FieldEval evaluate_in_element(int element, double xi, double eta) const;

private:
    RectMesh mesh_;
    DofVector coeffs_;
};

/// Nodal Hermite interpolant of a smooth function on a mesh.
DofVector interpolate(const RectMesh& mesh, const HermiteData& g);

/// Locates the element containing (x, y) and the reference coordinates in it.
struct ElementLocation {
    int element;
    double xi;
    double eta;
};
ElementLocation locate(const RectMesh& mesh, double x, double y);

}  // namespace sfns
