#include "sfns/assembly.hpp"

#include <cmath>
#include <string>

#include "sfns/error.hpp"

namespace sfns {

namespace {

using LocalMatrix = std::array<double, kLocalDofs * kLocalDofs>;
using LocalVector = std::array<double, kLocalDofs>;

// Physical basis at the quadrature points. All elements of a uniform mesh are
// congruent, so one table serves every element.
struct ElementTables {
    std::vector<BasisEval> basis;
    std::vector<double> weight;  // Gauss weight times the element area
    std::vector<std::array<double, 2>> offset;  // physical offset from lower-left vertex

    ElementTables(const RectMesh& mesh, int order) {
        const QuadratureRule rule = gauss_rule(order);
        const double area = mesh.hx() * mesh.hy();
        for (const auto& q : rule.points) {
            basis.push_back(to_physical(shape_eval(q.xi, q.eta), mesh.hx(), mesh.hy()));
            weight.push_back(q.weight * area);
            offset.push_back({q.xi * mesh.hx(), q.eta * mesh.hy()});
        }
    }

    std::size_t size() const { return weight.size(); }
};

void check_space_vector(const FeSpace& space, const DofVector& v, const char* what) {
    if (static_cast<int>(v.size()) != space.n_dofs()) {
        throw InvalidArgument(std::string(what) + ": coefficient vector length " + std::to_string(v.size()) +
                              " does not match the space (" + std::to_string(space.n_dofs()) + ")");
    }
}

void check_reynolds(double re) {
    if (!(re > 0.0) || !std::isfinite(re)) throw InvalidArgument("Reynolds number must be positive and finite");
}

LocalVector gather(const FeSpace& space, int e, const DofVector& full) {
    const auto dofs = space.element_dofs(e);
    LocalVector c{};
    for (int k = 0; k < kLocalDofs; ++k) c[k] = full[dofs[k]];
    return c;
}

FieldEval field_at(const BasisEval& b, const LocalVector& c) {
    FieldEval f;
    for (int k = 0; k < kLocalDofs; ++k) {
        f.value += c[k] * b.value[k];
        f.dx += c[k] * b.dx[k];
        f.dy += c[k] * b.dy[k];
        f.dxx += c[k] * b.dxx[k];
        f.dxy += c[k] * b.dxy[k];
        f.dyy += c[k] * b.dyy[k];
    }
    return f;
}

// Runs body(e) over every element, colour by colour in parallel mode.
template <typename Body>
void for_each_element(const RectMesh& mesh, Execution exec, Body&& body) {
    const int nx = mesh.nx();
    const int ny = mesh.ny();
    if (exec == Execution::Serial) {
        for (int e = 0; e < nx * ny; ++e) body(e);
        return;
    }
    for (int color = 0; color < 4; ++color) {
        const int ci = color % 2;
        const int cj = color / 2;
        const int nci = (nx - ci + 1) / 2;
        const int ncj = (ny - cj + 1) / 2;
        const int count = nci * ncj;
#pragma omp parallel for schedule(static)
        for (int k = 0; k < count; ++k) {
            const int i = ci + 2 * (k % nci);
            const int j = cj + 2 * (k / nci);
            body(j * nx + i);
        }
    }
}

template <typename Kernel>
CsrMatrix assemble_matrix(const FeSpace& space, Execution exec, Kernel&& kernel) {
    CsrMatrix m(space.shared_pattern());
    auto values = m.values();
    for_each_element(space.mesh(), exec, [&](int e) {
        LocalMatrix local{};
        kernel(e, local);
        for (int a = 0; a < kLocalDofs; ++a) {
            for (int b = 0; b < kLocalDofs; ++b) {
                const std::int64_t slot = space.scatter_slot(e, a, b);
                if (slot >= 0) values[slot] += local[a * kLocalDofs + b];
            }
        }
    });
    return m;
}

template <typename Kernel>
Vector assemble_vector(const FeSpace& space, Execution exec, Kernel&& kernel) {
    Vector out(space.n_free(), 0.0);
    for_each_element(space.mesh(), exec, [&](int e) {
        LocalVector local{};
        kernel(e, local);
        const auto dofs = space.element_dofs(e);
        for (int a = 0; a < kLocalDofs; ++a) {
            const int row = space.free_index(dofs[a]);
            if (row >= 0) out[row] += local[a];
        }
    });
    return out;
}

LocalMatrix local_biharmonic(const ElementTables& t, double scale) {
    LocalMatrix local{};
    for (std::size_t q = 0; q < t.size(); ++q) {
        const BasisEval& b = t.basis[q];
        const double w = scale * t.weight[q];
        for (int a = 0; a < kLocalDofs; ++a) {
            const double la = w * b.laplacian(a);
            for (int c = 0; c < kLocalDofs; ++c) local[a * kLocalDofs + c] += la * b.laplacian(c);
        }
    }
    return local;
}

// B(xi): row a (test), column c (trial): lap(xi) (N_c,y N_a,x - N_c,x N_a,y).
void add_first_slot(const ElementTables& t, const LocalVector& xi, LocalMatrix& local) {
    for (std::size_t q = 0; q < t.size(); ++q) {
        const BasisEval& b = t.basis[q];
        const double w = t.weight[q] * field_at(b, xi).laplacian();
        if (w == 0.0) continue;
        for (int a = 0; a < kLocalDofs; ++a) {
            const double ax = w * b.dx[a];
            const double ay = w * b.dy[a];
            for (int c = 0; c < kLocalDofs; ++c) local[a * kLocalDofs + c] += b.dy[c] * ax - b.dx[c] * ay;
        }
    }
}

// C(psi): row a, column c: lap(N_c) (psi_y N_a,x - psi_x N_a,y).
void add_middle_slot(const ElementTables& t, const LocalVector& psi, LocalMatrix& local) {
    for (std::size_t q = 0; q < t.size(); ++q) {
        const BasisEval& b = t.basis[q];
        const FieldEval f = field_at(b, psi);
        for (int a = 0; a < kLocalDofs; ++a) {
            const double g = t.weight[q] * (f.dy * b.dx[a] - f.dx * b.dy[a]);
            if (g == 0.0) continue;
            for (int c = 0; c < kLocalDofs; ++c) local[a * kLocalDofs + c] += g * b.laplacian(c);
        }
    }
}

}  // namespace

CsrMatrix assemble_a(const FeSpace& space, double reynolds, const AssemblyOptions& opts) {
    check_reynolds(reynolds);
    const ElementTables t(space.mesh(), opts.quadrature);
    const LocalMatrix a = local_biharmonic(t, 1.0 / reynolds);
    return assemble_matrix(space, opts.execution, [&](int, LocalMatrix& local) { local = a; });
}

CsrMatrix assemble_b_first_slot(const FeSpace& space, const DofVector& xi, const AssemblyOptions& opts) {
    check_space_vector(space, xi, "assemble_b_first_slot");
    const ElementTables t(space.mesh(), opts.quadrature);
    return assemble_matrix(space, opts.execution,
                           [&](int e, LocalMatrix& local) { add_first_slot(t, gather(space, e, xi), local); });
}

CsrMatrix assemble_b_middle_slot(const FeSpace& space, const DofVector& psi, const AssemblyOptions& opts) {
    check_space_vector(space, psi, "assemble_b_middle_slot");
    const ElementTables t(space.mesh(), opts.quadrature);
    return assemble_matrix(space, opts.execution,
                           [&](int e, LocalMatrix& local) { add_middle_slot(t, gather(space, e, psi), local); });
}

CsrMatrix assemble_jacobian(const FeSpace& space, double reynolds, const DofVector& psi,
                            const AssemblyOptions& opts) {
    check_reynolds(reynolds);
    check_space_vector(space, psi, "assemble_jacobian");
    const ElementTables t(space.mesh(), opts.quadrature);
    const LocalMatrix a = local_biharmonic(t, 1.0 / reynolds);
    return assemble_matrix(space, opts.execution, [&](int e, LocalMatrix& local) {
        local = a;
        const LocalVector c = gather(space, e, psi);
        add_first_slot(t, c, local);
        add_middle_slot(t, c, local);
    });
}

CsrMatrix assemble_oseen(const FeSpace& space, double reynolds, const DofVector& xi, const AssemblyOptions& opts) {
    check_reynolds(reynolds);
    check_space_vector(space, xi, "assemble_oseen");
    const ElementTables t(space.mesh(), opts.quadrature);
    const LocalMatrix a = local_biharmonic(t, 1.0 / reynolds);
    return assemble_matrix(space, opts.execution, [&](int e, LocalMatrix& local) {
        local = a;
        add_first_slot(t, gather(space, e, xi), local);
    });
}

Vector assemble_load(const FeSpace& space, const VectorField& f, const AssemblyOptions& opts) {
    const ElementTables t(space.mesh(), opts.quadrature);
    const RectMesh& mesh = space.mesh();
    return assemble_vector(space, opts.execution, [&](int e, LocalVector& local) {
        const Point origin = mesh.lower_left(e);
        for (std::size_t q = 0; q < t.size(); ++q) {
            const BasisEval& b = t.basis[q];
            const auto fv = f(origin.x + t.offset[q][0], origin.y + t.offset[q][1]);
            const double w = t.weight[q];
            for (int a = 0; a < kLocalDofs; ++a) local[a] += w * (fv[0] * b.dy[a] - fv[1] * b.dx[a]);
        }
    });
}

Vector apply_oseen(const FeSpace& space, double reynolds, const DofVector& xi, const DofVector& v,
                   const AssemblyOptions& opts) {
    check_reynolds(reynolds);
    check_space_vector(space, xi, "apply_oseen");
    check_space_vector(space, v, "apply_oseen");
    const ElementTables t(space.mesh(), opts.quadrature);
    const double inv_re = 1.0 / reynolds;
    return assemble_vector(space, opts.execution, [&](int e, LocalVector& local) {
        const LocalVector cx = gather(space, e, xi);
        const LocalVector cv = gather(space, e, v);
        for (std::size_t q = 0; q < t.size(); ++q) {
            const BasisEval& b = t.basis[q];
            const FieldEval fx = field_at(b, cx);
            const FieldEval fv = field_at(b, cv);
            const double w = t.weight[q];
            const double visc = w * inv_re * fv.laplacian();
            const double conv = w * fx.laplacian();
            for (int a = 0; a < kLocalDofs; ++a) {
                local[a] += visc * b.laplacian(a) + conv * (fv.dy * b.dx[a] - fv.dx * b.dy[a]);
            }
        }
    });
}

Vector nonlinear_residual(const FeSpace& space, double reynolds, const DofVector& psi, const Vector& load,
                          const AssemblyOptions& opts) {
    if (static_cast<int>(load.size()) != space.n_free()) {
        throw InvalidArgument("nonlinear_residual: load length does not match the free DOF count");
    }
    Vector r = apply_oseen(space, reynolds, psi, psi, opts);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= load[i];
    return r;
}

}  // namespace sfns
