#include "sfns/fe_space.hpp"

#include <algorithm>
#include <cmath>

#include "sfns/error.hpp"

namespace sfns {

namespace {

struct FixedDof {
    bool fixed = false;
    double value = 0.0;
};

// Constraint recipe for one boundary node.
FixedDof constraint_for(const BoundarySpec& bc, NodeClass cls, DofKind kind) {
    if (cls == NodeClass::Interior) return {};
    if (const auto* lid = std::get_if<LidDriven>(&bc)) {
        // Corners belong to the walls.
        if (cls == NodeClass::Top && kind == DofKind::Dy) return {true, lid->lid_speed};
    }
    return {true, 0.0};
}

}  // namespace

FeSpace::FeSpace(RectMesh mesh, BoundarySpec bc) : mesh_(std::move(mesh)), bc_(bc) {
    if (const auto* lid = std::get_if<LidDriven>(&bc_); lid && !std::isfinite(lid->lid_speed)) {
        throw InvalidArgument("LidDriven: lid speed must be finite");
    }
    const BoundaryInfo info = classify_boundary(mesh_);
    const int n_nodes = static_cast<int>(mesh_.num_nodes());
    const int n = n_nodes * kKindsPerNode;
    fixed_.assign(n, 0);
    fixed_value_.assign(n, 0.0);
    global_to_free_.assign(n, -1);

    for (int node = 0; node < n_nodes; ++node) {
        for (int kind = 0; kind < kKindsPerNode; ++kind) {
            const int dof = node * kKindsPerNode + kind;
            const FixedDof c = constraint_for(bc_, info.classes[node], static_cast<DofKind>(kind));
            if (c.fixed) {
                fixed_[dof] = 1;
                fixed_value_[dof] = c.value;
            } else {
                global_to_free_[dof] = static_cast<int>(free_to_global_.size());
                free_to_global_.push_back(dof);
            }
        }
    }

    // Node adjacency through shared elements (at most 9 neighbours on a
    // structured quad mesh), then expanded to DOFs.
    const int nx = mesh_.nx();
    const int ny = mesh_.ny();
    auto pattern = std::make_shared<CsrPattern>();
    pattern->row_ptr.assign(free_to_global_.size() + 1, 0);
    std::vector<int> row_cols;
    for (std::size_t r = 0; r < free_to_global_.size(); ++r) {
        const int dof = free_to_global_[r];
        const int node = dof / kKindsPerNode;
        const int i = node % (nx + 1);
        const int j = node / (nx + 1);
        row_cols.clear();
        for (int jj = std::max(0, j - 1); jj <= std::min(ny, j + 1); ++jj) {
            for (int ii = std::max(0, i - 1); ii <= std::min(nx, i + 1); ++ii) {
                const int nb = mesh_.node_index(ii, jj);
                for (int kind = 0; kind < kKindsPerNode; ++kind) {
                    const int f = global_to_free_[nb * kKindsPerNode + kind];
                    if (f >= 0) row_cols.push_back(f);
                }
            }
        }
        std::sort(row_cols.begin(), row_cols.end());
        pattern->col.insert(pattern->col.end(), row_cols.begin(), row_cols.end());
        pattern->row_ptr[r + 1] = static_cast<std::int64_t>(pattern->col.size());
    }

    auto scatter = std::make_shared<std::vector<std::int64_t>>(mesh_.num_elements() * kLocalDofs * kLocalDofs, -1);
    for (int e = 0; e < static_cast<int>(mesh_.num_elements()); ++e) {
        const auto dofs = element_dofs(e);
        for (int a = 0; a < kLocalDofs; ++a) {
            const int row = global_to_free_[dofs[a]];
            if (row < 0) continue;
            const auto begin = pattern->col.begin() + pattern->row_ptr[row];
            const auto end = pattern->col.begin() + pattern->row_ptr[row + 1];
            for (int b = 0; b < kLocalDofs; ++b) {
                const int col = global_to_free_[dofs[b]];
                if (col < 0) continue;
                const auto it = std::lower_bound(begin, end, col);
                (*scatter)[static_cast<std::size_t>(e) * kLocalDofs * kLocalDofs + a * kLocalDofs + b] =
                    it - pattern->col.begin();
            }
        }
    }
    pattern_ = std::move(pattern);
    scatter_ = std::move(scatter);
}

std::array<int, kLocalDofs> FeSpace::element_dofs(int element) const {
    const auto& verts = mesh_.elements()[element];
    std::array<int, kLocalDofs> dofs{};
    for (int v = 0; v < 4; ++v) {
        for (int kind = 0; kind < kKindsPerNode; ++kind) {
            dofs[v * kKindsPerNode + kind] = verts[v] * kKindsPerNode + kind;
        }
    }
    return dofs;
}

DofVector FeSpace::lift() const {
    return fixed_value_;
}

Vector FeSpace::restrict_free(const DofVector& full) const {
    if (static_cast<int>(full.size()) != n_dofs()) {
        throw InvalidArgument("restrict_free: vector length does not match the space");
    }
    Vector out(free_to_global_.size());
    for (std::size_t r = 0; r < free_to_global_.size(); ++r) out[r] = full[free_to_global_[r]];
    return out;
}

DofVector FeSpace::expand(const Vector& free) const {
    if (static_cast<int>(free.size()) != n_free()) {
        throw InvalidArgument("expand: vector length does not match the free DOF count");
    }
    DofVector out = fixed_value_;
    for (std::size_t r = 0; r < free_to_global_.size(); ++r) out[free_to_global_[r]] = free[r];
    return out;
}

FeSpace apply_bc(const FeSpace& space, const BoundarySpec& bc) {
    return FeSpace(space.mesh(), bc);
}

}  // namespace sfns
