#pragma once

#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

#include "sfns/bfs_element.hpp"
#include "sfns/mesh.hpp"

namespace sfns {

using Vector = std::vector<double>;

/// Coefficients over all DOFs of a space, fixed entries included.
using DofVector = std::vector<double>;

/// Every DOF of every boundary node is zero.
struct ClampedHomogeneous {};

/// Clamped walls with a tangential lid velocity on y = 1. With u = psi_y the
/// lid speed is imposed on the Dy DOF of the top nodes between the corners.
struct LidDriven {
    double lid_speed = 1.0;
};

using BoundarySpec = std::variant<ClampedHomogeneous, LidDriven>;

/// Compressed sparse row pattern over the free DOFs, with columns sorted
/// ascending in each row.
struct CsrPattern {
    std::vector<std::int64_t> row_ptr;
    std::vector<int> col;

    int rows() const { return static_cast<int>(row_ptr.size()) - 1; }
    std::int64_t nnz() const { return row_ptr.empty() ? 0 : row_ptr.back(); }
};

/// BFS finite element space on a RectMesh with essential boundary data.
///
/// Global DOF index is 4*node + kind. Free DOFs are numbered in increasing
/// global order. The sparsity pattern of the free-free block and a per-element
/// scatter table (local 16x16 entry -> CSR slot, or -1 when the row or the
/// column is fixed) are built once on construction.
class FeSpace {
public:
    explicit FeSpace(RectMesh mesh, BoundarySpec bc = ClampedHomogeneous{});

    const RectMesh& mesh() const { return mesh_; }
    const BoundarySpec& boundary() const { return bc_; }

    int n_dofs() const { return static_cast<int>(fixed_.size()); }
    int n_free() const { return static_cast<int>(free_to_global_.size()); }
    int n_fixed() const { return n_dofs() - n_free(); }

    static int global_dof(int node, DofKind kind) { return node * kKindsPerNode + static_cast<int>(kind); }

    bool is_fixed(int dof) const { return fixed_[dof] != 0; }
    double fixed_value(int dof) const { return fixed_value_[dof]; }
    /// Free index of a global DOF, or -1 when it is fixed.
    int free_index(int dof) const { return global_to_free_[dof]; }
    const std::vector<int>& free_dofs() const { return free_to_global_; }

    /// Global DOF indices of an element in local order.
    std::array<int, kLocalDofs> element_dofs(int element) const;

    const CsrPattern& pattern() const { return *pattern_; }
    const std::shared_ptr<const CsrPattern>& shared_pattern() const { return pattern_; }
    /// CSR slot of local entry (row a, column b) of an element, or -1.
    std::int64_t scatter_slot(int element, int a, int b) const {
        return (*scatter_)[static_cast<std::size_t>(element) * kLocalDofs * kLocalDofs + a * kLocalDofs + b];
    }

    /// DofVector with the boundary data in fixed entries and zero elsewhere.
    DofVector lift() const;
    /// Free entries of a full coefficient vector.
    Vector restrict_free(const DofVector& full) const;
    /// Full coefficient vector from free values plus the boundary data.
    DofVector expand(const Vector& free) const;

private:
    RectMesh mesh_;
    BoundarySpec bc_;
    std::vector<char> fixed_;
    std::vector<double> fixed_value_;
    std::vector<int> global_to_free_;
    std::vector<int> free_to_global_;
    std::shared_ptr<const CsrPattern> pattern_;
    std::shared_ptr<const std::vector<std::int64_t>> scatter_;
};

/// Same mesh, new boundary data.
FeSpace apply_bc(const FeSpace& space, const BoundarySpec& bc);

}  // namespace sfns
