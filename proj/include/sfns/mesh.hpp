#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace sfns {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Uniform nx-by-ny rectangular partition of the unit square.
///
/// Nodes are numbered lexicographically with x fastest: node (i, j) has
/// index j*(nx+1) + i. Element (i, j) spans [i*hx, (i+1)*hx] x [j*hy, (j+1)*hy]
/// and lists its vertices counter-clockwise from the lower-left corner.
class RectMesh {
public:
    RectMesh(int nx, int ny);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double hx() const { return hx_; }
    double hy() const { return hy_; }
    /// Mesh width max(hx, hy).
    double h() const { return hx_ > hy_ ? hx_ : hy_; }

    std::size_t num_nodes() const { return nodes_.size(); }
    std::size_t num_elements() const { return elements_.size(); }

    const std::vector<Point>& nodes() const { return nodes_; }
    const std::vector<std::array<int, 4>>& elements() const { return elements_; }

    int node_index(int i, int j) const { return j * (nx_ + 1) + i; }
    int element_index(int i, int j) const { return j * nx_ + i; }
    Point lower_left(int element) const;

    bool operator==(const RectMesh& other) const { return nx_ == other.nx_ && ny_ == other.ny_; }

private:
    int nx_;
    int ny_;
    double hx_;
    double hy_;
    std::vector<Point> nodes_;
    std::vector<std::array<int, 4>> elements_;
};

/// Throws InvalidArgument when nx or ny is not positive.
RectMesh build_uniform(int nx, int ny);

/// Nested refinement: every element is split into four.
RectMesh refine_halve(const RectMesh& mesh);

enum class NodeClass {
    Interior,
    Left,
    Right,
    Bottom,
    Top,
    CornerLowerLeft,
    CornerLowerRight,
    CornerUpperRight,
    CornerUpperLeft,
};

struct BoundaryInfo {
    std::vector<NodeClass> classes;

    bool is_boundary(int node) const { return classes[node] != NodeClass::Interior; }
    bool is_corner(int node) const;
    std::size_t boundary_count() const;
};

BoundaryInfo classify_boundary(const RectMesh& mesh);

}  // namespace sfns
