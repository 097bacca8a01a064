#include "sfns/mesh.hpp"

#include <algorithm>
#include <string>

#include "sfns/error.hpp"

namespace sfns {

RectMesh::RectMesh(int nx, int ny) : nx_(nx), ny_(ny) {
    if (nx < 1 || ny < 1) {
        throw InvalidArgument("RectMesh: element counts must be >= 1, got (" + std::to_string(nx) +
                              ", " + std::to_string(ny) + ")");
    }
    hx_ = 1.0 / nx;
    hy_ = 1.0 / ny;

    nodes_.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            // Exact endpoints: i/nx instead of i*hx so that x = 1 is hit exactly.
            nodes_.push_back({static_cast<double>(i) / nx, static_cast<double>(j) / ny});
        }
    }

    elements_.reserve(static_cast<std::size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            elements_.push_back({node_index(i, j), node_index(i + 1, j), node_index(i + 1, j + 1),
                                 node_index(i, j + 1)});
        }
    }
}

Point RectMesh::lower_left(int element) const {
    return nodes_[elements_[element][0]];
}

RectMesh build_uniform(int nx, int ny) {
    return RectMesh(nx, ny);
}

RectMesh refine_halve(const RectMesh& mesh) {
    return RectMesh(2 * mesh.nx(), 2 * mesh.ny());
}

bool BoundaryInfo::is_corner(int node) const {
    switch (classes[node]) {
        case NodeClass::CornerLowerLeft:
        case NodeClass::CornerLowerRight:
        case NodeClass::CornerUpperRight:
        case NodeClass::CornerUpperLeft:
            return true;
        default:
            return false;
    }
}

std::size_t BoundaryInfo::boundary_count() const {
    return static_cast<std::size_t>(
        std::count_if(classes.begin(), classes.end(), [](NodeClass c) { return c != NodeClass::Interior; }));
}

BoundaryInfo classify_boundary(const RectMesh& mesh) {
    BoundaryInfo info;
    info.classes.resize(mesh.num_nodes(), NodeClass::Interior);
    const int nx = mesh.nx();
    const int ny = mesh.ny();
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            const bool left = i == 0;
            const bool right = i == nx;
            const bool bottom = j == 0;
            const bool top = j == ny;
            NodeClass c = NodeClass::Interior;
            if (bottom && left) c = NodeClass::CornerLowerLeft;
            else if (bottom && right) c = NodeClass::CornerLowerRight;
            else if (top && right) c = NodeClass::CornerUpperRight;
            else if (top && left) c = NodeClass::CornerUpperLeft;
            else if (left) c = NodeClass::Left;
            else if (right) c = NodeClass::Right;
            else if (bottom) c = NodeClass::Bottom;
            else if (top) c = NodeClass::Top;
            info.classes[mesh.node_index(i, j)] = c;
        }
    }
    return info;
}

}  // namespace sfns
