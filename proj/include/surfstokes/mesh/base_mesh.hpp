#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "surfstokes/geometry/surface.hpp"

namespace surfstokes::mesh {

using Triangle = std::array<int, 3>;

/// Flat closed triangulation with vertices on the surface.
///
/// Edges are the unique vertex pairs (a < b) sorted lexicographically.
/// triangle_edges[t][e] is the global edge joining local vertices e and
/// (e + 1) % 3 of triangle t.
class BaseMesh {
public:
    BaseMesh() = default;
    /// Builds the edge tables. Throws DegenerateElement unless every edge has
    /// exactly two adjacent triangles.
    BaseMesh(std::vector<Eigen::Vector3d> vertices, std::vector<Triangle> triangles);

    const std::vector<Eigen::Vector3d>& vertices() const { return vertices_; }
    const std::vector<Triangle>& triangles() const { return triangles_; }
    const std::vector<std::array<int, 2>>& edges() const { return edges_; }
    const std::vector<std::array<int, 2>>& edge_triangles() const { return edge_triangles_; }
    const std::vector<std::array<int, 3>>& triangle_edges() const { return triangle_edges_; }

    int num_vertices() const { return static_cast<int>(vertices_.size()); }
    int num_triangles() const { return static_cast<int>(triangles_.size()); }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    int euler_characteristic() const { return num_vertices() - num_edges() + num_triangles(); }

    /// Largest flat-triangle diameter.
    double h() const { return h_; }
    /// Smallest flat-triangle diameter.
    double h_min() const { return h_min_; }

private:
    std::vector<Eigen::Vector3d> vertices_;
    std::vector<Triangle> triangles_;
    std::vector<std::array<int, 2>> edges_;
    std::vector<std::array<int, 2>> edge_triangles_;
    std::vector<std::array<int, 3>> triangle_edges_;
    double h_ = 0.0;
    double h_min_ = 0.0;
};

struct MeshQuality {
    double min_angle_deg = 0.0;
    double max_angle_deg = 0.0;
    double quasi_uniformity = 0.0;  // max h_T / min h_T
};

MeshQuality mesh_quality(const BaseMesh& mesh);

inline constexpr int kMaxLevel = 7;

/// Regular icosahedron refined `level` times by 1:4 splitting with vertices
/// pushed to the unit sphere.
BaseMesh icosphere(int level);

/// Uniform 1:4 split; new midpoints are closest-point projected onto the
/// surface.
BaseMesh refine(const BaseMesh& mesh, const geometry::LevelSetSurface& surface);

/// Mesh family used by the experiments:
///   sphere:    icosphere(level);
///   varying:   icosphere(level) mapped through the sphere map, then projected;
///   biconcave: projected icosahedron refined `level` times on the surface.
BaseMesh base_mesh_for(const geometry::LevelSetSurface& surface, int level);

/// Swaps the orientation of every triangle whose flat normal points inwards.
BaseMesh orient_outward(const BaseMesh& mesh, const geometry::LevelSetSurface& surface);

}  // namespace surfstokes::mesh
