#include "surfstokes/mesh/base_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include <Eigen/Geometry>

namespace surfstokes::mesh {

BaseMesh::BaseMesh(std::vector<Eigen::Vector3d> vertices, std::vector<Triangle> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
    struct Use {
        int a, b, tri;
    };
    std::vector<Use> uses;
    uses.reserve(3 * triangles_.size());
    for (int t = 0; t < num_triangles(); ++t) {
        const Triangle& tri = triangles_[t];
        for (int e = 0; e < 3; ++e) {
            const int a = tri[e];
            const int b = tri[(e + 1) % 3];
            SURFSTOKES_THROW_IF(a == b || a < 0 || b < 0 || a >= num_vertices() ||
                                    b >= num_vertices(),
                                ErrorCode::DegenerateElement, "invalid triangle connectivity");
            uses.push_back({std::min(a, b), std::max(a, b), t});
        }
    }
    std::sort(uses.begin(), uses.end(), [](const Use& x, const Use& y) {
        return std::tie(x.a, x.b, x.tri) < std::tie(y.a, y.b, y.tri);
    });

    triangle_edges_.assign(triangles_.size(), {-1, -1, -1});
    for (std::size_t i = 0; i < uses.size();) {
        std::size_t j = i;
        while (j < uses.size() && uses[j].a == uses[i].a && uses[j].b == uses[i].b) ++j;
        SURFSTOKES_THROW_IF(j - i != 2, ErrorCode::DegenerateElement,
                            "edge (" + std::to_string(uses[i].a) + "," +
                                std::to_string(uses[i].b) + ") has " + std::to_string(j - i) +
                                " adjacent triangles");
        const int id = static_cast<int>(edges_.size());
        edges_.push_back({uses[i].a, uses[i].b});
        edge_triangles_.push_back({uses[i].tri, uses[i + 1].tri});
        for (std::size_t k = i; k < j; ++k) {
            const Triangle& tri = triangles_[uses[k].tri];
            for (int e = 0; e < 3; ++e) {
                const int a = tri[e];
                const int b = tri[(e + 1) % 3];
                if (std::min(a, b) == uses[i].a && std::max(a, b) == uses[i].b)
                    triangle_edges_[uses[k].tri][e] = id;
            }
        }
        i = j;
    }

    h_ = 0.0;
    h_min_ = std::numeric_limits<double>::infinity();
    for (const Triangle& tri : triangles_) {
        double d = 0.0;
        for (int e = 0; e < 3; ++e)
            d = std::max(d, (vertices_[tri[e]] - vertices_[tri[(e + 1) % 3]]).norm());
        h_ = std::max(h_, d);
        h_min_ = std::min(h_min_, d);
    }
}

MeshQuality mesh_quality(const BaseMesh& mesh) {
    MeshQuality q;
    q.min_angle_deg = 180.0;
    q.max_angle_deg = 0.0;
    const auto& v = mesh.vertices();
    for (const Triangle& tri : mesh.triangles()) {
        for (int e = 0; e < 3; ++e) {
            const Eigen::Vector3d a = v[tri[(e + 1) % 3]] - v[tri[e]];
            const Eigen::Vector3d b = v[tri[(e + 2) % 3]] - v[tri[e]];
            const double ang =
                std::atan2(a.cross(b).norm(), a.dot(b)) * 180.0 / std::numbers::pi;
            q.min_angle_deg = std::min(q.min_angle_deg, ang);
            q.max_angle_deg = std::max(q.max_angle_deg, ang);
        }
    }
    q.quasi_uniformity = mesh.h() / mesh.h_min();
    return q;
}

namespace {

BaseMesh icosahedron() {
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Eigen::Vector3d> v = {
        {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
        {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
    for (auto& x : v) x.normalize();
    std::vector<Triangle> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                               {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                               {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                               {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
    return {std::move(v), std::move(f)};
}

template <class MidpointFn>
BaseMesh split(const BaseMesh& mesh, MidpointFn&& midpoint) {
    std::vector<Eigen::Vector3d> v = mesh.vertices();
    const int nv = mesh.num_vertices();
    for (const auto& e : mesh.edges()) v.push_back(midpoint(mesh.vertices()[e[0]], mesh.vertices()[e[1]]));
    std::vector<Triangle> f;
    f.reserve(4 * mesh.triangles().size());
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const Triangle& tri = mesh.triangles()[t];
        const auto& te = mesh.triangle_edges()[t];
        const int m0 = nv + te[0];  // between tri[0], tri[1]
        const int m1 = nv + te[1];
        const int m2 = nv + te[2];
        f.push_back({tri[0], m0, m2});
        f.push_back({tri[1], m1, m0});
        f.push_back({tri[2], m2, m1});
        f.push_back({m0, m1, m2});
    }
    return {std::move(v), std::move(f)};
}

void check_level(int level) {
    SURFSTOKES_THROW_IF(level < 0 || level > kMaxLevel, ErrorCode::Config,
                        "mesh level must be in 0.." + std::to_string(kMaxLevel));
}

}  // namespace

BaseMesh icosphere(int level) {
    check_level(level);
    BaseMesh m = icosahedron();
    for (int l = 0; l < level; ++l)
        m = split(m, [](const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
            return Eigen::Vector3d((a + b).normalized());
        });
    return m;
}

BaseMesh refine(const BaseMesh& mesh, const geometry::LevelSetSurface& surface) {
    return split(mesh, [&](const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
        return surface.closest_point(0.5 * (a + b));
    });
}

BaseMesh orient_outward(const BaseMesh& mesh, const geometry::LevelSetSurface& surface) {
    std::vector<Triangle> f = mesh.triangles();
    const auto& v = mesh.vertices();
    for (Triangle& tri : f) {
        const Eigen::Vector3d nrm = (v[tri[1]] - v[tri[0]]).cross(v[tri[2]] - v[tri[0]]);
        const Eigen::Vector3d c = (v[tri[0]] + v[tri[1]] + v[tri[2]]) / 3.0;
        const Eigen::Vector3d n = surface.frame_at(surface.closest_point(c)).normal;
        if (nrm.dot(n) < 0.0) std::swap(tri[1], tri[2]);
    }
    return {mesh.vertices(), std::move(f)};
}

BaseMesh base_mesh_for(const geometry::LevelSetSurface& surface, int level) {
    check_level(level);
    using geometry::SurfaceKind;
    BaseMesh m;
    switch (surface.kind()) {
        case SurfaceKind::Sphere:
            return icosphere(level);
        case SurfaceKind::Varying: {
            const BaseMesh s = icosphere(level);
            std::vector<Eigen::Vector3d> v;
            v.reserve(s.vertices().size());
            for (const auto& x : s.vertices()) v.push_back(surface.from_unit_sphere(x));
            m = BaseMesh(std::move(v), s.triangles());
            break;
        }
        case SurfaceKind::Biconcave: {
            const BaseMesh s = icosphere(0);
            std::vector<Eigen::Vector3d> v;
            for (const auto& x : s.vertices()) v.push_back(surface.from_unit_sphere(x));
            m = BaseMesh(std::move(v), s.triangles());
            for (int l = 0; l < level; ++l) m = refine(m, surface);
            break;
        }
    }
    return orient_outward(m, surface);
}

}  // namespace surfstokes::mesh
