#include "rayfuse/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rayfuse/error.hpp"
#include "rayfuse/parallel.hpp"
#include "rayfuse/rng.hpp"

namespace rayfuse {

void validate(const TriangleMesh& mesh) {
    const auto n = static_cast<std::uint32_t>(mesh.vertices.size());
    for (const auto& tri : mesh.triangles)
        for (const std::uint32_t idx : tri)
            if (idx >= n) throw DomainError("mesh: triangle vertex index out of range");
}

std::vector<Triangle> flatten_triangles(const Scene& scene) {
    std::vector<Triangle> out;
    for (const MeshInstance& inst : scene.instances) {
        if (!inst.mesh) continue;
        validate(*inst.mesh);
        for (const auto& tri : inst.mesh->triangles)
            out.push_back({inst.world_from_mesh.apply(inst.mesh->vertices[tri[0]]),
                           inst.world_from_mesh.apply(inst.mesh->vertices[tri[1]]),
                           inst.world_from_mesh.apply(inst.mesh->vertices[tri[2]])});
    }
    return out;
}

std::optional<double> intersect_triangle(const Vec3& origin, const Vec3& direction,
                                         const Triangle& tri, double t_min) {
    const Vec3 e1 = tri.b - tri.a;
    const Vec3 e2 = tri.c - tri.a;
    const Vec3 pvec = cross(direction, e2);
    const double det = dot(e1, pvec);
    if (std::fabs(det) < 1e-15) return std::nullopt;
    const double inv_det = 1.0 / det;
    const Vec3 tvec = origin - tri.a;
    const double u = dot(tvec, pvec) * inv_det;
    if (u < 0.0 || u > 1.0) return std::nullopt;
    const Vec3 qvec = cross(tvec, e1);
    const double v = dot(direction, qvec) * inv_det;
    if (v < 0.0 || u + v > 1.0) return std::nullopt;
    const double t = dot(e2, qvec) * inv_det;
    if (t <= t_min) return std::nullopt;
    return t;
}

namespace {

struct BoundsAccum {
    Vec3 bmin{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
              std::numeric_limits<double>::infinity()};
    Vec3 bmax{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
              -std::numeric_limits<double>::infinity()};

    void add(const Vec3& p) {
        bmin = cwise_min(bmin, p);
        bmax = cwise_max(bmax, p);
    }
};

// Slab test; inv_dir may hold infinities on axis-parallel rays.
inline bool hits_box(const Vec3& origin, const Vec3& inv_dir, const Vec3& bmin, const Vec3& bmax,
                     double t_max) {
    double t0 = 0.0, t1 = t_max;
    {
        const double a = (bmin.x - origin.x) * inv_dir.x;
        const double b = (bmax.x - origin.x) * inv_dir.x;
        t0 = std::fmax(t0, std::fmin(a, b));
        t1 = std::fmin(t1, std::fmax(a, b));
    }
    {
        const double a = (bmin.y - origin.y) * inv_dir.y;
        const double b = (bmax.y - origin.y) * inv_dir.y;
        t0 = std::fmax(t0, std::fmin(a, b));
        t1 = std::fmin(t1, std::fmax(a, b));
    }
    {
        const double a = (bmin.z - origin.z) * inv_dir.z;
        const double b = (bmax.z - origin.z) * inv_dir.z;
        t0 = std::fmax(t0, std::fmin(a, b));
        t1 = std::fmin(t1, std::fmax(a, b));
    }
    return t0 <= t1;
}

}  // namespace

Bvh::Bvh(const Scene& scene) : Bvh(flatten_triangles(scene)) {}

Bvh::Bvh(std::vector<Triangle> triangles) : triangles_(std::move(triangles)) {
    if (triangles_.empty()) throw DomainError("bvh: empty scene");
    tri_ids_.resize(triangles_.size());
    std::iota(tri_ids_.begin(), tri_ids_.end(), 0u);
    nodes_.reserve(2 * triangles_.size());
    build(0, static_cast<std::uint32_t>(tri_ids_.size()), 1);
}

std::uint32_t Bvh::build(std::uint32_t first, std::uint32_t count, int level) {
    depth_ = std::max(depth_, level);

    BoundsAccum bounds;
    for (std::uint32_t i = 0; i < count; ++i) {
        const Triangle& tri = triangles_[tri_ids_[first + i]];
        bounds.add(tri.a);
        bounds.add(tri.b);
        bounds.add(tri.c);
    }

    const auto node_index = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back({bounds.bmin, bounds.bmax, first, count});
    if (count <= 4) return node_index;

    const Vec3 extent = bounds.bmax - bounds.bmin;
    int axis = 0;
    if (extent.y > extent.x) axis = 1;
    if (extent.z > (axis == 0 ? extent.x : extent.y)) axis = 2;

    auto centroid = [&](std::uint32_t id) {
        const Triangle& tri = triangles_[id];
        const Vec3 c = (1.0 / 3.0) * (tri.a + tri.b + tri.c);
        return axis == 0 ? c.x : axis == 1 ? c.y : c.z;
    };

    const std::uint32_t mid = count / 2;
    auto* begin = tri_ids_.data() + first;
    std::nth_element(begin, begin + mid, begin + count,
                     [&](std::uint32_t lhs, std::uint32_t rhs) {
                         const double cl = centroid(lhs), cr = centroid(rhs);
                         if (cl != cr) return cl < cr;
                         return lhs < rhs;  // deterministic total order
                     });

    build(first, mid, level + 1);  // left child lands at node_index + 1
    const std::uint32_t right = build(first + mid, count - mid, level + 1);
    nodes_[node_index].first = right;  // internal nodes store the right child
    nodes_[node_index].count = 0;
    return node_index;
}

std::optional<RayHit> Bvh::intersect(const Vec3& origin, const Vec3& direction,
                                     double t_min) const {
    const Vec3 inv_dir{1.0 / direction.x, 1.0 / direction.y, 1.0 / direction.z};

    double best_t = std::numeric_limits<double>::infinity();
    std::uint32_t best_id = 0;
    bool found = false;

    std::uint32_t stack[128];
    int top = 0;
    stack[top++] = 0;

    while (top > 0) {
        const std::uint32_t node_index = stack[--top];
        const Node& node = nodes_[node_index];
        if (!hits_box(origin, inv_dir, node.bmin, node.bmax, best_t)) continue;
        if (node.count > 0) {
            for (std::uint32_t i = 0; i < node.count; ++i) {
                const std::uint32_t id = tri_ids_[node.first + i];
                const auto t = intersect_triangle(origin, direction, triangles_[id], t_min);
                if (!t) continue;
                if (!found || *t < best_t || (*t == best_t && id < best_id)) {
                    best_t = *t;
                    best_id = id;
                    found = true;
                }
            }
        } else {
            stack[top++] = node.first;      // right child
            stack[top++] = node_index + 1;  // left child
        }
    }

    if (!found) return std::nullopt;
    return RayHit{best_t, best_id};
}

RenderResult render_depth(const Bvh& bvh, const RigidTransform& pose, const CameraIntrinsics& k,
                          int threads) {
    validate(k);
    RenderResult out;
    out.depth = DepthMap(k.width, k.height, 0.0);
    out.mask = BinaryMask(k.width, k.height, 0);

    const RigidTransform world_from_cam = pose.inverse();
    const Vec3 origin = world_from_cam.translation;
    const Mat3& cam_to_world = world_from_cam.rotation;

    parallel_for(static_cast<std::size_t>(k.height), threads, [&](std::size_t row) {
        const int j = static_cast<int>(row);
        for (int i = 0; i < k.width; ++i) {
            const Vec3 v_cam{(i - k.cx) / k.fx, (j - k.cy) / k.fy, 1.0};
            const double v_norm = norm(v_cam);
            const Vec3 dir =
                cam_to_world * Vec3{v_cam.x / v_norm, v_cam.y / v_norm, v_cam.z / v_norm};
            if (const auto hit = bvh.intersect(origin, dir)) {
                // t is metric along the unit ray, whose camera-frame z
                // component is 1/|v_cam|, so the z-depth is t / |v_cam|.
                out.depth.at(i, j) = hit->t / v_norm;
                out.mask.at(i, j) = 1;
            }
        }
    });
    return out;
}

RenderResult render_depth(const Scene& scene, const RigidTransform& pose,
                          const CameraIntrinsics& k, int threads) {
    return render_depth(Bvh(scene), pose, k, threads);
}

PointCloud sample_surface(const Scene& scene, std::size_t count, std::uint64_t seed) {
    return sample_surface(flatten_triangles(scene), count, seed);
}

PointCloud sample_surface(const std::vector<Triangle>& triangles, std::size_t count,
                          std::uint64_t seed) {
    if (triangles.empty()) throw DomainError("sample_surface: no triangles");

    std::vector<double> cdf(triangles.size());
    double total = 0.0;
    for (std::size_t i = 0; i < triangles.size(); ++i) {
        const Triangle& tri = triangles[i];
        total += 0.5 * norm(cross(tri.b - tri.a, tri.c - tri.a));
        cdf[i] = total;
    }
    if (!(total > 0.0)) throw DomainError("sample_surface: degenerate surface area");

    Pcg32 rng(seed, 0x5f3759df);
    PointCloud cloud;
    cloud.points.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
        const double pick = rng.uniform() * total;
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), pick);
        const std::size_t idx =
            std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), triangles.size() - 1);
        const Triangle& tri = triangles[idx];
        double u = rng.uniform();
        double v = rng.uniform();
        if (u + v > 1.0) {
            u = 1.0 - u;
            v = 1.0 - v;
        }
        cloud.points.push_back(tri.a + u * (tri.b - tri.a) + v * (tri.c - tri.a));
    }
    return cloud;
}

}  // namespace rayfuse
