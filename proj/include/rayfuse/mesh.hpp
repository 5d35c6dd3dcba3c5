#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "rayfuse/camera.hpp"
#include "rayfuse/cloud.hpp"

namespace rayfuse {

struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<std::uint32_t, 3>> triangles;
};

// Throws DomainError on out-of-range vertex indices.
void validate(const TriangleMesh& mesh);

struct MeshInstance {
    std::shared_ptr<const TriangleMesh> mesh;
    RigidTransform world_from_mesh;
};

struct Scene {
    std::vector<MeshInstance> instances;
};

struct Triangle {
    Vec3 a, b, c;
};

// World-space triangle soup of all instances, in instance then triangle order.
std::vector<Triangle> flatten_triangles(const Scene& scene);

struct RayHit {
    double t = 0.0;
    std::uint32_t triangle = 0;
};

// Moeller-Trumbore, no backface culling. Hits closer than t_min are ignored
// (self-intersection guard); `direction` need not be normalized but `t` is
// measured in its units.
std::optional<double> intersect_triangle(const Vec3& origin, const Vec3& direction,
                                         const Triangle& tri, double t_min = 1e-6);

// Axis-aligned BVH over the world-space triangles of a scene. Median split on
// the longest centroid axis, leaves hold at most 4 triangles. Immutable after
// construction; safe for concurrent queries.
class Bvh {
public:
    explicit Bvh(const Scene& scene);
    explicit Bvh(std::vector<Triangle> triangles);

    // Nearest hit with t > t_min; ties on t resolved to the lowest triangle
    // id so results are independent of traversal order.
    std::optional<RayHit> intersect(const Vec3& origin, const Vec3& direction,
                                    double t_min = 1e-6) const;

    const std::vector<Triangle>& triangles() const { return triangles_; }
    int depth() const { return depth_; }

private:
    struct Node {
        Vec3 bmin, bmax;
        // Leaf (count > 0): `first` indexes into tri_ids_. Internal
        // (count == 0): `first` is the right child; the left child is the
        // next node in the array.
        std::uint32_t first = 0;
        std::uint32_t count = 0;
    };

    std::uint32_t build(std::uint32_t first, std::uint32_t count, int level);

    std::vector<Triangle> triangles_;
    std::vector<std::uint32_t> tri_ids_;
    std::vector<Node> nodes_;
    int depth_ = 0;
};

struct RenderResult {
    DepthMap depth;
    BinaryMask mask;
};

// Casts one ray per pixel center and records the z-depth of the nearest hit;
// misses get depth 0 and mask 0. Deterministic and independent of `threads`.
RenderResult render_depth(const Bvh& bvh, const RigidTransform& pose, const CameraIntrinsics& k,
                          int threads = 1);

// Convenience overload that builds a throwaway BVH.
RenderResult render_depth(const Scene& scene, const RigidTransform& pose,
                          const CameraIntrinsics& k, int threads = 1);

// Uniform area-weighted surface sampling with a seeded generator.
PointCloud sample_surface(const Scene& scene, std::size_t count, std::uint64_t seed);
PointCloud sample_surface(const std::vector<Triangle>& triangles, std::size_t count,
                          std::uint64_t seed);

}  // namespace rayfuse
