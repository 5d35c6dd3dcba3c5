#include "rayfuse/camera.hpp"

#include <cmath>
#include <string>

#include "rayfuse/error.hpp"

namespace rayfuse {

void validate(const CameraIntrinsics& k) {
    if (k.width <= 0 || k.height <= 0)
        throw DomainError("camera intrinsics: image size must be positive");
    if (!(k.fx > 0.0) || !(k.fy > 0.0))
        throw DomainError("camera intrinsics: focal lengths must be positive");
    if (!(k.cx >= 0.0) || k.cx >= k.width || !(k.cy >= 0.0) || k.cy >= k.height)
        throw DomainError("camera intrinsics: principal point outside image");
}

bool is_rigid(const RigidTransform& t, double tol) {
    return orthonormality_deviation(t.rotation) <= tol &&
           std::fabs(t.rotation.det() - 1.0) <= tol;
}

PointMap unproject_depth(const DepthMap& depth, const CameraIntrinsics& k) {
    validate(k);
    if (depth.width != k.width || depth.height != k.height)
        throw DomainError("unproject_depth: depth is " + std::to_string(depth.width) + "x" +
                          std::to_string(depth.height) + " but intrinsics expect " +
                          std::to_string(k.width) + "x" + std::to_string(k.height));

    PointMap pm(depth.width, depth.height);
    for (int j = 0; j < depth.height; ++j) {
        for (int i = 0; i < depth.width; ++i) {
            const double d = depth.at(i, j);
            const std::size_t idx = pm.index(i, j);
            if (d > 0.0) {
                pm.points[idx] = {(i - k.cx) / k.fx * d, (j - k.cy) / k.fy * d, d};
                pm.validity[idx] = 1;
            }
        }
    }
    return pm;
}

RayMap compute_ray_map(const CameraIntrinsics& k) {
    validate(k);
    RayMap rm;
    rm.width = k.width;
    rm.height = k.height;
    rm.rays.resize(static_cast<std::size_t>(k.width) * k.height);
    for (int j = 0; j < k.height; ++j)
        for (int i = 0; i < k.width; ++i)
            rm.rays[static_cast<std::size_t>(j) * k.width + i] = {(i - k.cx) / k.fx,
                                                                  (j - k.cy) / k.fy};
    return rm;
}

PointMap transform_point_map(const PointMap& pm, const RigidTransform& t) {
    PointMap out = pm;
    for (std::size_t idx = 0; idx < out.points.size(); ++idx)
        if (out.validity[idx]) out.points[idx] = t.apply(out.points[idx]);
    return out;
}

std::optional<PixelProjection> project_point(const Vec3& q, const CameraIntrinsics& k,
                                             const RigidTransform& t) {
    const Vec3 p = t.apply(q);
    if (p.z == 0.0) return std::nullopt;
    return PixelProjection{k.fx * p.x / p.z + k.cx, k.fy * p.y / p.z + k.cy, p.z};
}

}  // namespace rayfuse
