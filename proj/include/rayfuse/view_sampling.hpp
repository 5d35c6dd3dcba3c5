#pragma once

#include <vector>

#include "rayfuse/camera.hpp"
#include "rayfuse/input_view.hpp"

namespace rayfuse {

struct Aabb {
    Vec3 min;
    Vec3 max;

    Vec3 center() const { return 0.5 * (min + max); }
    double half_diagonal() const { return 0.5 * norm(max - min); }
};

struct ViewSamplingConfig {
    double lambda_bb = 1.3;
    double lambda_cam = 0.7;
    int n_views = 22;
    CameraIntrinsics query_intrinsics;
};

// Componentwise min/max over valid points selected by the mask. Throws
// DomainError("empty foreground") when no point qualifies.
Aabb fit_bbox(const PointMap& pm, const BinaryMask& mask);

// max(lambda_bb * r_bb, lambda_cam * |camera_position - bbox center|).
double sampling_radius(const Aabb& bbox, const Vec3& camera_position,
                       const ViewSamplingConfig& cfg);

// n deterministic points on the sphere, evenly spread in the cylindrical
// equal-area (azimuth, z) rectangle via a golden-angle spiral:
//   z_k = -1 + 2(k + 0.5)/n,  theta_k = 2*pi * frac(k * (sqrt(5)-1)/2).
std::vector<Vec3> sample_sphere_points(int n, double radius, const Vec3& center);

// World-to-camera pose with the +z axis pointing from eye toward target and
// up_hint mapping (approximately) to image-up. A hint parallel to the view
// direction falls back to a canonical axis instead of failing.
RigidTransform look_at_pose(const Vec3& eye, const Vec3& target, const Vec3& up_hint);

struct QueryView {
    RigidTransform pose;  // world -> query camera
    CameraIntrinsics intrinsics;
    bool is_input_view = false;
};

// The full query set: cfg.n_views poses on the sampling sphere looking at the
// foreground bbox center, plus the input view itself appended last (tagged so
// fusion can exempt it from occlusion filtering).
std::vector<QueryView> sample_query_views(const InputView& input, const ViewSamplingConfig& cfg);

}  // namespace rayfuse
