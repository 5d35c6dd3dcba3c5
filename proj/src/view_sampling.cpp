#include "rayfuse/view_sampling.hpp"

#include <cmath>

#include "rayfuse/error.hpp"

namespace rayfuse {

void validate(const InputView& view) {
    validate(view.intrinsics);
    const int w = view.intrinsics.width;
    const int h = view.intrinsics.height;
    if (view.depth.width != w || view.depth.height != h)
        throw DomainError("input view: depth dimensions disagree with intrinsics");
    if (view.mask.width != w || view.mask.height != h)
        throw DomainError("input view: mask dimensions disagree with intrinsics");
    if (view.rgb.width != 0 && (view.rgb.width != w || view.rgb.height != h))
        throw DomainError("input view: rgb dimensions disagree with intrinsics");
}

Aabb fit_bbox(const PointMap& pm, const BinaryMask& mask) {
    if (pm.width != mask.width || pm.height != mask.height)
        throw DomainError("fit_bbox: point map and mask dimensions disagree");
    Aabb box;
    bool any = false;
    for (int j = 0; j < pm.height; ++j) {
        for (int i = 0; i < pm.width; ++i) {
            const std::size_t idx = pm.index(i, j);
            if (!pm.validity[idx] || !mask.at(i, j)) continue;
            const Vec3& p = pm.points[idx];
            if (!any) {
                box.min = box.max = p;
                any = true;
            } else {
                box.min = cwise_min(box.min, p);
                box.max = cwise_max(box.max, p);
            }
        }
    }
    if (!any) throw DomainError("empty foreground");
    return box;
}

double sampling_radius(const Aabb& bbox, const Vec3& camera_position,
                       const ViewSamplingConfig& cfg) {
    const double r_bb = bbox.half_diagonal();
    const double r_cam = norm(camera_position - bbox.center());
    return std::fmax(cfg.lambda_bb * r_bb, cfg.lambda_cam * r_cam);
}

std::vector<Vec3> sample_sphere_points(int n, double radius, const Vec3& center) {
    if (n < 1) throw DomainError("sample_sphere_points: need n >= 1");
    if (!(radius > 0.0)) throw DomainError("sample_sphere_points: need radius > 0");

    constexpr double kGoldenFrac = 0.61803398874989484820458683436564;  // (sqrt(5)-1)/2
    constexpr double kTwoPi = 6.283185307179586476925286766559;

    std::vector<Vec3> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double z = -1.0 + 2.0 * (k + 0.5) / n;
        double frac = std::fmod(k * kGoldenFrac, 1.0);
        if (frac < 0.0) frac += 1.0;
        const double theta = kTwoPi * frac;
        const double ring = std::sqrt(std::fmax(0.0, 1.0 - z * z));
        out.push_back(center + radius * Vec3{ring * std::cos(theta), ring * std::sin(theta), z});
    }
    return out;
}

RigidTransform look_at_pose(const Vec3& eye, const Vec3& target, const Vec3& up_hint) {
    const Vec3 offset = target - eye;
    if (norm2(offset) == 0.0) throw DomainError("look_at_pose: eye equals target");
    const Vec3 forward = normalized(offset);

    Vec3 up = normalized(up_hint);
    if (norm2(up) == 0.0 || std::fabs(dot(up, forward)) > 0.99) {
        // Degenerate hint: pick the canonical axis least aligned with the view.
        const Vec3 candidates[3] = {{0, 1, 0}, {1, 0, 0}, {0, 0, 1}};
        up = candidates[0];
        double best = std::fabs(dot(candidates[0], forward));
        for (const Vec3& c : candidates) {
            const double a = std::fabs(dot(c, forward));
            if (a < best) {
                best = a;
                up = c;
            }
        }
    }

    // Camera rows: x right, y down (image up = -y), z forward.
    const Vec3 down = -up;
    const Vec3 y_axis = normalized(down - dot(down, forward) * forward);
    const Vec3 x_axis = cross(y_axis, forward);

    RigidTransform t;
    Mat3& r = t.rotation;
    r(0, 0) = x_axis.x; r(0, 1) = x_axis.y; r(0, 2) = x_axis.z;
    r(1, 0) = y_axis.x; r(1, 1) = y_axis.y; r(1, 2) = y_axis.z;
    r(2, 0) = forward.x; r(2, 1) = forward.y; r(2, 2) = forward.z;
    t.translation = -(r * eye);
    return t;
}

std::vector<QueryView> sample_query_views(const InputView& input, const ViewSamplingConfig& cfg) {
    validate(input);
    if (cfg.n_views < 1) throw DomainError("sample_query_views: need n_views >= 1");
    validate(cfg.query_intrinsics);

    const PointMap cam_points = unproject_depth(input.depth, input.intrinsics);
    const RigidTransform world_from_cam = input.pose.inverse();
    const PointMap world_points = transform_point_map(cam_points, world_from_cam);
    const Aabb bbox = fit_bbox(world_points, input.mask);

    const Vec3 camera_position = world_from_cam.translation;
    const double radius = sampling_radius(bbox, camera_position, cfg);
    const Vec3 center = bbox.center();

    // Image-up of the input camera, expressed in world coordinates.
    const Vec3 input_up = -input.pose.rotation.row(1);
    const Vec3 input_right = input.pose.rotation.row(0);

    std::vector<QueryView> views;
    views.reserve(static_cast<std::size_t>(cfg.n_views) + 1);
    for (const Vec3& eye : sample_sphere_points(cfg.n_views, radius, center)) {
        const Vec3 dir = normalized(center - eye);
        const Vec3 hint = std::fabs(dot(input_up, dir)) > 0.99 ? input_right : input_up;
        views.push_back({look_at_pose(eye, center, hint), cfg.query_intrinsics, false});
    }
    views.push_back({input.pose, input.intrinsics, true});
    return views;
}

}  // namespace rayfuse
