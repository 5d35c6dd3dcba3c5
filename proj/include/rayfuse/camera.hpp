#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rayfuse/linalg.hpp"

namespace rayfuse {

// Pinhole camera. Pixel (i, j) means column i, row j, with pixel centers at
// integer coordinates; the principal ray leaves through (cx, cy).
struct CameraIntrinsics {
    double fx = 0.0;
    double fy = 0.0;
    double cx = 0.0;
    double cy = 0.0;
    int width = 0;
    int height = 0;
};

// Throws DomainError if focal lengths are non-positive or the principal
// point falls outside the image.
void validate(const CameraIntrinsics& k);

// Rigid map into a destination frame: p_dst = rotation * p_src + translation.
// For camera poses the destination is the camera frame.
struct RigidTransform {
    Mat3 rotation;
    Vec3 translation;

    static RigidTransform identity() { return {}; }

    Vec3 apply(const Vec3& p) const { return rotation * p + translation; }

    RigidTransform inverse() const {
        const Mat3 rt = rotation.transposed();
        return {rt, -(rt * translation)};
    }
};

// Composition: (a * b).apply(p) == a.apply(b.apply(p)).
inline RigidTransform operator*(const RigidTransform& a, const RigidTransform& b) {
    return {a.rotation * b.rotation, a.rotation * b.translation + a.translation};
}

bool is_rigid(const RigidTransform& t, double tol = 1e-9);

// Real-valued row-major raster. Index (i, j) = column i, row j, top row first.
struct Raster {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    Raster() = default;
    Raster(int w, int h, double fill = 0.0)
        : width(w), height(h), values(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

    double& at(int i, int j) { return values[static_cast<std::size_t>(j) * width + i]; }
    double at(int i, int j) const { return values[static_cast<std::size_t>(j) * width + i]; }
    std::size_t size() const { return values.size(); }
};

// Depth in meters along the camera z axis; 0.0 marks an invalid pixel.
using DepthMap = Raster;

struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> values;

    BinaryMask() = default;
    BinaryMask(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), values(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

    std::uint8_t& at(int i, int j) { return values[static_cast<std::size_t>(j) * width + i]; }
    std::uint8_t at(int i, int j) const { return values[static_cast<std::size_t>(j) * width + i]; }
    std::size_t size() const { return values.size(); }
};

// 8-bit RGB image, 3 bytes per pixel, row-major.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;

    Image() = default;
    Image(int w, int h)
        : width(w), height(h), rgb(3 * static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0) {}

    std::uint8_t& at(int i, int j, int c) {
        return rgb[3 * (static_cast<std::size_t>(j) * width + i) + c];
    }
    std::uint8_t at(int i, int j, int c) const {
        return rgb[3 * (static_cast<std::size_t>(j) * width + i) + c];
    }
};

// Per-pixel 3D points; validity 0 means the point must be ignored.
struct PointMap {
    int width = 0;
    int height = 0;
    std::vector<Vec3> points;
    std::vector<std::uint8_t> validity;

    PointMap() = default;
    PointMap(int w, int h)
        : width(w),
          height(h),
          points(static_cast<std::size_t>(w) * static_cast<std::size_t>(h)),
          validity(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0) {}

    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * width + i; }
};

// Per-pixel normalized image coordinates ((i-cx)/fx, (j-cy)/fy).
struct RayMap {
    int width = 0;
    int height = 0;
    std::vector<Vec2> rays;

    Vec2 at(int i, int j) const { return rays[static_cast<std::size_t>(j) * width + i]; }
};

// Back-project a depth map into the camera frame:
// point(i,j) = ((i-cx)/fx * D, (j-cy)/fy * D, D). Pixels with D == 0 come out
// invalid. Throws DomainError if depth dimensions disagree with K.
PointMap unproject_depth(const DepthMap& depth, const CameraIntrinsics& k);

RayMap compute_ray_map(const CameraIntrinsics& k);

// Applies T to every valid point; validity is preserved.
PointMap transform_point_map(const PointMap& pm, const RigidTransform& t);

struct PixelProjection {
    double u = 0.0;  // column, pixels
    double v = 0.0;  // row, pixels
    double z = 0.0;  // camera-frame depth, meters; negative = behind camera
};

// Projects a world point through T into the image plane of K. Returns empty
// only when the transformed point has z == 0; a negative z is returned as-is
// so callers can detect behind-camera points.
std::optional<PixelProjection> project_point(const Vec3& q, const CameraIntrinsics& k,
                                             const RigidTransform& t);

}  // namespace rayfuse
