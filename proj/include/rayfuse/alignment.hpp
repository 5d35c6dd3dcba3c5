#pragma once

#include <cstdint>
#include <optional>

#include "rayfuse/camera.hpp"
#include "rayfuse/cloud.hpp"
#include "rayfuse/metrics.hpp"

namespace rayfuse {

// Oriented bounding box from PCA: axes are covariance eigenvector columns
// (descending eigenvalue, right-handed), extents are half-lengths.
struct Obb {
    Vec3 center;
    Mat3 axes;
    Vec3 extents;

    double extent(int k) const { return k == 0 ? extents.x : k == 1 ? extents.y : extents.z; }
    double half_diagonal() const { return norm(extents); }
};

struct AlignmentConfig {
    int rotation_steps = 20;
    bool use_scale_grid = false;
    double scale_min = 0.65;
    double scale_max = 1.35;
    double scale_step = 0.05;
    int icp_max_iters = 50;
    double icp_tol = 1e-6;  // relative RMS change
    std::size_t eval_subsample = 2048;
    std::uint64_t seed = 0;
    double eta_mm = 10.0;
    int threads = 1;
};

Obb fit_obb(const PointCloud& cloud);

struct ScaleResult {
    PointCloud cloud;      // prediction scaled and moved onto the gt center
    Vec3 scale;            // per sorted principal axis; uniform on fallback
    Mat3 axes;             // prediction OBB axes the scale applies along
    Vec3 pred_center;      // prediction OBB center before the move
    Vec3 gt_center;        // target center
    bool scalar_fallback = false;
};

// Matches the prediction's OBB extents to the ground truth's, rank by rank
// along each cloud's sorted principal extents, then moves the prediction's
// OBB center onto the ground truth's. Degenerate extents (< 1e-9) trigger a
// scalar fallback using the ratio of OBB half-diagonals.
ScaleResult scale_and_center(const PointCloud& predicted, const PointCloud& ground_truth);

struct RotationWindow {
    double yaw = 0.0, pitch = 0.0, roll = 0.0;  // window center, radians
    double yaw_half = 0.0, pitch_half = 0.0, roll_half = 0.0;
};

struct RotationSearchResult {
    Mat3 rotation;     // applied about `center`
    Vec3 center;       // gt OBB center
    double chamfer_m;  // subsampled chamfer at the optimum, meters
};

// Two-pass brute-force search over ZYX Euler angles minimizing the chamfer
// distance, evaluated on seeded uniform subsamples of both clouds. Pass one
// covers [0,2pi) x [0,pi] x [0,2pi) with `steps` values per axis (or the
// given window); pass two re-grids one coarse cell around the best. Ties go
// to the lowest (yaw, pitch, roll) lexicographic index, so the result is
// independent of candidate evaluation order.
RotationSearchResult rotation_grid_search(const PointCloud& predicted,
                                          const PointCloud& ground_truth, int steps,
                                          const AlignmentConfig& cfg,
                                          const std::optional<RotationWindow>& around = {});

struct IcpResult {
    RigidTransform transform;
    int iterations = 0;
    bool converged = false;
    double rms = 0.0;  // final correspondence RMS, meters
};

// Point-to-point ICP: alternate nearest-neighbor correspondences with the
// closed-form best-fit rigid transform until the relative RMS improvement
// drops below cfg.icp_tol. Non-convergence returns the last iterate flagged.
IcpResult icp(const PointCloud& predicted, const PointCloud& ground_truth,
              const AlignmentConfig& cfg);

struct AlignResult {
    Mat3 linear;       // full map: p -> linear * p + offset
    Vec3 offset;
    Vec3 scale;        // per-axis scale including the grid multiplier
    double grid_multiplier = 1.0;
    bool icp_converged = true;
    MetricReport report;  // on the full clouds, post alignment
    PointCloud aligned;

    Vec3 apply(const Vec3& p) const { return linear * p + offset; }
};

// Full canonical-frame registration: OBB scale + center, optional uniform
// scale grid (each candidate scored by a rotation grid search), rotation grid
// search, then ICP.
AlignResult align_canonical(const PointCloud& predicted, const PointCloud& ground_truth,
                            const AlignmentConfig& cfg);

// Seeded uniform subsample without replacement; returns the cloud itself
// when count >= size.
PointCloud subsample(const PointCloud& cloud, std::size_t count, std::uint64_t seed);

}  // namespace rayfuse
