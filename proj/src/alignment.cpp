#include "rayfuse/alignment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "rayfuse/error.hpp"
#include "rayfuse/parallel.hpp"
#include "rayfuse/rng.hpp"

namespace rayfuse {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kPi = 3.1415926535897932384626433832795;

Vec3 centroid(const PointCloud& cloud) {
    Vec3 sum;
    for (const Vec3& p : cloud.points) sum += p;
    return (1.0 / static_cast<double>(cloud.size())) * sum;
}

Mat3 quaternion_to_rotation(double w, double x, double y, double z) {
    const double n = std::sqrt(w * w + x * x + y * y + z * z);
    w /= n; x /= n; y /= n; z /= n;
    return Mat3{{1 - 2 * (y * y + z * z), 2 * (x * y - w * z),     2 * (x * z + w * y),
                 2 * (x * y + w * z),     1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
                 2 * (x * z - w * y),     2 * (y * z + w * x),     1 - 2 * (x * x + y * y)}};
}

// Optimal rotation + translation mapping src onto dst in the least-squares
// sense (Horn's closed form: the best quaternion is the top eigenvector of
// the 4x4 coupling matrix, which is always a proper rotation).
RigidTransform best_fit_rigid(const std::vector<Vec3>& src, const std::vector<Vec3>& dst) {
    const auto n = src.size();
    Vec3 src_mean, dst_mean;
    for (std::size_t i = 0; i < n; ++i) {
        src_mean += src[i];
        dst_mean += dst[i];
    }
    src_mean *= 1.0 / static_cast<double>(n);
    dst_mean *= 1.0 / static_cast<double>(n);

    Mat3 h = Mat3::zero();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 a = src[i] - src_mean;
        const Vec3 b = dst[i] - dst_mean;
        h(0, 0) += a.x * b.x; h(0, 1) += a.x * b.y; h(0, 2) += a.x * b.z;
        h(1, 0) += a.y * b.x; h(1, 1) += a.y * b.y; h(1, 2) += a.y * b.z;
        h(2, 0) += a.z * b.x; h(2, 1) += a.z * b.y; h(2, 2) += a.z * b.z;
    }

    const double sxx = h(0, 0), sxy = h(0, 1), sxz = h(0, 2);
    const double syx = h(1, 0), syy = h(1, 1), syz = h(1, 2);
    const double szx = h(2, 0), szy = h(2, 1), szz = h(2, 2);

    double coupling[16] = {
        sxx + syy + szz, syz - szy,        szx - sxz,        sxy - syx,
        syz - szy,       sxx - syy - szz,  sxy + syx,        szx + sxz,
        szx - sxz,       sxy + syx,        -sxx + syy - szz, syz + szy,
        sxy - syx,       szx + sxz,        syz + szy,        -sxx - syy + szz};
    double values[4];
    double vecs[16];
    jacobi_eigen_symmetric(4, coupling, values, vecs);

    // Top eigenvector (column 0) is the quaternion (w, x, y, z).
    const Mat3 r = quaternion_to_rotation(vecs[0], vecs[4], vecs[8], vecs[12]);
    return {r, dst_mean - r * src_mean};
}

struct AngleGrid {
    std::vector<double> yaw, pitch, roll;
    double yaw_cell = 0.0, pitch_cell = 0.0, roll_cell = 0.0;
};

std::vector<double> linspace_closed(double lo, double hi, int count) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        out.push_back(0.5 * (lo + hi));
        return out;
    }
    const double step = (hi - lo) / (count - 1);
    for (int k = 0; k < count; ++k) out.push_back(lo + k * step);
    return out;
}

AngleGrid make_grid(int steps, const std::optional<RotationWindow>& window) {
    AngleGrid grid;
    if (window) {
        grid.yaw = linspace_closed(window->yaw - window->yaw_half, window->yaw + window->yaw_half,
                                   steps);
        grid.pitch = linspace_closed(window->pitch - window->pitch_half,
                                     window->pitch + window->pitch_half, steps);
        grid.roll = linspace_closed(window->roll - window->roll_half,
                                    window->roll + window->roll_half, steps);
        grid.yaw_cell = steps > 1 ? 2.0 * window->yaw_half / (steps - 1) : window->yaw_half;
        grid.pitch_cell = steps > 1 ? 2.0 * window->pitch_half / (steps - 1) : window->pitch_half;
        grid.roll_cell = steps > 1 ? 2.0 * window->roll_half / (steps - 1) : window->roll_half;
        return grid;
    }
    // Z-Y-Z Euler box covering the whole rotation group: azimuthal angles are
    // periodic (half-open), the middle angle spans the closed [0, pi]. The
    // identity sits at grid index (0, 0, 0) for every step count.
    grid.yaw.reserve(static_cast<std::size_t>(steps));
    grid.roll.reserve(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) {
        grid.yaw.push_back(kTwoPi * k / steps);
        grid.roll.push_back(kTwoPi * k / steps);
    }
    grid.pitch = steps > 1 ? linspace_closed(0.0, kPi, steps) : std::vector<double>{0.0};
    grid.yaw_cell = kTwoPi / steps;
    grid.pitch_cell = steps > 1 ? kPi / (steps - 1) : kPi;
    grid.roll_cell = grid.yaw_cell;
    return grid;
}

Mat3 euler_zyz(double yaw, double pitch, double roll) {
    return rotation_z(yaw) * rotation_y(pitch) * rotation_z(roll);
}

struct GridCandidate {
    double yaw = 0.0, pitch = 0.0, roll = 0.0;
    double chamfer = std::numeric_limits<double>::infinity();
};

// Chamfer of (rotate pred about center) vs gt without rebuilding trees: the
// backward direction queries the static pred tree with inversely rotated gt
// points, which preserves distances.
double chamfer_rotated(const std::vector<Vec3>& pred, const KdTree& pred_tree,
                       const std::vector<Vec3>& gt, const KdTree& gt_tree, const Mat3& rotation,
                       const Vec3& center) {
    const Mat3 inv = rotation.transposed();
    double forward = 0.0;
    for (const Vec3& p : pred) forward += gt_tree.nearest_dist(center + rotation * (p - center));
    forward /= static_cast<double>(pred.size());

    double backward = 0.0;
    for (const Vec3& g : gt) backward += pred_tree.nearest_dist(center + inv * (g - center));
    backward /= static_cast<double>(gt.size());

    return 0.5 * (forward + backward);
}

GridCandidate search_grid(const AngleGrid& grid, const std::vector<Vec3>& pred,
                          const KdTree& pred_tree, const std::vector<Vec3>& gt,
                          const KdTree& gt_tree, const Vec3& center, int threads) {
    const std::size_t ny = grid.yaw.size();
    const std::size_t np = grid.pitch.size();
    const std::size_t nr = grid.roll.size();
    std::vector<double> scores(ny * np * nr);

    parallel_for(scores.size(), threads, [&](std::size_t flat) {
        const std::size_t ky = flat / (np * nr);
        const std::size_t kp = (flat / nr) % np;
        const std::size_t kr = flat % nr;
        const Mat3 r = euler_zyz(grid.yaw[ky], grid.pitch[kp], grid.roll[kr]);
        scores[flat] = chamfer_rotated(pred, pred_tree, gt, gt_tree, r, center);
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i)
        if (scores[i] < scores[best]) best = i;  // flat index order == lexicographic order

    GridCandidate out;
    out.yaw = grid.yaw[best / (np * nr)];
    out.pitch = grid.pitch[(best / nr) % np];
    out.roll = grid.roll[best % nr];
    out.chamfer = scores[best];
    return out;
}

}  // namespace

PointCloud subsample(const PointCloud& cloud, std::size_t count, std::uint64_t seed) {
    if (count >= cloud.size() || count == 0) return cloud;
    std::vector<std::uint32_t> ids(cloud.size());
    std::iota(ids.begin(), ids.end(), 0u);
    Pcg32 rng(seed, 0x7e57ab1e);
    PointCloud out;
    out.points.reserve(count);
    if (cloud.has_confidence()) out.confidence.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto j = i + rng.next_below(static_cast<std::uint32_t>(cloud.size() - i));
        std::swap(ids[i], ids[j]);
        out.points.push_back(cloud.points[ids[i]]);
        if (cloud.has_confidence()) out.confidence.push_back(cloud.confidence[ids[i]]);
    }
    return out;
}

Obb fit_obb(const PointCloud& cloud) {
    if (cloud.empty()) throw DomainError("fit_obb: empty cloud");

    Obb obb;
    obb.center = centroid(cloud);

    Mat3 cov = Mat3::zero();
    for (const Vec3& p : cloud.points) {
        const Vec3 d = p - obb.center;
        cov(0, 0) += d.x * d.x; cov(0, 1) += d.x * d.y; cov(0, 2) += d.x * d.z;
        cov(1, 1) += d.y * d.y; cov(1, 2) += d.y * d.z;
        cov(2, 2) += d.z * d.z;
    }
    cov(1, 0) = cov(0, 1);
    cov(2, 0) = cov(0, 2);
    cov(2, 1) = cov(1, 2);

    double values[3];
    double vecs[9];
    jacobi_eigen_symmetric(3, cov.m.data(), values, vecs);
    std::copy(vecs, vecs + 9, obb.axes.m.begin());

    if (obb.axes.det() < 0.0)
        for (int r = 0; r < 3; ++r) obb.axes(r, 2) = -obb.axes(r, 2);

    for (const Vec3& p : cloud.points) {
        const Vec3 d = p - obb.center;
        obb.extents.x = std::fmax(obb.extents.x, std::fabs(dot(d, obb.axes.col(0))));
        obb.extents.y = std::fmax(obb.extents.y, std::fabs(dot(d, obb.axes.col(1))));
        obb.extents.z = std::fmax(obb.extents.z, std::fabs(dot(d, obb.axes.col(2))));
    }
    return obb;
}

ScaleResult scale_and_center(const PointCloud& predicted, const PointCloud& ground_truth) {
    if (predicted.empty() || ground_truth.empty())
        throw DomainError("scale_and_center: empty cloud");

    const Obb pred_obb = fit_obb(predicted);
    const Obb gt_obb = fit_obb(ground_truth);

    ScaleResult result;
    result.axes = pred_obb.axes;
    result.pred_center = pred_obb.center;
    result.gt_center = gt_obb.center;

    std::array<int, 3> pred_rank = {0, 1, 2};
    std::array<int, 3> gt_rank = {0, 1, 2};
    std::sort(pred_rank.begin(), pred_rank.end(),
              [&](int a, int b) { return pred_obb.extent(a) > pred_obb.extent(b); });
    std::sort(gt_rank.begin(), gt_rank.end(),
              [&](int a, int b) { return gt_obb.extent(a) > gt_obb.extent(b); });

    const bool degenerate = pred_obb.extent(pred_rank[2]) < 1e-9;
    if (degenerate) {
        const double pred_diag = pred_obb.half_diagonal();
        const double uniform = pred_diag > 1e-12 ? gt_obb.half_diagonal() / pred_diag : 1.0;
        result.scale = {uniform, uniform, uniform};
        result.scalar_fallback = true;
    } else {
        // Rank r of the prediction's extents matches rank r of the truth's.
        double per_axis[3];
        for (int r = 0; r < 3; ++r)
            per_axis[pred_rank[r]] = gt_obb.extent(gt_rank[r]) / pred_obb.extent(pred_rank[r]);
        result.scale = {per_axis[0], per_axis[1], per_axis[2]};
    }

    // M = sum_k scale_k * a_k a_k^T, a symmetric scale in the OBB frame.
    Mat3 scale_matrix = Mat3::zero();
    const double scales[3] = {result.scale.x, result.scale.y, result.scale.z};
    for (int k = 0; k < 3; ++k) {
        const Vec3 axis = result.axes.col(k);
        const double coords[3] = {axis.x, axis.y, axis.z};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) scale_matrix(i, j) += scales[k] * coords[i] * coords[j];
    }

    result.cloud.points.reserve(predicted.size());
    for (const Vec3& p : predicted.points)
        result.cloud.points.push_back(result.gt_center + scale_matrix * (p - result.pred_center));
    result.cloud.confidence = predicted.confidence;
    return result;
}

RotationSearchResult rotation_grid_search(const PointCloud& predicted,
                                          const PointCloud& ground_truth, int steps,
                                          const AlignmentConfig& cfg,
                                          const std::optional<RotationWindow>& around) {
    if (predicted.empty() || ground_truth.empty())
        throw DomainError("rotation_grid_search: empty cloud");
    if (steps < 1) throw DomainError("rotation_grid_search: need steps >= 1");

    // One seed for both subsamples: identical clouds then subsample
    // identically ( => exact zero chamfer at the true optimum).
    const PointCloud pred_sub = subsample(predicted, cfg.eval_subsample, cfg.seed);
    const PointCloud gt_sub = subsample(ground_truth, cfg.eval_subsample, cfg.seed);
    const KdTree pred_tree(pred_sub.points);
    const KdTree gt_tree(gt_sub.points);
    const Vec3 center = fit_obb(ground_truth).center;

    const AngleGrid coarse = make_grid(steps, around);
    const GridCandidate pass1 = search_grid(coarse, pred_sub.points, pred_tree, gt_sub.points,
                                            gt_tree, center, cfg.threads);

    RotationWindow refine;
    refine.yaw = pass1.yaw;
    refine.pitch = pass1.pitch;
    refine.roll = pass1.roll;
    refine.yaw_half = coarse.yaw_cell;
    refine.pitch_half = coarse.pitch_cell;
    refine.roll_half = coarse.roll_cell;
    const AngleGrid fine = make_grid(steps, refine);
    const GridCandidate pass2 = search_grid(fine, pred_sub.points, pred_tree, gt_sub.points,
                                            gt_tree, center, cfg.threads);

    // The refined grid need not contain the coarse optimum; keep whichever is
    // better so refinement can never lose ground (the coarse winner takes
    // ties).
    const GridCandidate& best = pass2.chamfer < pass1.chamfer ? pass2 : pass1;

    RotationSearchResult result;
    result.rotation = euler_zyz(best.yaw, best.pitch, best.roll);
    result.center = center;
    result.chamfer_m = best.chamfer;
    return result;
}

IcpResult icp(const PointCloud& predicted, const PointCloud& ground_truth,
              const AlignmentConfig& cfg) {
    if (predicted.empty() || ground_truth.empty()) throw DomainError("icp: empty cloud");

    const KdTree gt_tree(ground_truth.points);
    std::vector<Vec3> moving = predicted.points;
    std::vector<Vec3> corr(moving.size());

    IcpResult result;
    result.transform = RigidTransform::identity();
    double prev_rms = std::numeric_limits<double>::infinity();

    for (int iter = 1; iter <= cfg.icp_max_iters; ++iter) {
        double sum2 = 0.0;
        for (std::size_t i = 0; i < moving.size(); ++i) {
            const auto nn = gt_tree.nearest(moving[i]);
            corr[i] = ground_truth.points[nn.index];
            sum2 += nn.dist2;
        }
        const double rms = std::sqrt(sum2 / static_cast<double>(moving.size()));
        result.iterations = iter;
        result.rms = rms;

        if (rms < 1e-14) {
            result.converged = true;
            break;
        }

        const RigidTransform delta = best_fit_rigid(moving, corr);
        result.transform = delta * result.transform;
        for (Vec3& p : moving) p = delta.apply(p);

        if (std::fabs(prev_rms - rms) <= cfg.icp_tol * std::fmax(rms, 1e-12)) {
            result.converged = true;
            break;
        }
        prev_rms = rms;
    }
    return result;
}

AlignResult align_canonical(const PointCloud& predicted, const PointCloud& ground_truth,
                            const AlignmentConfig& cfg) {
    const ScaleResult sc = scale_and_center(predicted, ground_truth);
    const Vec3 center = fit_obb(ground_truth).center;

    double best_multiplier = 1.0;
    RotationSearchResult best_rotation;
    bool have_best = false;

    auto scaled_about_center = [&](double multiplier) {
        PointCloud out;
        out.points.reserve(sc.cloud.size());
        for (const Vec3& p : sc.cloud.points)
            out.points.push_back(center + multiplier * (p - center));
        return out;
    };

    if (cfg.use_scale_grid) {
        for (int k = 0;; ++k) {
            const double s = cfg.scale_min + k * cfg.scale_step;
            if (s > cfg.scale_max + 1e-12) break;
            const PointCloud candidate = scaled_about_center(s);
            const RotationSearchResult r =
                rotation_grid_search(candidate, ground_truth, cfg.rotation_steps, cfg);
            if (!have_best || r.chamfer_m < best_rotation.chamfer_m) {
                best_rotation = r;
                best_multiplier = s;
                have_best = true;
            }
        }
    } else {
        best_rotation = rotation_grid_search(sc.cloud, ground_truth, cfg.rotation_steps, cfg);
        have_best = true;
    }

    const PointCloud rotated_base = scaled_about_center(best_multiplier);
    PointCloud rotated;
    rotated.points.reserve(rotated_base.size());
    for (const Vec3& p : rotated_base.points)
        rotated.points.push_back(center + best_rotation.rotation * (p - center));

    // ICP refines on larger subsamples than the grid search: its cost is one
    // tree build plus a few dozen query sweeps, and the extra points buy
    // registration accuracy.
    const std::size_t icp_count = std::max<std::size_t>(cfg.eval_subsample, 4096);
    const PointCloud icp_pred = subsample(rotated, icp_count, cfg.seed);
    const PointCloud icp_gt = subsample(ground_truth, icp_count, cfg.seed);
    const IcpResult icp_result = icp(icp_pred, icp_gt, cfg);

    // Fold scale-and-center, grid scale, grid rotation and ICP into a single
    // affine map p -> A p + b.
    Mat3 scale_matrix = Mat3::zero();
    const double scales[3] = {best_multiplier * sc.scale.x, best_multiplier * sc.scale.y,
                              best_multiplier * sc.scale.z};
    for (int k = 0; k < 3; ++k) {
        const Vec3 axis = sc.axes.col(k);
        const double coords[3] = {axis.x, axis.y, axis.z};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) scale_matrix(i, j) += scales[k] * coords[i] * coords[j];
    }

    AlignResult result;
    const Mat3 rot_total = icp_result.transform.rotation * best_rotation.rotation;
    result.linear = rot_total * scale_matrix;

    // The full chain is affine: push the prediction's OBB center through it
    // and solve for the offset.
    //   p0 = c_gt + M0 (p - c_pred)   (scale and center)
    //   p1 = c + m (p0 - c)           (grid scale about the gt center)
    //   p2 = c + Rg (p1 - c)          (grid rotation about the gt center)
    //   p3 = Ri p2 + ti               (ICP)
    const Vec3 p1 = center + best_multiplier * (sc.gt_center - center);
    const Vec3 p2 = center + best_rotation.rotation * (p1 - center);
    const Vec3 p3 = icp_result.transform.apply(p2);
    result.offset = p3 - result.linear * sc.pred_center;

    result.scale = {scales[0], scales[1], scales[2]};
    result.grid_multiplier = best_multiplier;
    result.icp_converged = icp_result.converged;

    result.aligned.points.reserve(predicted.size());
    for (const Vec3& p : predicted.points) result.aligned.points.push_back(result.apply(p));
    result.aligned.confidence = predicted.confidence;

    result.report = evaluate(result.aligned, ground_truth, cfg.eta_mm, cfg.threads);
    return result;
}

}  // namespace rayfuse
