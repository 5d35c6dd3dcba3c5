#include "rayfuse/fusion.hpp"

#include <cmath>
#include <vector>

#include "rayfuse/error.hpp"
#include "rayfuse/parallel.hpp"

namespace rayfuse {

BinaryMask occlusion_mask(const ViewPrediction& pred, const InputView& input, double eps) {
    validate(pred);
    validate(input);

    BinaryMask occ(pred.intrinsics.width, pred.intrinsics.height, 0);

    const PointMap cam_points = unproject_depth(pred.depth, pred.intrinsics);
    const PointMap world_points = transform_point_map(cam_points, pred.pose.inverse());

    for (int j = 0; j < occ.height; ++j) {
        for (int i = 0; i < occ.width; ++i) {
            const std::size_t idx = world_points.index(i, j);
            if (!world_points.validity[idx]) continue;
            const auto proj = project_point(world_points.points[idx], input.intrinsics, input.pose);
            if (!proj || proj->z <= 0.0) continue;
            const auto u = static_cast<long>(std::lround(proj->u));
            const auto v = static_cast<long>(std::lround(proj->v));
            if (u < 0 || u >= input.intrinsics.width || v < 0 || v >= input.intrinsics.height)
                continue;
            const int ui = static_cast<int>(u);
            const int vi = static_cast<int>(v);
            if (!input.mask.at(ui, vi)) continue;
            const double observed = input.depth.at(ui, vi);
            if (observed <= 0.0) continue;
            if (proj->z > observed + eps) occ.at(i, j) = 1;
        }
    }
    return occ;
}

BinaryMask final_mask(const BinaryMask& m_occ, const ViewPrediction& pred,
                      const FusionConfig& cfg) {
    if (m_occ.width != pred.intrinsics.width || m_occ.height != pred.intrinsics.height)
        throw DomainError("final_mask: raster dimensions disagree");

    BinaryMask out(m_occ.width, m_occ.height, 0);
    for (int j = 0; j < out.height; ++j) {
        for (int i = 0; i < out.width; ++i) {
            bool keep = true;
            if (cfg.enable_occlusion && !m_occ.at(i, j)) keep = false;
            if (keep && cfg.enable_pred_mask && !(pred.mask_prob.at(i, j) > cfg.mask_threshold))
                keep = false;
            if (keep && cfg.enable_confidence &&
                !(activate_confidence(pred.raw_confidence.at(i, j)) > cfg.confidence_threshold))
                keep = false;
            out.at(i, j) = keep ? 1 : 0;
        }
    }
    return out;
}

PointCloud fuse_views(std::span<const ViewPrediction> predictions, const InputView& input,
                      const FusionConfig& cfg, int threads) {
    if (predictions.empty()) throw DomainError("fuse_views: need at least one prediction");

    std::vector<PointCloud> per_view(predictions.size());
    parallel_for(predictions.size(), threads, [&](std::size_t n) {
        const ViewPrediction& pred = predictions[n];
        if (pred.from_input_view && !cfg.enable_input_query) return;

        // The input-view query is exempt from occlusion filtering; feeding an
        // all-ones mask keeps final_mask uniform across views.
        BinaryMask occ = (pred.from_input_view || !cfg.enable_occlusion)
                             ? BinaryMask(pred.intrinsics.width, pred.intrinsics.height, 1)
                             : occlusion_mask(pred, input, cfg.occlusion_epsilon);
        const BinaryMask keep = final_mask(occ, pred, cfg);

        const PointMap cam_points = unproject_depth(pred.depth, pred.intrinsics);
        const PointMap world_points = transform_point_map(cam_points, pred.pose.inverse());

        PointCloud& cloud = per_view[n];
        for (int j = 0; j < keep.height; ++j) {
            for (int i = 0; i < keep.width; ++i) {
                const std::size_t idx = world_points.index(i, j);
                if (!world_points.validity[idx] || !keep.at(i, j)) continue;
                cloud.points.push_back(world_points.points[idx]);
                cloud.confidence.push_back(activate_confidence(pred.raw_confidence.at(i, j)));
            }
        }
    });

    PointCloud fused;
    for (const PointCloud& cloud : per_view) {
        fused.points.insert(fused.points.end(), cloud.points.begin(), cloud.points.end());
        fused.confidence.insert(fused.confidence.end(), cloud.confidence.begin(),
                                cloud.confidence.end());
    }
    return fused;
}

}  // namespace rayfuse
