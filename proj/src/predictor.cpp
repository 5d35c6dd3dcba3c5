#include "rayfuse/predictor.hpp"

#include <utility>

#include "rayfuse/error.hpp"
#include "rayfuse/rng.hpp"
#include "rayfuse/scene_io.hpp"

namespace rayfuse {

void validate(const ViewPrediction& pred) {
    validate(pred.intrinsics);
    const int w = pred.intrinsics.width;
    const int h = pred.intrinsics.height;
    if (pred.depth.width != w || pred.depth.height != h ||
        pred.mask_prob.width != w || pred.mask_prob.height != h ||
        pred.raw_confidence.width != w || pred.raw_confidence.height != h)
        throw DomainError("view prediction: raster dimensions disagree with intrinsics");
    for (const double m : pred.mask_prob.values)
        if (!(m >= 0.0 && m <= 1.0))
            throw DomainError("view prediction: mask probability outside [0,1]");
}

OraclePredictor::OraclePredictor(Scene scene, OraclePredictorConfig cfg)
    : scene_(std::move(scene)), bvh_(scene_), cfg_(cfg) {
    if (cfg_.depth_noise_sigma < 0.0)
        throw DomainError("oracle predictor: negative noise sigma");
    if (cfg_.corrupt_fraction < 0.0 || cfg_.corrupt_fraction > 1.0)
        throw DomainError("oracle predictor: corrupt fraction outside [0,1]");
}

ViewPrediction OraclePredictor::predict(const InputView& input, std::size_t view_index,
                                        const RigidTransform& query_pose,
                                        const CameraIntrinsics& query_intrinsics) const {
    (void)input;  // the oracle reads the scene directly
    RenderResult rendered = render_depth(bvh_, query_pose, query_intrinsics);

    ViewPrediction pred;
    pred.pose = query_pose;
    pred.intrinsics = query_intrinsics;
    pred.depth = std::move(rendered.depth);
    pred.mask_prob = Raster(query_intrinsics.width, query_intrinsics.height, 0.0);
    pred.raw_confidence =
        Raster(query_intrinsics.width, query_intrinsics.height, cfg_.high_confidence_raw);

    // One stream per view index keeps predictions independent of the order
    // and thread layout in which views are evaluated.
    Pcg32 rng(cfg_.seed, view_index);
    for (int j = 0; j < query_intrinsics.height; ++j) {
        for (int i = 0; i < query_intrinsics.width; ++i) {
            if (!rendered.mask.at(i, j)) continue;
            pred.mask_prob.at(i, j) = 1.0;
            if (cfg_.corrupt_fraction > 0.0 && rng.uniform() < cfg_.corrupt_fraction) {
                double d = pred.depth.at(i, j) + rng.gaussian(0.0, cfg_.depth_noise_sigma);
                pred.depth.at(i, j) = d > 0.0 ? d : 0.0;
                pred.raw_confidence.at(i, j) = cfg_.low_confidence_raw;
            }
        }
    }
    return pred;
}

FilePredictor::FilePredictor(const std::string& directory) {
    views_ = load_prediction_dir(directory);
    if (views_.empty())
        throw IoError("prediction directory '" + directory + "' holds no views");
}

ViewPrediction FilePredictor::predict(const InputView& input, std::size_t view_index,
                                      const RigidTransform& query_pose,
                                      const CameraIntrinsics& query_intrinsics) const {
    (void)input;
    (void)query_pose;
    (void)query_intrinsics;
    if (view_index >= views_.size())
        throw DomainError("file predictor: view index " + std::to_string(view_index) +
                          " out of range (" + std::to_string(views_.size()) + " stored)");
    return views_[view_index];
}

}  // namespace rayfuse
