#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rayfuse/camera.hpp"
#include "rayfuse/input_view.hpp"
#include "rayfuse/mesh.hpp"

namespace rayfuse {

// One query view's prediction: per-pixel z-depth (0 = no surface),
// foreground probability and raw (pre-activation) confidence. Confidence is
// stored raw; consumers apply activate_confidence where thresholds or losses
// need the strictly positive form.
struct ViewPrediction {
    DepthMap depth;
    Raster mask_prob;
    Raster raw_confidence;
    RigidTransform pose;  // world -> query camera
    CameraIntrinsics intrinsics;
    bool from_input_view = false;
};

void validate(const ViewPrediction& pred);

// C = 1 + exp(raw), always > 1.
inline double activate_confidence(double raw) { return 1.0 + std::exp(raw); }

// Anything that maps (input view, query view) -> depth/mask/confidence. The
// trained network sits behind this seam in production; here an oracle and a
// file reader stand in. Implementations must be safe to call concurrently
// for different view indices.
class Predictor {
public:
    virtual ~Predictor() = default;

    virtual ViewPrediction predict(const InputView& input, std::size_t view_index,
                                   const RigidTransform& query_pose,
                                   const CameraIntrinsics& query_intrinsics) const = 0;

    // Number of stored views, if the predictor is backed by a fixed set.
    virtual std::size_t stored_view_count() const { return 0; }
};

struct OraclePredictorConfig {
    double depth_noise_sigma = 0.0;   // meters, applied to corrupted pixels
    double corrupt_fraction = 0.0;    // Bernoulli rate over foreground pixels
    double high_confidence_raw = 3.0; // 1 + e^3 ~ 21.1
    double low_confidence_raw = 0.0;  // 1 + e^0 = 2
    std::uint64_t seed = 0;
};

// Renders the ground-truth scene from the query pose and, optionally,
// corrupts a seeded fraction of foreground pixels with Gaussian depth noise
// and a low confidence score. With corrupt_fraction == 0 the prediction is
// exactly the renderer output plus constant confidence.
class OraclePredictor : public Predictor {
public:
    OraclePredictor(Scene scene, OraclePredictorConfig cfg);

    ViewPrediction predict(const InputView& input, std::size_t view_index,
                           const RigidTransform& query_pose,
                           const CameraIntrinsics& query_intrinsics) const override;

    const Bvh& bvh() const { return bvh_; }

private:
    Scene scene_;
    Bvh bvh_;
    OraclePredictorConfig cfg_;
};

// Replays predictions stored in a directory (view_0000.depth / .conf /
// .mask.pgm / .cam). Pose and intrinsics are echoed from the stored camera
// file; the passed query pose is ignored.
class FilePredictor : public Predictor {
public:
    explicit FilePredictor(const std::string& directory);

    ViewPrediction predict(const InputView& input, std::size_t view_index,
                           const RigidTransform& query_pose,
                           const CameraIntrinsics& query_intrinsics) const override;

    std::size_t stored_view_count() const override { return views_.size(); }

private:
    std::vector<ViewPrediction> views_;
};

}  // namespace rayfuse
