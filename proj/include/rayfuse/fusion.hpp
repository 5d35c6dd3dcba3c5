#pragma once

#include <span>

#include "rayfuse/cloud.hpp"
#include "rayfuse/input_view.hpp"
#include "rayfuse/predictor.hpp"

namespace rayfuse {

struct FusionConfig {
    double confidence_threshold = 5.0;  // tau, in activated-confidence units
    double mask_threshold = 0.5;
    double occlusion_epsilon = 0.0;  // meters added to the input depth comparison
    bool enable_occlusion = true;
    bool enable_pred_mask = true;
    bool enable_confidence = true;
    bool enable_input_query = true;
};

// Marks predicted pixels whose 3D point is hidden in the input view: the
// point must project inside the input image onto a foreground pixel with
// valid depth, strictly behind it (z > D + eps). Out-of-bounds, behind-camera
// and background projections all yield 0. Depth lookup is nearest-pixel.
BinaryMask occlusion_mask(const ViewPrediction& pred, const InputView& input, double eps = 0.0);

// Product of the enabled gates per pixel; a disabled gate contributes 1. The
// mask gate is strict (> threshold) and the confidence gate compares the
// activated confidence 1 + exp(raw) against the threshold, also strictly.
BinaryMask final_mask(const BinaryMask& m_occ, const ViewPrediction& pred,
                      const FusionConfig& cfg);

// Unprojects every valid pixel that passes final_mask into the world frame
// and concatenates across views in (view, row, column) order. The input-view
// query bypasses the occlusion gate (its depth matches the input observation
// exactly, so a strict comparison would discard all of it) but not the mask
// or confidence gates. Per-point confidence is the activated confidence.
// An empty result is a valid outcome, not an error.
PointCloud fuse_views(std::span<const ViewPrediction> predictions, const InputView& input,
                      const FusionConfig& cfg, int threads = 1);

}  // namespace rayfuse
