#pragma once

#include "rayfuse/camera.hpp"

namespace rayfuse {

struct LossConfig {
    double alpha = 0.2;        // confidence regularizer
    double lambda_mask = 0.1;  // mask loss weight
    // When set, the depth term is divided by the masked pixel count and the
    // mask term by the total pixel count.
    bool normalize = false;
};

// Confidence-weighted depth loss over ground-truth foreground pixels:
//   sum over m_gt = 1 of  C |d - d_gt| - alpha log C,   C = 1 + exp(raw).
double depth_loss(const DepthMap& d, const DepthMap& d_gt, const Raster& raw_conf,
                  const BinaryMask& m_gt, double alpha);

// Binary cross entropy over all pixels; probabilities are clamped to
// [1e-7, 1 - 1e-7] before the logs.
double mask_loss(const Raster& mask_prob, const BinaryMask& m_gt);

// depth_loss + lambda_mask * mask_loss (normalized per cfg).
double total_loss(const DepthMap& d, const DepthMap& d_gt, const Raster& raw_conf,
                  const Raster& mask_prob, const BinaryMask& m_gt, const LossConfig& cfg);

struct LossGradients {
    Raster wrt_depth;      // gated by m_gt; sign(d - d_gt) with subgradient 0 at 0
    Raster wrt_raw_conf;   // gated by m_gt
    Raster wrt_mask_prob;  // zero where the clamp is active
};

// Analytic partials of total_loss with respect to each prediction raster.
LossGradients loss_gradients(const DepthMap& d, const DepthMap& d_gt, const Raster& raw_conf,
                             const Raster& mask_prob, const BinaryMask& m_gt,
                             const LossConfig& cfg);

}  // namespace rayfuse
