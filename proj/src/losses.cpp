#include "rayfuse/losses.hpp"

#include <algorithm>
#include <cmath>

#include "rayfuse/error.hpp"

namespace rayfuse {

namespace {

constexpr double kProbClamp = 1e-7;

void require_same_shape(int w, int h, const Raster& r, const char* what) {
    if (r.width != w || r.height != h)
        throw DomainError(std::string("loss: ") + what + " dimensions disagree");
}

std::size_t masked_count(const BinaryMask& m) {
    std::size_t n = 0;
    for (const auto v : m.values) n += v ? 1 : 0;
    return n;
}

}  // namespace

double depth_loss(const DepthMap& d, const DepthMap& d_gt, const Raster& raw_conf,
                  const BinaryMask& m_gt, double alpha) {
    if (!(alpha > 0.0)) throw DomainError("loss: alpha must be positive");
    const int w = d.width, h = d.height;
    require_same_shape(w, h, d_gt, "ground-truth depth");
    require_same_shape(w, h, raw_conf, "confidence");
    if (m_gt.width != w || m_gt.height != h)
        throw DomainError("loss: mask dimensions disagree");

    double sum = 0.0;
    for (std::size_t s = 0; s < d.values.size(); ++s) {
        if (!m_gt.values[s]) continue;
        const double c = 1.0 + std::exp(raw_conf.values[s]);
        sum += c * std::fabs(d.values[s] - d_gt.values[s]) - alpha * std::log(c);
    }
    return sum;
}

double mask_loss(const Raster& mask_prob, const BinaryMask& m_gt) {
    if (mask_prob.width != m_gt.width || mask_prob.height != m_gt.height)
        throw DomainError("loss: mask dimensions disagree");

    double sum = 0.0;
    for (std::size_t s = 0; s < mask_prob.values.size(); ++s) {
        const double m = std::clamp(mask_prob.values[s], kProbClamp, 1.0 - kProbClamp);
        sum += m_gt.values[s] ? -std::log(m) : -std::log(1.0 - m);
    }
    return sum;
}

double total_loss(const DepthMap& d, const DepthMap& d_gt, const Raster& raw_conf,
                  const Raster& mask_prob, const BinaryMask& m_gt, const LossConfig& cfg) {
    double depth_term = depth_loss(d, d_gt, raw_conf, m_gt, cfg.alpha);
    double mask_term = mask_loss(mask_prob, m_gt);
    if (cfg.normalize) {
        depth_term /= static_cast<double>(std::max<std::size_t>(1, masked_count(m_gt)));
        mask_term /= static_cast<double>(std::max<std::size_t>(1, m_gt.size()));
    }
    return depth_term + cfg.lambda_mask * mask_term;
}

LossGradients loss_gradients(const DepthMap& d, const DepthMap& d_gt, const Raster& raw_conf,
                             const Raster& mask_prob, const BinaryMask& m_gt,
                             const LossConfig& cfg) {
    if (!(cfg.alpha > 0.0)) throw DomainError("loss: alpha must be positive");
    const int w = d.width, h = d.height;
    require_same_shape(w, h, d_gt, "ground-truth depth");
    require_same_shape(w, h, raw_conf, "confidence");
    require_same_shape(w, h, mask_prob, "mask probability");
    if (m_gt.width != w || m_gt.height != h)
        throw DomainError("loss: mask dimensions disagree");

    const double depth_norm =
        cfg.normalize ? 1.0 / static_cast<double>(std::max<std::size_t>(1, masked_count(m_gt)))
                      : 1.0;
    const double mask_norm =
        cfg.normalize ? cfg.lambda_mask / static_cast<double>(std::max<std::size_t>(1, m_gt.size()))
                      : cfg.lambda_mask;

    LossGradients g;
    g.wrt_depth = Raster(w, h, 0.0);
    g.wrt_raw_conf = Raster(w, h, 0.0);
    g.wrt_mask_prob = Raster(w, h, 0.0);

    for (std::size_t s = 0; s < d.values.size(); ++s) {
        if (m_gt.values[s]) {
            const double raw = raw_conf.values[s];
            const double c = 1.0 + std::exp(raw);
            const double residual = d.values[s] - d_gt.values[s];
            const double sign = residual > 0.0 ? 1.0 : residual < 0.0 ? -1.0 : 0.0;
            g.wrt_depth.values[s] = depth_norm * c * sign;
            // d/draw [C |r| - alpha log C] = (|r| - alpha / C) * exp(raw)
            g.wrt_raw_conf.values[s] =
                depth_norm * (std::fabs(residual) - cfg.alpha / c) * std::exp(raw);
        }
        const double m = mask_prob.values[s];
        if (m > kProbClamp && m < 1.0 - kProbClamp)
            g.wrt_mask_prob.values[s] =
                mask_norm * (m_gt.values[s] ? -1.0 / m : 1.0 / (1.0 - m));
    }
    return g;
}

}  // namespace rayfuse
