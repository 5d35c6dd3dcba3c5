#include "rayfuse/augmentation.hpp"

#include <algorithm>
#include <cmath>

#include "rayfuse/error.hpp"

namespace rayfuse {

Pcg32 augment_stream(std::uint64_t seed, std::uint64_t image_index, AugmentKind kind) {
    return Pcg32(seed, image_index * 16 + static_cast<std::uint64_t>(kind));
}

DepthMap augment_depth(const DepthMap& depth, const AugmentConfig& cfg,
                       std::uint64_t image_index) {
    if (cfg.hole_count_min > cfg.hole_count_max || cfg.hole_radius_min > cfg.hole_radius_max)
        throw DomainError("augment config: ill-ordered hole range");

    DepthMap out = depth;

    if (cfg.depth_noise_sigma > 0.0) {
        Pcg32 rng = augment_stream(cfg.seed, image_index, AugmentKind::DepthNoise);
        for (int j = 0; j < out.height; ++j) {
            for (int i = 0; i < out.width; ++i) {
                const double d = out.at(i, j);
                if (d <= 0.0) continue;
                const double noised = d + rng.gaussian(0.0, cfg.depth_noise_sigma);
                out.at(i, j) = noised > 0.0 ? noised : 0.0;
            }
        }
    }

    if (cfg.hole_count_max > 0) {
        Pcg32 rng = augment_stream(cfg.seed, image_index, AugmentKind::DepthHoles);
        const auto holes =
            static_cast<int>(rng.next_int(cfg.hole_count_min, cfg.hole_count_max));
        for (int h = 0; h < holes; ++h) {
            const auto ci = static_cast<int>(rng.next_below(static_cast<std::uint32_t>(out.width)));
            const auto cj =
                static_cast<int>(rng.next_below(static_cast<std::uint32_t>(out.height)));
            const double radius = rng.uniform(cfg.hole_radius_min, cfg.hole_radius_max);
            const int r_ceil = static_cast<int>(std::ceil(radius));
            for (int j = std::max(0, cj - r_ceil); j <= std::min(out.height - 1, cj + r_ceil); ++j)
                for (int i = std::max(0, ci - r_ceil); i <= std::min(out.width - 1, ci + r_ceil);
                     ++i) {
                    const double di = i - ci, dj = j - cj;
                    if (di * di + dj * dj <= radius * radius) out.at(i, j) = 0.0;
                }
        }
    }

    if (cfg.pixel_shift_max > 0) {
        Pcg32 rng = augment_stream(cfg.seed, image_index, AugmentKind::DepthShift);
        const auto dx = static_cast<int>(rng.next_int(-cfg.pixel_shift_max, cfg.pixel_shift_max));
        const auto dy = static_cast<int>(rng.next_int(-cfg.pixel_shift_max, cfg.pixel_shift_max));
        if (dx != 0 || dy != 0) {
            DepthMap shifted(out.width, out.height, 0.0);
            for (int j = 0; j < out.height; ++j) {
                for (int i = 0; i < out.width; ++i) {
                    const int si = i - dx;
                    const int sj = j - dy;
                    if (si >= 0 && si < out.width && sj >= 0 && sj < out.height)
                        shifted.at(i, j) = out.at(si, sj);
                }
            }
            out = std::move(shifted);
        }
    }

    return out;
}

Image augment_rgb(const Image& img, const AugmentConfig& cfg, std::uint64_t image_index) {
    if (cfg.brightness_min > cfg.brightness_max || cfg.contrast_min > cfg.contrast_max)
        throw DomainError("augment config: ill-ordered brightness/contrast range");
    if (cfg.salt_pepper_prob < 0.0 || cfg.salt_pepper_prob > 1.0)
        throw DomainError("augment config: salt/pepper probability outside [0,1]");

    Image out = img;
    const std::size_t samples = out.rgb.size();

    const bool identity_bc = cfg.brightness_min == 0.0 && cfg.brightness_max == 0.0 &&
                             cfg.contrast_min == 1.0 && cfg.contrast_max == 1.0;
    const bool has_gauss = cfg.rgb_noise_sigma > 0.0;

    if (!identity_bc || has_gauss) {
        Pcg32 bc_rng = augment_stream(cfg.seed, image_index, AugmentKind::RgbBrightnessContrast);
        const double contrast =
            identity_bc ? 1.0 : bc_rng.uniform(cfg.contrast_min, cfg.contrast_max);
        const double brightness =
            identity_bc ? 0.0 : bc_rng.uniform(cfg.brightness_min, cfg.brightness_max);

        Pcg32 gauss_rng = augment_stream(cfg.seed, image_index, AugmentKind::RgbGaussian);
        for (std::size_t s = 0; s < samples; ++s) {
            double v = contrast * (out.rgb[s] - 128.0) + 128.0 + brightness;
            if (has_gauss) v += gauss_rng.gaussian(0.0, cfg.rgb_noise_sigma);
            v = std::round(v);
            out.rgb[s] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
        }
    }

    if (cfg.salt_pepper_prob > 0.0) {
        Pcg32 rng = augment_stream(cfg.seed, image_index, AugmentKind::RgbSaltPepper);
        for (std::size_t s = 0; s < samples; ++s) {
            if (rng.uniform() < cfg.salt_pepper_prob)
                out.rgb[s] = (rng.next_u32() & 1u) ? 255 : 0;
        }
    }

    return out;
}

BinaryMask corrupt_mask(const BinaryMask& mask, double fp_rate, double fn_rate, Pcg32& rng) {
    if (fp_rate < 0.0 || fp_rate > 1.0 || fn_rate < 0.0 || fn_rate > 1.0)
        throw DomainError("corrupt_mask: rates must lie in [0,1]");

    BinaryMask out = mask;
    for (std::size_t s = 0; s < out.values.size(); ++s) {
        const double u = rng.uniform();
        if (out.values[s])
            out.values[s] = (u < fn_rate) ? 0 : 1;
        else
            out.values[s] = (u < fp_rate) ? 1 : 0;
    }
    return out;
}

}  // namespace rayfuse
