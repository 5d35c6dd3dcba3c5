#pragma once

#include <cstdint>
#include <utility>

#include "rayfuse/camera.hpp"
#include "rayfuse/rng.hpp"

namespace rayfuse {

// Sensor-style input corruption. Every magnitude is a parameter; the defaults
// are deliberately mild. All draws flow from (seed, image index, augmentation
// kind), so toggling one augmentation never shifts another's randomness.
struct AugmentConfig {
    double depth_noise_sigma = 0.005;  // meters
    int hole_count_min = 0;
    int hole_count_max = 8;
    double hole_radius_min = 2.0;  // pixels
    double hole_radius_max = 12.0;
    int pixel_shift_max = 2;  // pixels, per axis

    double brightness_min = -20.0;  // additive, 8-bit units
    double brightness_max = 20.0;
    double contrast_min = 0.8;  // multiplicative about mid-gray
    double contrast_max = 1.2;
    double salt_pepper_prob = 0.005;  // per channel sample
    double rgb_noise_sigma = 5.0;     // 8-bit units

    double mask_fp_rate = 0.0;  // background pixels flipped to foreground
    double mask_fn_rate = 0.0;  // foreground pixels flipped to background

    std::uint64_t seed = 0;
};

enum class AugmentKind : std::uint64_t {
    DepthNoise = 0,
    DepthHoles = 1,
    DepthShift = 2,
    RgbBrightnessContrast = 3,
    RgbGaussian = 4,
    RgbSaltPepper = 5,
    MaskFalsePositive = 6,
    MaskFalseNegative = 7,
};

// The PRNG stream for one (image, kind) pair.
Pcg32 augment_stream(std::uint64_t seed, std::uint64_t image_index, AugmentKind kind);

// Gaussian noise on valid pixels, disk-shaped holes, then a whole-image
// integer shift with vacated pixels invalid. Never turns an invalid pixel
// valid; noised depths clamped at 0 drop to invalid.
DepthMap augment_depth(const DepthMap& depth, const AugmentConfig& cfg,
                       std::uint64_t image_index);

// clamp(contrast * (v - 128) + 128 + brightness + gaussian), then per-channel
// salt and pepper.
Image augment_rgb(const Image& img, const AugmentConfig& cfg, std::uint64_t image_index);

// Flips each background pixel to 1 with probability fp_rate and each
// foreground pixel to 0 with probability fn_rate. One draw per pixel in
// row-major order regardless of rates.
BinaryMask corrupt_mask(const BinaryMask& mask, double fp_rate, double fn_rate, Pcg32& rng);

}  // namespace rayfuse
