#include <cmath>

#include "doctest.h"
#include "rayfuse/augmentation.hpp"
#include "rayfuse/error.hpp"

using namespace rayfuse;

namespace {

AugmentConfig zero_config() {
    AugmentConfig cfg;
    cfg.depth_noise_sigma = 0.0;
    cfg.hole_count_min = cfg.hole_count_max = 0;
    cfg.pixel_shift_max = 0;
    cfg.brightness_min = cfg.brightness_max = 0.0;
    cfg.contrast_min = cfg.contrast_max = 1.0;
    cfg.salt_pepper_prob = 0.0;
    cfg.rgb_noise_sigma = 0.0;
    return cfg;
}

DepthMap flat_depth(int w, int h, double value) { return DepthMap(w, h, value); }

}  // namespace

TEST_CASE("zero config is the identity on depth and rgb") {
    const DepthMap depth = flat_depth(32, 24, 1.75);
    const AugmentConfig cfg = zero_config();
    const DepthMap out = augment_depth(depth, cfg, 0);
    CHECK(out.values == depth.values);

    Image img(16, 16);
    for (std::size_t s = 0; s < img.rgb.size(); ++s)
        img.rgb[s] = static_cast<std::uint8_t>(s * 37 % 256);
    const Image out_img = augment_rgb(img, cfg, 0);
    CHECK(out_img.rgb == img.rgb);
}

TEST_CASE("augmentation is a pure function of (input, config, seed)") {
    AugmentConfig cfg;  // defaults: mild everything
    cfg.seed = 17;
    DepthMap depth = flat_depth(64, 48, 2.0);
    depth.at(5, 5) = 0.0;

    const DepthMap a = augment_depth(depth, cfg, 3);
    const DepthMap b = augment_depth(depth, cfg, 3);
    CHECK(a.values == b.values);

    const DepthMap c = augment_depth(depth, cfg, 4);  // different image stream
    CHECK(a.values != c.values);
}

TEST_CASE("depth noise matches its configured sigma") {
    AugmentConfig cfg = zero_config();
    cfg.depth_noise_sigma = 0.01;
    cfg.seed = 5;

    const int w = 400, h = 250;  // 1e5 pixels
    const DepthMap depth = flat_depth(w, h, 3.0);
    const DepthMap out = augment_depth(depth, cfg, 0);

    double sum = 0.0, sum2 = 0.0;
    std::size_t n = 0;
    for (std::size_t s = 0; s < out.values.size(); ++s) {
        const double delta = out.values[s] - depth.values[s];
        sum += delta;
        sum2 += delta * delta;
        ++n;
    }
    const double mean = sum / static_cast<double>(n);
    const double stdev = std::sqrt(sum2 / static_cast<double>(n) - mean * mean);
    CHECK(std::fabs(stdev - 0.01) < 0.0002);  // within 2%
}

TEST_CASE("holes invalidate disks and never create depth") {
    AugmentConfig cfg = zero_config();
    cfg.hole_count_min = cfg.hole_count_max = 4;
    cfg.hole_radius_min = 2.0;
    cfg.hole_radius_max = 6.0;
    cfg.seed = 11;

    DepthMap depth = flat_depth(64, 64, 1.0);
    depth.at(10, 10) = 0.0;
    const DepthMap out = augment_depth(depth, cfg, 0);

    std::size_t invalid = 0;
    for (std::size_t s = 0; s < out.values.size(); ++s) {
        if (depth.values[s] == 0.0) CHECK(out.values[s] == 0.0);  // invalid stays invalid
        if (out.values[s] == 0.0) ++invalid;
    }
    CHECK(invalid > 4 * 3 * 3);  // four holes of radius >= 2
}

TEST_CASE("pixel shift moves content and invalidates vacated pixels") {
    AugmentConfig cfg = zero_config();
    cfg.pixel_shift_max = 2;
    cfg.seed = 40;  // chosen so the drawn shift is nonzero

    DepthMap depth(16, 16, 0.0);
    depth.at(8, 8) = 2.5;
    const DepthMap out = augment_depth(depth, cfg, 0);

    std::size_t found = 0;
    int fi = -1, fj = -1;
    for (int j = 0; j < 16; ++j)
        for (int i = 0; i < 16; ++i)
            if (out.at(i, j) == 2.5) {
                ++found;
                fi = i;
                fj = j;
            }
    REQUIRE(found == 1);
    CHECK(std::abs(fi - 8) <= 2);
    CHECK(std::abs(fj - 8) <= 2);
}

TEST_CASE("enabling one depth augmentation leaves the others' draws unchanged") {
    AugmentConfig holes_only = zero_config();
    holes_only.hole_count_min = holes_only.hole_count_max = 3;
    holes_only.seed = 23;

    AugmentConfig holes_and_noise = holes_only;
    holes_and_noise.depth_noise_sigma = 1e-9;  // tiny: never clamps a 2 m depth to 0

    const DepthMap depth = flat_depth(48, 48, 2.0);
    const DepthMap a = augment_depth(depth, holes_only, 0);
    const DepthMap b = augment_depth(depth, holes_and_noise, 0);

    for (std::size_t s = 0; s < a.values.size(); ++s)
        CHECK((a.values[s] == 0.0) == (b.values[s] == 0.0));  // identical hole pattern
}

TEST_CASE("rgb augmentation stays in range and salt/pepper hits its rate") {
    AugmentConfig cfg = zero_config();
    cfg.salt_pepper_prob = 0.01;
    cfg.seed = 31;

    Image img(640, 521);  // ~1e6 channel samples
    for (std::size_t s = 0; s < img.rgb.size(); ++s) img.rgb[s] = 128;
    const Image out = augment_rgb(img, cfg, 0);

    std::size_t corrupted = 0;
    for (std::size_t s = 0; s < out.rgb.size(); ++s) {
        CHECK((out.rgb[s] == 128 || out.rgb[s] == 0 || out.rgb[s] == 255));
        if (out.rgb[s] != 128) ++corrupted;
    }
    const double fraction = static_cast<double>(corrupted) / static_cast<double>(out.rgb.size());
    CHECK(std::fabs(fraction - 0.01) < 0.002);

    SUBCASE("brightness and contrast clamp to [0, 255]") {
        AugmentConfig bright = zero_config();
        bright.brightness_min = bright.brightness_max = 300.0;
        const Image white = augment_rgb(img, bright, 0);
        for (const auto v : white.rgb) CHECK(v == 255);
    }
}

TEST_CASE("corrupt_mask endpoints and rates") {
    BinaryMask mask(100, 100, 0);
    for (int j = 0; j < 100; ++j)
        for (int i = 0; i < 50; ++i) mask.at(i, j) = 1;  // left half foreground

    SUBCASE("zero rates are the identity") {
        Pcg32 rng(1, 1);
        const BinaryMask out = corrupt_mask(mask, 0.0, 0.0, rng);
        CHECK(out.values == mask.values);
    }

    SUBCASE("unit rates give the exact complement") {
        Pcg32 rng(1, 1);
        const BinaryMask out = corrupt_mask(mask, 1.0, 1.0, rng);
        for (std::size_t s = 0; s < mask.values.size(); ++s)
            CHECK(out.values[s] == (mask.values[s] ? 0 : 1));
    }

    SUBCASE("a 0.2 false-positive rate flips about a fifth of the background") {
        Pcg32 rng(7, 0);
        const BinaryMask out = corrupt_mask(mask, 0.2, 0.0, rng);
        std::size_t flips = 0;
        for (int j = 0; j < 100; ++j)
            for (int i = 50; i < 100; ++i)
                if (out.at(i, j)) ++flips;
        CHECK(flips > 800);
        CHECK(flips < 1200);  // 5000 background pixels, expect ~1000
        // Foreground untouched when fn = 0.
        for (int j = 0; j < 100; ++j)
            for (int i = 0; i < 50; ++i) CHECK(out.at(i, j) == 1);
    }

    CHECK_THROWS_AS(
        [&] {
            Pcg32 rng(0, 0);
            corrupt_mask(mask, 1.5, 0.0, rng);
        }(),
        DomainError);
}
