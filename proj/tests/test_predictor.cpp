#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "rayfuse/error.hpp"
#include "rayfuse/pipeline.hpp"
#include "rayfuse/predictor.hpp"
#include "rayfuse/scene_io.hpp"
#include "support/synthetic.hpp"

using namespace rayfuse;
using namespace rayfuse::testsupport;

namespace {

std::string temp_dir(const char* name) {
    const auto dir = std::filesystem::temp_directory_path() / "rayfuse_tests" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("noiseless oracle is exactly the renderer plus constant confidence") {
    const Scene scene = make_cluster_scene(21);
    const CameraPose camera = make_input_camera(21);
    const InputView input = make_input_view(scene, camera);

    OraclePredictorConfig cfg;  // corrupt_fraction = 0
    const OraclePredictor oracle(scene, cfg);

    const CameraPose query = make_input_camera(99);
    const ViewPrediction pred = oracle.predict(input, 4, query.pose, query.intrinsics);
    const RenderResult rendered = render_depth(scene, query.pose, query.intrinsics);

    CHECK(std::memcmp(pred.depth.values.data(), rendered.depth.values.data(),
                      pred.depth.values.size() * sizeof(double)) == 0);
    for (std::size_t s = 0; s < pred.mask_prob.values.size(); ++s) {
        CHECK(pred.mask_prob.values[s] == (rendered.mask.values[s] ? 1.0 : 0.0));
        CHECK(pred.raw_confidence.values[s] == cfg.high_confidence_raw);
    }
}

TEST_CASE("oracle corruption is seeded, counted, and confidence-tagged") {
    const Scene scene = make_cluster_scene(22);
    const CameraPose camera = make_input_camera(22);
    const InputView input = make_input_view(scene, camera);

    OraclePredictorConfig cfg;
    cfg.corrupt_fraction = 0.1;
    cfg.depth_noise_sigma = 0.02;
    cfg.seed = 7;
    const OraclePredictor oracle(scene, cfg);

    const ViewPrediction a = oracle.predict(input, 2, camera.pose, camera.intrinsics);
    const ViewPrediction b = oracle.predict(input, 2, camera.pose, camera.intrinsics);
    CHECK(std::memcmp(a.depth.values.data(), b.depth.values.data(),
                      a.depth.values.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(a.raw_confidence.values.data(), b.raw_confidence.values.data(),
                      a.raw_confidence.values.size() * sizeof(double)) == 0);

    std::size_t foreground = 0, corrupted = 0;
    for (std::size_t s = 0; s < a.mask_prob.values.size(); ++s) {
        if (a.mask_prob.values[s] != 1.0) continue;
        ++foreground;
        if (a.raw_confidence.values[s] == cfg.low_confidence_raw) ++corrupted;
    }
    REQUIRE(foreground > 400);
    // Binomial(foreground, 0.1): stay within 5 sigma of the mean.
    const double mean = 0.1 * static_cast<double>(foreground);
    const double sigma = std::sqrt(0.09 * static_cast<double>(foreground));
    CHECK(std::fabs(static_cast<double>(corrupted) - mean) < 5.0 * sigma);

    // Different view index, different stream.
    const ViewPrediction c = oracle.predict(input, 3, camera.pose, camera.intrinsics);
    CHECK(std::memcmp(a.raw_confidence.values.data(), c.raw_confidence.values.data(),
                      a.raw_confidence.values.size() * sizeof(double)) != 0);
}

TEST_CASE("activated confidence values used by the fusion threshold") {
    CHECK(activate_confidence(3.0) == doctest::Approx(21.0855369).epsilon(1e-6));
    CHECK(activate_confidence(3.0) > 5.0);   // clean pixels pass tau = 5
    CHECK(activate_confidence(0.0) == 2.0);  // corrupted default fails tau = 5
    CHECK(activate_confidence(-30.0) > 1.0);
}

TEST_CASE("file predictor replays a prediction directory bit-exactly") {
    const Scene scene = make_cluster_scene(23);
    const CameraPose camera = make_input_camera(23, 64, 64, 80.0);
    const InputView input = make_input_view(scene, camera);

    ViewSamplingConfig view_cfg;
    view_cfg.n_views = 4;
    view_cfg.query_intrinsics = input.intrinsics;

    const OraclePredictor oracle(scene, {});
    const auto predictions = predict_query_views(input, oracle, view_cfg);

    const std::string dir = temp_dir("pred_dir");
    save_prediction_dir(dir, predictions);

    const FilePredictor replay(dir);
    REQUIRE(replay.stored_view_count() == predictions.size());
    for (std::size_t k = 0; k < predictions.size(); ++k) {
        // The stored pose/intrinsics are echoed regardless of what is passed.
        const ViewPrediction pred = replay.predict(input, k, RigidTransform{}, input.intrinsics);
        CHECK(std::memcmp(pred.pose.rotation.m.data(), predictions[k].pose.rotation.m.data(),
                          9 * sizeof(double)) == 0);
        // Rasters pass through f32 storage on disk.
        REQUIRE(pred.depth.values.size() == predictions[k].depth.values.size());
        for (std::size_t s = 0; s < pred.depth.values.size(); ++s)
            CHECK(pred.depth.values[s] ==
                  static_cast<double>(static_cast<float>(predictions[k].depth.values[s])));
        CHECK(pred.raw_confidence.values == predictions[k].raw_confidence.values);
    }

    // Serializing what was loaded reproduces the files byte for byte.
    const std::string dir2 = temp_dir("pred_dir_roundtrip");
    std::vector<ViewPrediction> loaded = load_prediction_dir(dir);
    save_prediction_dir(dir2, loaded);
    for (std::size_t k = 0; k < predictions.size(); ++k) {
        char stem[32];
        std::snprintf(stem, sizeof(stem), "view_%04zu", k);
        for (const char* ext : {".depth", ".conf", ".mask.pgm", ".cam"}) {
            const std::string name = std::string(stem) + ext;
            CHECK(slurp(dir + "/" + name) == slurp(dir2 + "/" + name));
        }
    }

    CHECK_THROWS_AS(replay.predict(input, predictions.size(), RigidTransform{}, input.intrinsics),
                    DomainError);
}

TEST_CASE("prediction validation rejects out-of-range mask probabilities") {
    ViewPrediction pred;
    pred.intrinsics = {10.0, 10.0, 2.0, 2.0, 4, 4};
    pred.depth = DepthMap(4, 4, 1.0);
    pred.mask_prob = Raster(4, 4, 0.5);
    pred.raw_confidence = Raster(4, 4, 0.0);
    CHECK_NOTHROW(validate(pred));
    pred.mask_prob.at(1, 1) = 1.5;
    CHECK_THROWS_AS(validate(pred), DomainError);
}
