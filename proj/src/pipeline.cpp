#include "rayfuse/pipeline.hpp"

#include <chrono>

#include "rayfuse/parallel.hpp"

namespace rayfuse {

namespace {

double ms_since(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

}  // namespace

std::vector<ViewPrediction> predict_query_views(const InputView& input,
                                                const Predictor& predictor,
                                                const ViewSamplingConfig& view_cfg,
                                                int threads) {
    const std::vector<QueryView> views = sample_query_views(input, view_cfg);
    std::vector<ViewPrediction> predictions(views.size());
    parallel_for(views.size(), threads, [&](std::size_t k) {
        predictions[k] = predictor.predict(input, k, views[k].pose, views[k].intrinsics);
        predictions[k].from_input_view = views[k].is_input_view;
    });
    return predictions;
}

PointCloud complete_scene(const InputView& input, const Predictor& predictor,
                          const ViewSamplingConfig& view_cfg, const FusionConfig& fusion_cfg,
                          int threads, CompletionStats* stats) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<QueryView> views = sample_query_views(input, view_cfg);
    const double sample_ms = ms_since(t0);

    const auto t1 = std::chrono::steady_clock::now();
    std::vector<ViewPrediction> predictions(views.size());
    parallel_for(views.size(), threads, [&](std::size_t k) {
        predictions[k] = predictor.predict(input, k, views[k].pose, views[k].intrinsics);
        predictions[k].from_input_view = views[k].is_input_view;
    });
    const double predict_ms = ms_since(t1);

    const auto t2 = std::chrono::steady_clock::now();
    PointCloud fused = fuse_views(predictions, input, fusion_cfg, threads);
    const double fuse_ms = ms_since(t2);

    if (stats) {
        stats->sample_ms = sample_ms;
        stats->predict_ms = predict_ms;
        stats->fuse_ms = fuse_ms;
        stats->total_ms = ms_since(t0);
        stats->views_total = views.size();
        stats->points_out = fused.size();
    }
    return fused;
}

}  // namespace rayfuse
