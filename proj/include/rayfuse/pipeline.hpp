#pragma once

#include <cstddef>
#include <vector>

#include "rayfuse/fusion.hpp"
#include "rayfuse/predictor.hpp"
#include "rayfuse/view_sampling.hpp"

namespace rayfuse {

struct CompletionStats {
    double sample_ms = 0.0;
    double predict_ms = 0.0;
    double fuse_ms = 0.0;
    double total_ms = 0.0;
    std::size_t views_total = 0;
    std::size_t points_out = 0;
};

// End-to-end completion: sample query views, run the predictor on each
// (concurrently), then fuse. The prediction for the appended input-view query
// is tagged so fusion can exempt it from the occlusion gate. Output point
// order is (view, row, column) and independent of `threads`.
PointCloud complete_scene(const InputView& input, const Predictor& predictor,
                          const ViewSamplingConfig& view_cfg, const FusionConfig& fusion_cfg,
                          int threads = 1, CompletionStats* stats = nullptr);

// The per-view predictions of the same pipeline, for callers that want to
// inspect or store them.
std::vector<ViewPrediction> predict_query_views(const InputView& input,
                                                const Predictor& predictor,
                                                const ViewSamplingConfig& view_cfg,
                                                int threads = 1);

}  // namespace rayfuse
