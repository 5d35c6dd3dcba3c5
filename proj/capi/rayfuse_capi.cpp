#include "rayfuse/rayfuse.h"

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "rayfuse/alignment.hpp"
#include "rayfuse/augmentation.hpp"
#include "rayfuse/error.hpp"
#include "rayfuse/metrics.hpp"
#include "rayfuse/pipeline.hpp"
#include "rayfuse/scene_io.hpp"

namespace fs = std::filesystem;

namespace {

thread_local std::string g_last_error;

int set_error(rf_status code, const std::string& message) {
    g_last_error = message;
    return code;
}

// Maps core exceptions onto status codes.
template <typename Fn>
int guarded(Fn&& fn) {
    try {
        fn();
        return RF_OK;
    } catch (const rayfuse::IoError& e) {
        return set_error(RF_ERROR_IO, e.what());
    } catch (const rayfuse::DomainError& e) {
        return set_error(RF_ERROR_DOMAIN, e.what());
    } catch (const std::exception& e) {
        return set_error(RF_ERROR_INTERNAL, e.what());
    }
}

int require(bool ok, const char* what) {
    return ok ? RF_OK : set_error(RF_ERROR_INVALID_ARGUMENT, what);
}

}  // namespace

struct rf_scene {
    rayfuse::SceneFile file;
};
struct rf_camera {
    rayfuse::CameraPose camera;
};
struct rf_raster {
    rayfuse::Raster raster;
};
struct rf_mask {
    rayfuse::BinaryMask mask;
};
struct rf_image {
    rayfuse::Image image;
};
struct rf_cloud {
    rayfuse::PointCloud cloud;
};
struct rf_input_view {
    rayfuse::InputView view;
};

extern "C" {

const char* rf_version(void) { return "0.1.0"; }

const char* rf_last_error(void) { return g_last_error.c_str(); }

/* ------------------------------------------------------------------ scenes */

int rf_scene_load(const char* path, rf_scene** out) {
    if (int rc = require(path && out, "rf_scene_load: null argument")) return rc;
    return guarded([&] {
        auto scene = std::make_unique<rf_scene>();
        scene->file = rayfuse::load_scene(path);
        *out = scene.release();
    });
}

void rf_scene_free(rf_scene* scene) { delete scene; }

int rf_scene_triangle_count(const rf_scene* scene, uint64_t* out) {
    if (int rc = require(scene && out, "rf_scene_triangle_count: null argument")) return rc;
    return guarded([&] {
        uint64_t n = 0;
        for (const auto& inst : scene->file.scene.instances)
            if (inst.mesh) n += inst.mesh->triangles.size();
        *out = n;
    });
}

int rf_scene_input_camera(const rf_scene* scene, rf_camera** out) {
    if (int rc = require(scene && out, "rf_scene_input_camera: null argument")) return rc;
    return guarded([&] {
        if (!scene->file.input_camera)
            throw rayfuse::DomainError("scene file has no camera block");
        *out = new rf_camera{*scene->file.input_camera};
    });
}

int rf_scene_sample_surface(const rf_scene* scene, uint64_t count, uint64_t seed, rf_cloud** out) {
    if (int rc = require(scene && out, "rf_scene_sample_surface: null argument")) return rc;
    return guarded([&] {
        *out = new rf_cloud{rayfuse::sample_surface(scene->file.scene,
                                                    static_cast<std::size_t>(count), seed)};
    });
}

/* ----------------------------------------------------------------- cameras */

int rf_camera_load(const char* path, rf_camera** out) {
    if (int rc = require(path && out, "rf_camera_load: null argument")) return rc;
    return guarded([&] { *out = new rf_camera{rayfuse::load_camera(path)}; });
}

int rf_camera_save(const rf_camera* camera, const char* path) {
    if (int rc = require(camera && path, "rf_camera_save: null argument")) return rc;
    return guarded([&] { rayfuse::save_camera(path, camera->camera); });
}

void rf_camera_free(rf_camera* camera) { delete camera; }

int rf_camera_image_size(const rf_camera* camera, int32_t* width, int32_t* height) {
    if (int rc = require(camera && width && height, "rf_camera_image_size: null argument"))
        return rc;
    *width = camera->camera.intrinsics.width;
    *height = camera->camera.intrinsics.height;
    return RF_OK;
}

/* ----------------------------------------------------------------- rasters */

int rf_raster_load(const char* path, rf_raster** out) {
    if (int rc = require(path && out, "rf_raster_load: null argument")) return rc;
    return guarded([&] { *out = new rf_raster{rayfuse::load_raster(path)}; });
}

int rf_raster_save(const rf_raster* raster, const char* path) {
    if (int rc = require(raster && path, "rf_raster_save: null argument")) return rc;
    return guarded([&] { rayfuse::save_raster(path, raster->raster); });
}

void rf_raster_free(rf_raster* raster) { delete raster; }

int rf_raster_size(const rf_raster* raster, int32_t* width, int32_t* height) {
    if (int rc = require(raster && width && height, "rf_raster_size: null argument")) return rc;
    *width = raster->raster.width;
    *height = raster->raster.height;
    return RF_OK;
}

int rf_mask_load(const char* path, rf_mask** out) {
    if (int rc = require(path && out, "rf_mask_load: null argument")) return rc;
    return guarded([&] { *out = new rf_mask{rayfuse::load_mask(path)}; });
}

int rf_mask_save(const rf_mask* mask, const char* path) {
    if (int rc = require(mask && path, "rf_mask_save: null argument")) return rc;
    return guarded([&] { rayfuse::save_mask(path, mask->mask); });
}

void rf_mask_free(rf_mask* mask) { delete mask; }

int rf_image_load(const char* path, rf_image** out) {
    if (int rc = require(path && out, "rf_image_load: null argument")) return rc;
    return guarded([&] { *out = new rf_image{rayfuse::load_image(path)}; });
}

int rf_image_save(const rf_image* image, const char* path) {
    if (int rc = require(image && path, "rf_image_save: null argument")) return rc;
    return guarded([&] { rayfuse::save_image(path, image->image); });
}

void rf_image_free(rf_image* image) { delete image; }

/* --------------------------------------------------------------- rendering */

int rf_render(const rf_scene* scene, const rf_camera* camera, int32_t threads,
              rf_raster** out_depth, rf_mask** out_mask) {
    if (int rc = require(scene && camera && out_depth && out_mask, "rf_render: null argument"))
        return rc;
    return guarded([&] {
        rayfuse::RenderResult result = rayfuse::render_depth(
            scene->file.scene, camera->camera.pose, camera->camera.intrinsics,
            std::max<int32_t>(1, threads));
        *out_depth = new rf_raster{std::move(result.depth)};
        *out_mask = new rf_mask{std::move(result.mask)};
    });
}

/* ------------------------------------------------------------ input views */

int rf_input_view_load(const char* directory, rf_input_view** out) {
    if (int rc = require(directory && out, "rf_input_view_load: null argument")) return rc;
    return guarded([&] { *out = new rf_input_view{rayfuse::load_input_view(directory)}; });
}

void rf_input_view_free(rf_input_view* view) { delete view; }

/* -------------------------------------------------------------- completion */

void rf_complete_options_init(rf_complete_options* options) {
    if (!options) return;
    std::memset(options, 0, sizeof(*options));
    options->predictor = RF_PREDICTOR_ORACLE;
    options->lambda_bb = 1.3;
    options->lambda_cam = 0.7;
    options->n_views = 22;
    options->tau = 5.0;
    options->mask_threshold = 0.5;
    options->occlusion_epsilon = 0.0;
    options->enable_occlusion = 1;
    options->enable_pred_mask = 1;
    options->enable_confidence = 1;
    options->enable_input_query = 1;
    options->oracle_high_conf_raw = 3.0;
    options->oracle_low_conf_raw = 0.0;
    options->threads = 1;
}

int rf_complete(const rf_input_view* input, const rf_complete_options* options, rf_cloud** out,
                rf_complete_stats* stats) {
    if (int rc = require(input && options && out, "rf_complete: null argument")) return rc;
    return guarded([&] {
        std::unique_ptr<rayfuse::Predictor> predictor;
        if (options->predictor == RF_PREDICTOR_ORACLE) {
            if (!options->scene)
                throw rayfuse::DomainError("oracle predictor needs a scene");
            rayfuse::OraclePredictorConfig oracle_cfg;
            oracle_cfg.corrupt_fraction = options->oracle_corrupt_fraction;
            oracle_cfg.depth_noise_sigma = options->oracle_noise_sigma;
            oracle_cfg.high_confidence_raw = options->oracle_high_conf_raw;
            oracle_cfg.low_confidence_raw = options->oracle_low_conf_raw;
            oracle_cfg.seed = options->seed;
            predictor = std::make_unique<rayfuse::OraclePredictor>(options->scene->file.scene,
                                                                   oracle_cfg);
        } else if (options->predictor == RF_PREDICTOR_FILES) {
            if (!options->pred_dir)
                throw rayfuse::DomainError("file predictor needs a prediction directory");
            predictor = std::make_unique<rayfuse::FilePredictor>(options->pred_dir);
        } else {
            throw rayfuse::DomainError("unknown predictor kind");
        }

        rayfuse::ViewSamplingConfig view_cfg;
        view_cfg.lambda_bb = options->lambda_bb;
        view_cfg.lambda_cam = options->lambda_cam;
        view_cfg.n_views = options->n_views;
        view_cfg.query_intrinsics = input->view.intrinsics;

        rayfuse::FusionConfig fusion_cfg;
        fusion_cfg.confidence_threshold = options->tau;
        fusion_cfg.mask_threshold = options->mask_threshold;
        fusion_cfg.occlusion_epsilon = options->occlusion_epsilon;
        fusion_cfg.enable_occlusion = options->enable_occlusion != 0;
        fusion_cfg.enable_pred_mask = options->enable_pred_mask != 0;
        fusion_cfg.enable_confidence = options->enable_confidence != 0;
        fusion_cfg.enable_input_query = options->enable_input_query != 0;

        rayfuse::CompletionStats core_stats;
        rayfuse::PointCloud cloud =
            rayfuse::complete_scene(input->view, *predictor, view_cfg, fusion_cfg,
                                    std::max<int32_t>(1, options->threads), &core_stats);
        if (stats) {
            stats->sample_ms = core_stats.sample_ms;
            stats->predict_ms = core_stats.predict_ms;
            stats->fuse_ms = core_stats.fuse_ms;
            stats->total_ms = core_stats.total_ms;
            stats->views_total = core_stats.views_total;
            stats->points_out = core_stats.points_out;
        }
        *out = new rf_cloud{std::move(cloud)};
    });
}

/* ------------------------------------------------------------ point clouds */

int rf_cloud_load(const char* path, rf_cloud** out) {
    if (int rc = require(path && out, "rf_cloud_load: null argument")) return rc;
    return guarded([&] { *out = new rf_cloud{rayfuse::load_cloud(path)}; });
}

int rf_cloud_save(const rf_cloud* cloud, const char* path) {
    if (int rc = require(cloud && path, "rf_cloud_save: null argument")) return rc;
    return guarded([&] { rayfuse::save_cloud(path, cloud->cloud); });
}

void rf_cloud_free(rf_cloud* cloud) { delete cloud; }

int rf_cloud_size(const rf_cloud* cloud, uint64_t* out) {
    if (int rc = require(cloud && out, "rf_cloud_size: null argument")) return rc;
    *out = cloud->cloud.size();
    return RF_OK;
}

int rf_cloud_points(const rf_cloud* cloud, double* xyz, uint64_t capacity) {
    if (int rc = require(cloud && xyz, "rf_cloud_points: null argument")) return rc;
    if (capacity < cloud->cloud.size())
        return set_error(RF_ERROR_INVALID_ARGUMENT, "rf_cloud_points: capacity too small");
    for (std::size_t i = 0; i < cloud->cloud.size(); ++i) {
        xyz[3 * i + 0] = cloud->cloud.points[i].x;
        xyz[3 * i + 1] = cloud->cloud.points[i].y;
        xyz[3 * i + 2] = cloud->cloud.points[i].z;
    }
    return RF_OK;
}

/* ---------------------------------------------------------------- metrics */

int rf_evaluate(const rf_cloud* predicted, const rf_cloud* ground_truth, double eta_mm,
                int32_t threads, rf_metric_report* out) {
    if (int rc = require(predicted && ground_truth && out, "rf_evaluate: null argument"))
        return rc;
    return guarded([&] {
        const rayfuse::MetricReport report = rayfuse::evaluate(
            predicted->cloud, ground_truth->cloud, eta_mm, std::max<int32_t>(1, threads));
        out->accuracy_mm = report.accuracy_mm;
        out->completeness_mm = report.completeness_mm;
        out->chamfer_mm = report.chamfer_mm;
        out->precision = report.precision;
        out->recall = report.recall;
        out->f1 = report.f1;
        out->eta_mm = report.eta_mm;
    });
}

/* --------------------------------------------------------------- alignment */

void rf_align_options_init(rf_align_options* options) {
    if (!options) return;
    std::memset(options, 0, sizeof(*options));
    options->rotation_steps = 20;
    options->use_scale_grid = 0;
    options->scale_min = 0.65;
    options->scale_max = 1.35;
    options->scale_step = 0.05;
    options->icp_max_iters = 50;
    options->icp_tol = 1e-6;
    options->eval_subsample = 2048;
    options->eta_mm = 10.0;
    options->threads = 1;
}

int rf_align(const rf_cloud* predicted, const rf_cloud* ground_truth,
             const rf_align_options* options, rf_align_result* out, rf_cloud** aligned_out) {
    if (int rc = require(predicted && ground_truth && options && out, "rf_align: null argument"))
        return rc;
    return guarded([&] {
        rayfuse::AlignmentConfig cfg;
        cfg.rotation_steps = options->rotation_steps;
        cfg.use_scale_grid = options->use_scale_grid != 0;
        cfg.scale_min = options->scale_min;
        cfg.scale_max = options->scale_max;
        cfg.scale_step = options->scale_step;
        cfg.icp_max_iters = options->icp_max_iters;
        cfg.icp_tol = options->icp_tol;
        cfg.eval_subsample = static_cast<std::size_t>(options->eval_subsample);
        cfg.seed = options->seed;
        cfg.eta_mm = options->eta_mm;
        cfg.threads = std::max<int32_t>(1, options->threads);

        rayfuse::AlignResult result =
            rayfuse::align_canonical(predicted->cloud, ground_truth->cloud, cfg);

        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) out->linear[3 * r + c] = result.linear(r, c);
        out->offset[0] = result.offset.x;
        out->offset[1] = result.offset.y;
        out->offset[2] = result.offset.z;
        out->scale[0] = result.scale.x;
        out->scale[1] = result.scale.y;
        out->scale[2] = result.scale.z;
        out->grid_multiplier = result.grid_multiplier;
        out->icp_converged = result.icp_converged ? 1 : 0;
        out->report.accuracy_mm = result.report.accuracy_mm;
        out->report.completeness_mm = result.report.completeness_mm;
        out->report.chamfer_mm = result.report.chamfer_mm;
        out->report.precision = result.report.precision;
        out->report.recall = result.report.recall;
        out->report.f1 = result.report.f1;
        out->report.eta_mm = result.report.eta_mm;

        if (aligned_out) *aligned_out = new rf_cloud{std::move(result.aligned)};
    });
}

/* ------------------------------------------------------------ augmentation */

void rf_augment_options_init(rf_augment_options* options) {
    if (!options) return;
    std::memset(options, 0, sizeof(*options));
    const rayfuse::AugmentConfig defaults;
    options->depth_noise_sigma = defaults.depth_noise_sigma;
    options->hole_count_min = defaults.hole_count_min;
    options->hole_count_max = defaults.hole_count_max;
    options->hole_radius_min = defaults.hole_radius_min;
    options->hole_radius_max = defaults.hole_radius_max;
    options->pixel_shift_max = defaults.pixel_shift_max;
    options->brightness_min = defaults.brightness_min;
    options->brightness_max = defaults.brightness_max;
    options->contrast_min = defaults.contrast_min;
    options->contrast_max = defaults.contrast_max;
    options->salt_pepper_prob = defaults.salt_pepper_prob;
    options->rgb_noise_sigma = defaults.rgb_noise_sigma;
    options->mask_fp_rate = defaults.mask_fp_rate;
    options->mask_fn_rate = defaults.mask_fn_rate;
}

int rf_augment_dir(const char* in_dir, const char* out_dir, const rf_augment_options* options) {
    if (int rc = require(in_dir && out_dir && options, "rf_augment_dir: null argument")) return rc;
    return guarded([&] {
        if (!fs::is_directory(in_dir))
            throw rayfuse::IoError(std::string("'") + in_dir + "' is not a directory");

        rayfuse::AugmentConfig cfg;
        cfg.depth_noise_sigma = options->depth_noise_sigma;
        cfg.hole_count_min = options->hole_count_min;
        cfg.hole_count_max = options->hole_count_max;
        cfg.hole_radius_min = options->hole_radius_min;
        cfg.hole_radius_max = options->hole_radius_max;
        cfg.pixel_shift_max = options->pixel_shift_max;
        cfg.brightness_min = options->brightness_min;
        cfg.brightness_max = options->brightness_max;
        cfg.contrast_min = options->contrast_min;
        cfg.contrast_max = options->contrast_max;
        cfg.salt_pepper_prob = options->salt_pepper_prob;
        cfg.rgb_noise_sigma = options->rgb_noise_sigma;
        cfg.mask_fp_rate = options->mask_fp_rate;
        cfg.mask_fn_rate = options->mask_fn_rate;
        cfg.seed = options->seed;

        std::vector<fs::path> entries;
        for (const auto& entry : fs::directory_iterator(in_dir))
            if (entry.is_regular_file()) entries.push_back(entry.path());
        std::sort(entries.begin(), entries.end());

        std::error_code ec;
        fs::create_directories(out_dir, ec);

        // Stream index = rank within its own kind list, so adding a file of
        // one kind never shifts the draws of another kind.
        std::uint64_t depth_index = 0, image_index = 0, mask_index = 0;
        for (const fs::path& path : entries) {
            const std::string name = path.filename().string();
            const fs::path dst = fs::path(out_dir) / name;
            if (name.size() > 6 && name.ends_with(".depth")) {
                rayfuse::save_raster(dst.string(),
                                     rayfuse::augment_depth(rayfuse::load_raster(path.string()),
                                                            cfg, depth_index++));
            } else if (name.ends_with(".ppm")) {
                rayfuse::save_image(dst.string(),
                                    rayfuse::augment_rgb(rayfuse::load_image(path.string()), cfg,
                                                         image_index++));
            } else if (name.ends_with(".mask.pgm")) {
                rayfuse::Pcg32 rng = rayfuse::augment_stream(
                    cfg.seed, mask_index, rayfuse::AugmentKind::MaskFalsePositive);
                rayfuse::save_mask(dst.string(),
                                   rayfuse::corrupt_mask(rayfuse::load_mask(path.string()),
                                                         cfg.mask_fp_rate, cfg.mask_fn_rate, rng));
                ++mask_index;
            } else {
                fs::copy_file(path, dst, fs::copy_options::overwrite_existing);
            }
        }
    });
}

} /* extern "C" */
