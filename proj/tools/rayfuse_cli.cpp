// Command-line driver for the rayfuse shape-completion library. Talks to the
// shared library through the public C API only.
//
// Exit codes: 0 success, 1 domain error (bad data), 2 usage or I/O error.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "rayfuse/rayfuse.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

int exit_code_for(int status) {
    switch (status) {
        case RF_OK:
            return kExitOk;
        case RF_ERROR_DOMAIN:
            return kExitDomain;
        default:
            return kExitUsage;
    }
}

int fail(int status) {
    std::cerr << "error: " << rf_last_error() << "\n";
    return exit_code_for(status);
}

int default_threads() {
    if (const char* env = std::getenv("RAYFUSE_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

bool write_text_file(const std::string& path, const std::string& text) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(parent, ec);
    }
    std::ofstream out(path);
    out << text;
    return static_cast<bool>(out);
}

std::string report_text(const rf_metric_report& report) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "accuracy_mm = %.9g\n"
                  "completeness_mm = %.9g\n"
                  "chamfer_mm = %.9g\n"
                  "precision = %.9g\n"
                  "recall = %.9g\n"
                  "f1 = %.9g\n"
                  "eta_mm = %.9g\n",
                  report.accuracy_mm, report.completeness_mm, report.chamfer_mm, report.precision,
                  report.recall, report.f1, report.eta_mm);
    return buf;
}

// ---------------------------------------------------------------- render

struct RenderArgs {
    std::string scene, camera, out_depth, out_mask;
    int threads = default_threads();
};

int run_render(const RenderArgs& args) {
    rf_scene* scene = nullptr;
    if (int rc = rf_scene_load(args.scene.c_str(), &scene)) return fail(rc);

    rf_camera* camera = nullptr;
    int rc = args.camera.empty() ? rf_scene_input_camera(scene, &camera)
                                 : rf_camera_load(args.camera.c_str(), &camera);
    if (rc) {
        rf_scene_free(scene);
        return fail(rc);
    }

    rf_raster* depth = nullptr;
    rf_mask* mask = nullptr;
    rc = rf_render(scene, camera, args.threads, &depth, &mask);
    if (rc == RF_OK) rc = rf_raster_save(depth, args.out_depth.c_str());
    if (rc == RF_OK) rc = rf_mask_save(mask, args.out_mask.c_str());

    rf_raster_free(depth);
    rf_mask_free(mask);
    rf_camera_free(camera);
    rf_scene_free(scene);
    return rc == RF_OK ? kExitOk : fail(rc);
}

// -------------------------------------------------------------- complete

struct CompleteArgs {
    std::string input_view;
    std::string predictor = "oracle";
    std::string scene;
    std::string pred_dir;
    std::string preset = "default";
    std::string out;
    double lambda_bb = 1.3;
    double lambda_cam = 0.7;
    int views = 22;
    double tau = 5.0;
    double occ_eps = 0.0;
    double corrupt_fraction = 0.0;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
    int threads = default_threads();
    bool no_occ = false;
    bool no_pred_mask = false;
    bool no_conf = false;
    bool no_input_query = false;
};

int run_complete(const CompleteArgs& args, const CLI::App& cmd) {
    rf_complete_options options;
    rf_complete_options_init(&options);

    if (args.preset == "close-range") {
        // For inputs captured very close to the objects with severe
        // occlusion: a wider sampling sphere.
        options.lambda_bb = 2.5;
        options.lambda_cam = 1.2;
    } else if (args.preset != "default") {
        std::cerr << "error: unknown preset '" << args.preset << "'\n";
        return kExitUsage;
    }
    // Explicit flags beat the preset.
    if (cmd.count("--lambda-bb")) options.lambda_bb = args.lambda_bb;
    if (cmd.count("--lambda-cam")) options.lambda_cam = args.lambda_cam;

    options.n_views = args.views;
    options.tau = args.tau;
    options.occlusion_epsilon = args.occ_eps;
    options.seed = args.seed;
    options.threads = args.threads;
    options.enable_occlusion = args.no_occ ? 0 : 1;
    options.enable_pred_mask = args.no_pred_mask ? 0 : 1;
    options.enable_confidence = args.no_conf ? 0 : 1;
    options.enable_input_query = args.no_input_query ? 0 : 1;
    options.oracle_corrupt_fraction = args.corrupt_fraction;
    options.oracle_noise_sigma = args.noise_sigma;

    rf_scene* scene = nullptr;
    if (args.predictor == "oracle") {
        options.predictor = RF_PREDICTOR_ORACLE;
        if (args.scene.empty()) {
            std::cerr << "error: --predictor oracle requires --scene\n";
            return kExitUsage;
        }
        if (int rc = rf_scene_load(args.scene.c_str(), &scene)) return fail(rc);
        options.scene = scene;
    } else if (args.predictor == "files") {
        options.predictor = RF_PREDICTOR_FILES;
        if (args.pred_dir.empty()) {
            std::cerr << "error: --predictor files requires --pred-dir\n";
            return kExitUsage;
        }
        options.pred_dir = args.pred_dir.c_str();
    } else {
        std::cerr << "error: unknown predictor '" << args.predictor << "'\n";
        return kExitUsage;
    }

    rf_input_view* input = nullptr;
    int rc = rf_input_view_load(args.input_view.c_str(), &input);

    rf_cloud* cloud = nullptr;
    rf_complete_stats stats;
    if (rc == RF_OK) rc = rf_complete(input, &options, &cloud, &stats);
    if (rc == RF_OK) rc = rf_cloud_save(cloud, args.out.c_str());

    if (rc == RF_OK) {
        std::ostringstream manifest;
        manifest << "command = complete\n"
                 << "input_view = " << args.input_view << "\n"
                 << "predictor = " << args.predictor << "\n";
        if (!args.scene.empty()) manifest << "scene = " << args.scene << "\n";
        if (!args.pred_dir.empty()) manifest << "pred_dir = " << args.pred_dir << "\n";
        manifest << "lambda_bb = " << options.lambda_bb << "\n"
                 << "lambda_cam = " << options.lambda_cam << "\n"
                 << "views = " << options.n_views << "\n"
                 << "tau = " << options.tau << "\n"
                 << "occlusion_epsilon = " << options.occlusion_epsilon << "\n"
                 << "enable_occlusion = " << options.enable_occlusion << "\n"
                 << "enable_pred_mask = " << options.enable_pred_mask << "\n"
                 << "enable_confidence = " << options.enable_confidence << "\n"
                 << "enable_input_query = " << options.enable_input_query << "\n"
                 << "oracle_corrupt_fraction = " << options.oracle_corrupt_fraction << "\n"
                 << "oracle_noise_sigma = " << options.oracle_noise_sigma << "\n"
                 << "seed = " << options.seed << "\n"
                 << "threads = " << options.threads << "\n"
                 << "views_total = " << stats.views_total << "\n"
                 << "points_out = " << stats.points_out << "\n"
                 << "output = " << args.out << "\n"
                 << "# timings are informational and vary run to run\n"
                 << "timing_ms.sample = " << stats.sample_ms << "\n"
                 << "timing_ms.predict = " << stats.predict_ms << "\n"
                 << "timing_ms.fuse = " << stats.fuse_ms << "\n"
                 << "timing_ms.total = " << stats.total_ms << "\n";
        if (!write_text_file(args.out + ".manifest.txt", manifest.str())) {
            std::cerr << "error: cannot write manifest\n";
            rc = RF_ERROR_IO;
        }
    }

    rf_cloud_free(cloud);
    rf_input_view_free(input);
    rf_scene_free(scene);
    return rc == RF_OK ? kExitOk : fail(rc);
}

// ------------------------------------------------------------------ eval

struct EvalArgs {
    std::string pred, gt, out;
    double eta_mm = 10.0;
    int threads = default_threads();
};

int run_eval(const EvalArgs& args) {
    rf_cloud* pred = nullptr;
    rf_cloud* gt = nullptr;
    int rc = rf_cloud_load(args.pred.c_str(), &pred);
    if (rc == RF_OK) rc = rf_cloud_load(args.gt.c_str(), &gt);

    rf_metric_report report;
    if (rc == RF_OK) rc = rf_evaluate(pred, gt, args.eta_mm, args.threads, &report);

    if (rc == RF_OK) {
        const std::string text = report_text(report);
        std::cout << text;
        if (!args.out.empty() && !write_text_file(args.out, text)) {
            std::cerr << "error: cannot write report\n";
            rc = RF_ERROR_IO;
        }
    }

    rf_cloud_free(pred);
    rf_cloud_free(gt);
    return rc == RF_OK ? kExitOk : fail(rc);
}

// ----------------------------------------------------------------- align

struct AlignArgs {
    std::string pred, gt, out;
    int steps = 20;
    bool scale_grid = false;
    std::uint64_t seed = 0;
    std::uint64_t subsample = 2048;
    double eta_mm = 10.0;
    int threads = default_threads();
    std::string aligned_out;
};

int run_align(const AlignArgs& args) {
    rf_cloud* pred = nullptr;
    rf_cloud* gt = nullptr;
    int rc = rf_cloud_load(args.pred.c_str(), &pred);
    if (rc == RF_OK) rc = rf_cloud_load(args.gt.c_str(), &gt);

    rf_align_options options;
    rf_align_options_init(&options);
    options.rotation_steps = args.steps;
    options.use_scale_grid = args.scale_grid ? 1 : 0;
    options.seed = args.seed;
    options.eval_subsample = args.subsample;
    options.eta_mm = args.eta_mm;
    options.threads = args.threads;

    rf_align_result result;
    rf_cloud* aligned = nullptr;
    if (rc == RF_OK)
        rc = rf_align(pred, gt, &options, &result,
                      args.aligned_out.empty() ? nullptr : &aligned);

    if (rc == RF_OK) {
        std::ostringstream text;
        char buf[64];
        text << "# aligned = linear * p + offset (row-major linear)\nlinear =";
        for (double v : result.linear) {
            std::snprintf(buf, sizeof(buf), " %.17g", v);
            text << buf;
        }
        text << "\noffset =";
        for (double v : result.offset) {
            std::snprintf(buf, sizeof(buf), " %.17g", v);
            text << buf;
        }
        text << "\nscale =";
        for (double v : result.scale) {
            std::snprintf(buf, sizeof(buf), " %.17g", v);
            text << buf;
        }
        std::snprintf(buf, sizeof(buf), "%.17g", result.grid_multiplier);
        text << "\ngrid_multiplier = " << buf << "\n"
             << "icp_converged = " << result.icp_converged << "\n"
             << report_text(result.report);
        std::cout << text.str();
        if (!args.out.empty() && !write_text_file(args.out, text.str())) {
            std::cerr << "error: cannot write alignment result\n";
            rc = RF_ERROR_IO;
        }
        if (rc == RF_OK && aligned) rc = rf_cloud_save(aligned, args.aligned_out.c_str());
    }

    rf_cloud_free(aligned);
    rf_cloud_free(pred);
    rf_cloud_free(gt);
    return rc == RF_OK ? kExitOk : fail(rc);
}

// --------------------------------------------------------------- augment

struct AugmentArgs {
    std::string in_dir, out_dir, config;
    std::uint64_t seed = 0;
};

bool apply_augment_config(const std::string& path, rf_augment_options& options) {
    std::ifstream in(path);
    if (!in) return false;
    std::map<std::string, double*> fields = {
        {"depth_noise_sigma", &options.depth_noise_sigma},
        {"hole_radius_min", &options.hole_radius_min},
        {"hole_radius_max", &options.hole_radius_max},
        {"brightness_min", &options.brightness_min},
        {"brightness_max", &options.brightness_max},
        {"contrast_min", &options.contrast_min},
        {"contrast_max", &options.contrast_max},
        {"salt_pepper_prob", &options.salt_pepper_prob},
        {"rgb_noise_sigma", &options.rgb_noise_sigma},
        {"mask_fp_rate", &options.mask_fp_rate},
        {"mask_fn_rate", &options.mask_fn_rate},
    };
    std::map<std::string, int32_t*> int_fields = {
        {"hole_count_min", &options.hole_count_min},
        {"hole_count_max", &options.hole_count_max},
        {"pixel_shift_max", &options.pixel_shift_max},
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream s(line);
        std::string key, eq;
        double value = 0.0;
        if (!(s >> key) || key[0] == '#') continue;
        if (!(s >> eq >> value) || eq != "=") {
            std::cerr << "error: " << path << ":" << line_no << ": expected 'key = value'\n";
            return false;
        }
        if (auto it = fields.find(key); it != fields.end()) {
            *it->second = value;
        } else if (auto it2 = int_fields.find(key); it2 != int_fields.end()) {
            *it2->second = static_cast<int32_t>(value);
        } else {
            std::cerr << "error: " << path << ":" << line_no << ": unknown key '" << key << "'\n";
            return false;
        }
    }
    return true;
}

int run_augment(const AugmentArgs& args) {
    rf_augment_options options;
    rf_augment_options_init(&options);
    if (!args.config.empty() && !apply_augment_config(args.config, options)) return kExitUsage;
    options.seed = args.seed;

    const int rc = rf_augment_dir(args.in_dir.c_str(), args.out_dir.c_str(), &options);
    return rc == RF_OK ? kExitOk : fail(rc);
}

// ---------------------------------------------------------------- sample

struct SampleArgs {
    std::string scene, out;
    std::uint64_t count = 50000;
    std::uint64_t seed = 0;
};

int run_sample(const SampleArgs& args) {
    rf_scene* scene = nullptr;
    int rc = rf_scene_load(args.scene.c_str(), &scene);

    rf_cloud* cloud = nullptr;
    if (rc == RF_OK) rc = rf_scene_sample_surface(scene, args.count, args.seed, &cloud);
    if (rc == RF_OK) rc = rf_cloud_save(cloud, args.out.c_str());

    rf_cloud_free(cloud);
    rf_scene_free(scene);
    return rc == RF_OK ? kExitOk : fail(rc);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rayfuse: multi-view shape completion from one masked RGB-D frame"};
    app.require_subcommand(1);
    app.set_version_flag("--version", rf_version());

    RenderArgs render_args;
    auto* render = app.add_subcommand("render", "Ray-cast a scene into a depth map and mask");
    render->add_option("--scene", render_args.scene, "scene file")->required();
    render->add_option("--camera", render_args.camera,
                       "camera file (defaults to the scene's camera block)");
    render->add_option("--out-depth", render_args.out_depth, "output RDM1 raster")->required();
    render->add_option("--out-mask", render_args.out_mask, "output PGM mask")->required();
    render->add_option("--threads", render_args.threads, "worker threads");

    CompleteArgs complete_args;
    auto* complete = app.add_subcommand("complete", "Complete a shape from one input view");
    complete->add_option("--input-view", complete_args.input_view, "input view directory")
        ->required();
    complete->add_option("--predictor", complete_args.predictor, "oracle|files");
    complete->add_option("--scene", complete_args.scene, "ground-truth scene (oracle)");
    complete->add_option("--pred-dir", complete_args.pred_dir, "prediction directory (files)");
    complete->add_option("--preset", complete_args.preset, "default|close-range");
    complete->add_option("--lambda-bb", complete_args.lambda_bb, "bbox radius factor");
    complete->add_option("--lambda-cam", complete_args.lambda_cam, "camera radius clip factor");
    complete->add_option("--views", complete_args.views, "sampled view count");
    complete->add_option("--tau", complete_args.tau, "confidence threshold");
    complete->add_option("--occ-eps", complete_args.occ_eps, "occlusion depth epsilon (m)");
    complete->add_option("--corrupt-fraction", complete_args.corrupt_fraction,
                         "oracle: corrupted pixel fraction");
    complete->add_option("--noise-sigma", complete_args.noise_sigma,
                         "oracle: depth noise sigma (m)");
    complete->add_option("--seed", complete_args.seed, "PRNG seed");
    complete->add_option("--threads", complete_args.threads, "worker threads");
    complete->add_option("--out", complete_args.out, "output PLY cloud")->required();
    complete->add_flag("--no-occ", complete_args.no_occ, "disable the occlusion gate");
    complete->add_flag("--no-pred-mask", complete_args.no_pred_mask,
                       "disable the predicted-mask gate");
    complete->add_flag("--no-conf", complete_args.no_conf, "disable the confidence gate");
    complete->add_flag("--no-input-query", complete_args.no_input_query,
                       "drop the input-view query");

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "Chamfer distance and F1 between two clouds");
    eval->add_option("--pred", eval_args.pred, "predicted PLY")->required();
    eval->add_option("--gt", eval_args.gt, "ground-truth PLY")->required();
    eval->add_option("--eta-mm", eval_args.eta_mm, "F1 distance threshold (mm)");
    eval->add_option("--out", eval_args.out, "report file (also printed)");
    eval->add_option("--threads", eval_args.threads, "worker threads");

    AlignArgs align_args;
    auto* align = app.add_subcommand("align", "Register a canonical-frame cloud to ground truth");
    align->add_option("--pred", align_args.pred, "predicted PLY")->required();
    align->add_option("--gt", align_args.gt, "ground-truth PLY")->required();
    align->add_option("--steps", align_args.steps, "rotation grid steps per axis");
    align->add_flag("--scale-grid", align_args.scale_grid, "search a uniform scale grid");
    align->add_option("--seed", align_args.seed, "PRNG seed");
    align->add_option("--subsample", align_args.subsample, "search subsample size");
    align->add_option("--eta-mm", align_args.eta_mm, "F1 threshold for the report (mm)");
    align->add_option("--threads", align_args.threads, "worker threads");
    align->add_option("--out", align_args.out, "transform + report file (also printed)");
    align->add_option("--aligned-out", align_args.aligned_out, "write the aligned cloud");

    AugmentArgs augment_args;
    auto* augment = app.add_subcommand("augment", "Corrupt rasters for sim-to-real training");
    augment->add_option("--in", augment_args.in_dir, "input directory")->required();
    augment->add_option("--out", augment_args.out_dir, "output directory")->required();
    augment->add_option("--config", augment_args.config, "key = value config file");
    augment->add_option("--seed", augment_args.seed, "PRNG seed");

    SampleArgs sample_args;
    auto* sample = app.add_subcommand("sample", "Sample ground-truth points from a scene surface");
    sample->add_option("--scene", sample_args.scene, "scene file")->required();
    sample->add_option("--count", sample_args.count, "sample count");
    sample->add_option("--seed", sample_args.seed, "PRNG seed");
    sample->add_option("--out", sample_args.out, "output PLY cloud")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        app.exit(e);
        return kExitUsage;
    }

    if (render->parsed()) return run_render(render_args);
    if (complete->parsed()) return run_complete(complete_args, *complete);
    if (eval->parsed()) return run_eval(eval_args);
    if (align->parsed()) return run_align(align_args);
    if (augment->parsed()) return run_augment(augment_args);
    if (sample->parsed()) return run_sample(sample_args);
    return kExitUsage;
}
