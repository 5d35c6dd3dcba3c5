/*
 * rayfuse C API: shape completion from a single masked RGB-D view.
 *
 * All functions return RF_OK (0) on success or an rf_status code on failure;
 * rf_last_error() describes the most recent failure on the calling thread.
 * Objects are opaque handles created by rf_*_load / rf_* factories and
 * released with the matching rf_*_free (safe on NULL).
 */
#ifndef RAYFUSE_H
#define RAYFUSE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rf_status {
    RF_OK = 0,
    RF_ERROR_INVALID_ARGUMENT = 1,
    RF_ERROR_IO = 2,
    RF_ERROR_DOMAIN = 3,
    RF_ERROR_INTERNAL = 4
} rf_status;

const char* rf_version(void);

/* Message for the last failure on this thread; empty string if none. */
const char* rf_last_error(void);

typedef struct rf_scene rf_scene;
typedef struct rf_camera rf_camera;
typedef struct rf_raster rf_raster; /* float raster: depth or confidence */
typedef struct rf_mask rf_mask;
typedef struct rf_image rf_image;
typedef struct rf_cloud rf_cloud;
typedef struct rf_input_view rf_input_view;

/* ------------------------------------------------------------------ scenes */

int rf_scene_load(const char* path, rf_scene** out);
void rf_scene_free(rf_scene* scene);
int rf_scene_triangle_count(const rf_scene* scene, uint64_t* out);

/* The scene file's optional camera block; RF_ERROR_DOMAIN if absent. */
int rf_scene_input_camera(const rf_scene* scene, rf_camera** out);

/* Area-weighted surface samples, seeded. */
int rf_scene_sample_surface(const rf_scene* scene, uint64_t count, uint64_t seed, rf_cloud** out);

/* ----------------------------------------------------------------- cameras */

int rf_camera_load(const char* path, rf_camera** out);
int rf_camera_save(const rf_camera* camera, const char* path);
void rf_camera_free(rf_camera* camera);
int rf_camera_image_size(const rf_camera* camera, int32_t* width, int32_t* height);

/* ----------------------------------------------------------------- rasters */

int rf_raster_load(const char* path, rf_raster** out);
int rf_raster_save(const rf_raster* raster, const char* path);
void rf_raster_free(rf_raster* raster);
int rf_raster_size(const rf_raster* raster, int32_t* width, int32_t* height);

int rf_mask_load(const char* path, rf_mask** out);
int rf_mask_save(const rf_mask* mask, const char* path);
void rf_mask_free(rf_mask* mask);

int rf_image_load(const char* path, rf_image** out);
int rf_image_save(const rf_image* image, const char* path);
void rf_image_free(rf_image* image);

/* --------------------------------------------------------------- rendering */

/* Depth (z-depth, meters, 0 = miss) and hit mask for a camera. */
int rf_render(const rf_scene* scene, const rf_camera* camera, int32_t threads,
              rf_raster** out_depth, rf_mask** out_mask);

/* ------------------------------------------------------------ input views */

/* Directory layout: input.depth, input.mask.pgm, input.cam, [input.rgb.ppm]. */
int rf_input_view_load(const char* directory, rf_input_view** out);
void rf_input_view_free(rf_input_view* view);

/* -------------------------------------------------------------- completion */

typedef enum rf_predictor_kind {
    RF_PREDICTOR_ORACLE = 0, /* renders the ground-truth scene */
    RF_PREDICTOR_FILES = 1   /* replays a prediction directory */
} rf_predictor_kind;

typedef struct rf_complete_options {
    int32_t predictor;      /* rf_predictor_kind */
    const rf_scene* scene;  /* required for the oracle predictor */
    const char* pred_dir;   /* required for the file predictor */

    double lambda_bb;
    double lambda_cam;
    int32_t n_views;

    double tau;             /* activated-confidence threshold */
    double mask_threshold;
    double occlusion_epsilon;
    int32_t enable_occlusion;
    int32_t enable_pred_mask;
    int32_t enable_confidence;
    int32_t enable_input_query;

    double oracle_corrupt_fraction;
    double oracle_noise_sigma;
    double oracle_high_conf_raw;
    double oracle_low_conf_raw;

    uint64_t seed;
    int32_t threads;
} rf_complete_options;

/* Production defaults: lambda_bb 1.3, lambda_cam 0.7, 22 views, tau 5. */
void rf_complete_options_init(rf_complete_options* options);

typedef struct rf_complete_stats {
    double sample_ms;
    double predict_ms;
    double fuse_ms;
    double total_ms;
    uint64_t views_total;
    uint64_t points_out;
} rf_complete_stats;

int rf_complete(const rf_input_view* input, const rf_complete_options* options, rf_cloud** out,
                rf_complete_stats* stats /* nullable */);

/* ------------------------------------------------------------- point clouds */

int rf_cloud_load(const char* path, rf_cloud** out);
int rf_cloud_save(const rf_cloud* cloud, const char* path);
void rf_cloud_free(rf_cloud* cloud);
int rf_cloud_size(const rf_cloud* cloud, uint64_t* out);

/* Copies points into caller storage (3 doubles per point). */
int rf_cloud_points(const rf_cloud* cloud, double* xyz, uint64_t capacity);

/* ---------------------------------------------------------------- metrics */

typedef struct rf_metric_report {
    double accuracy_mm;
    double completeness_mm;
    double chamfer_mm;
    double precision;
    double recall;
    double f1;
    double eta_mm;
} rf_metric_report;

int rf_evaluate(const rf_cloud* predicted, const rf_cloud* ground_truth, double eta_mm,
                int32_t threads, rf_metric_report* out);

/* --------------------------------------------------------------- alignment */

typedef struct rf_align_options {
    int32_t rotation_steps;
    int32_t use_scale_grid;
    double scale_min;
    double scale_max;
    double scale_step;
    int32_t icp_max_iters;
    double icp_tol;
    uint64_t eval_subsample;
    uint64_t seed;
    double eta_mm;
    int32_t threads;
} rf_align_options;

void rf_align_options_init(rf_align_options* options);

typedef struct rf_align_result {
    double linear[9]; /* row-major; aligned = linear * p + offset */
    double offset[3];
    double scale[3];
    double grid_multiplier;
    int32_t icp_converged;
    rf_metric_report report;
} rf_align_result;

int rf_align(const rf_cloud* predicted, const rf_cloud* ground_truth,
             const rf_align_options* options, rf_align_result* out,
             rf_cloud** aligned_out /* nullable */);

/* ------------------------------------------------------------ augmentation */

typedef struct rf_augment_options {
    double depth_noise_sigma;
    int32_t hole_count_min;
    int32_t hole_count_max;
    double hole_radius_min;
    double hole_radius_max;
    int32_t pixel_shift_max;
    double brightness_min;
    double brightness_max;
    double contrast_min;
    double contrast_max;
    double salt_pepper_prob;
    double rgb_noise_sigma;
    double mask_fp_rate;
    double mask_fn_rate;
    uint64_t seed;
} rf_augment_options;

void rf_augment_options_init(rf_augment_options* options);

/* Applies the configured corruptions to every *.depth, *.ppm and *.mask.pgm
 * under in_dir (sorted by name, one PRNG stream per file and kind) and
 * copies everything else verbatim into out_dir. */
int rf_augment_dir(const char* in_dir, const char* out_dir, const rf_augment_options* options);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* RAYFUSE_H */
