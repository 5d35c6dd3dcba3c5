#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rayfuse/camera.hpp"
#include "rayfuse/cloud.hpp"
#include "rayfuse/input_view.hpp"
#include "rayfuse/mesh.hpp"
#include "rayfuse/predictor.hpp"

// File formats (details in docs/FORMATS.md):
//   meshes   Wavefront OBJ subset: `v x y z` and `f a b c` (1-indexed,
//            polygons fan-triangulated, `a/b/c` slashes take the vertex id)
//   rasters  RDM1: magic "RDM1", little-endian u32 width and height, then
//            width*height little-endian f32 row-major, top row first
//   masks    binary PGM (P5, maxval 255): 0 = background, nonzero = foreground
//   images   binary PPM (P6, maxval 255)
//   clouds   ASCII PLY with float x y z and optional confidence
//   cameras  text: `fx fy cx cy width height` then the 3x4 world-to-camera
//            matrix on three rows
// All loaders throw IoError with the path and line/offset on malformed input;
// savers create missing parent directories.

namespace rayfuse {

TriangleMesh load_mesh(const std::string& path);
void save_mesh(const std::string& path, const TriangleMesh& mesh);

Raster load_raster(const std::string& path);
void save_raster(const std::string& path, const Raster& raster);

BinaryMask load_mask(const std::string& path);
void save_mask(const std::string& path, const BinaryMask& mask);

Image load_image(const std::string& path);
void save_image(const std::string& path, const Image& image);

PointCloud load_cloud(const std::string& path);
void save_cloud(const std::string& path, const PointCloud& cloud);

struct CameraPose {
    CameraIntrinsics intrinsics;
    RigidTransform pose;  // world -> camera
};

CameraPose load_camera(const std::string& path);
void save_camera(const std::string& path, const CameraPose& camera);

// Scene description: one `mesh <path> <12 pose numbers>` line per instance
// (row-major 3x4 mesh-to-world placement, paths relative to the scene file)
// and an optional `camera <fx fy cx cy w h> <12 numbers>` line.
struct SceneFile {
    Scene scene;
    std::optional<CameraPose> input_camera;
};

SceneFile load_scene(const std::string& path);
void save_scene(const std::string& path, const Scene& scene,
                const std::optional<CameraPose>& input_camera = {});

// Prediction directory: per view k the files view_{k:04}.depth (RDM1),
// view_{k:04}.conf (RDM1, raw confidence), view_{k:04}.mask.pgm and
// view_{k:04}.cam. Views are numbered densely from 0.
std::vector<ViewPrediction> load_prediction_dir(const std::string& directory);
void save_prediction_dir(const std::string& directory,
                         const std::vector<ViewPrediction>& predictions);

// Input view directory: input.depth, input.mask.pgm, input.cam and an
// optional input.rgb.ppm (absent means a black image).
InputView load_input_view(const std::string& directory);
void save_input_view(const std::string& directory, const InputView& view);

}  // namespace rayfuse
