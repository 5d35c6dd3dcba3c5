#pragma once

#include "rayfuse/camera.hpp"

namespace rayfuse {

// The observed RGB-D frame: color, depth, foreground mask, intrinsics and the
// world-to-camera pose. All rasters share the intrinsics' dimensions.
struct InputView {
    Image rgb;
    DepthMap depth;
    BinaryMask mask;
    CameraIntrinsics intrinsics;
    RigidTransform pose;
};

// Throws DomainError if raster dimensions disagree.
void validate(const InputView& view);

}  // namespace rayfuse
