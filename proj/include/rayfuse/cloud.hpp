#pragma once

#include <vector>

#include "rayfuse/linalg.hpp"

namespace rayfuse {

// Unordered 3D points in meters. `confidence` is either empty or parallel to
// `points`.
struct PointCloud {
    std::vector<Vec3> points;
    std::vector<double> confidence;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    bool has_confidence() const { return !confidence.empty(); }
};

}  // namespace rayfuse
