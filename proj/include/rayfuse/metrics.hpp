#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rayfuse/cloud.hpp"

namespace rayfuse {

// Exact (not approximate) nearest neighbor over 3D points.
class KdTree {
public:
    explicit KdTree(const std::vector<Vec3>& points);

    struct Nearest {
        std::size_t index = 0;
        double dist2 = 0.0;
    };

    Nearest nearest(const Vec3& query) const;
    double nearest_dist(const Vec3& query) const;

    std::size_t size() const { return points_.size(); }

private:
    struct Node {
        std::uint32_t right = 0;  // leaf: unused; internal: right child node
        std::uint32_t first = 0;
        std::uint32_t count = 0;  // > 0 marks a leaf
        std::uint8_t axis = 0;
        double split = 0.0;
    };

    std::uint32_t build(std::uint32_t first, std::uint32_t count);
    void search(std::uint32_t node_index, const Vec3& query, Nearest& best) const;

    std::vector<Vec3> points_;
    std::vector<std::uint32_t> ids_;
    std::vector<Node> nodes_;
};

struct MetricReport {
    double accuracy_mm = 0.0;
    double completeness_mm = 0.0;
    double chamfer_mm = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double eta_mm = 0.0;
};

// Mean distance (mm) from each predicted point to its nearest ground-truth
// point. Throws DomainError on empty inputs.
double accuracy_mm(const PointCloud& predicted, const PointCloud& ground_truth, int threads = 1);

// Mean distance (mm) from each ground-truth point to its nearest predicted
// point; identical to accuracy_mm with the roles swapped.
double completeness_mm(const PointCloud& predicted, const PointCloud& ground_truth,
                       int threads = 1);

// (accuracy + completeness) / 2, in mm.
double chamfer_mm(const PointCloud& predicted, const PointCloud& ground_truth, int threads = 1);

struct F1Score {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Precision/recall at a strict distance threshold (< eta); F1 is their
// harmonic mean, defined as 0 when precision + recall == 0.
F1Score f1_at(const PointCloud& predicted, const PointCloud& ground_truth, double eta_mm,
              int threads = 1);

// All of the above in one pass (two kd-trees, one traversal each).
MetricReport evaluate(const PointCloud& predicted, const PointCloud& ground_truth, double eta_mm,
                      int threads = 1);

// key = value lines, one per field.
std::string format_report(const MetricReport& report);

}  // namespace rayfuse
