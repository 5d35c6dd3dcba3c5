#include "rayfuse/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "rayfuse/error.hpp"
#include "rayfuse/parallel.hpp"

namespace rayfuse {

KdTree::KdTree(const std::vector<Vec3>& points) : points_(points) {
    if (points_.empty()) throw DomainError("kd-tree: empty point set");
    ids_.resize(points_.size());
    std::iota(ids_.begin(), ids_.end(), 0u);
    nodes_.reserve(2 * points_.size() / 8 + 8);
    build(0, static_cast<std::uint32_t>(ids_.size()));
}

std::uint32_t KdTree::build(std::uint32_t first, std::uint32_t count) {
    const auto node_index = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back({});

    if (count <= 8) {
        nodes_[node_index].first = first;
        nodes_[node_index].count = count;
        return node_index;
    }

    Vec3 lo = points_[ids_[first]];
    Vec3 hi = lo;
    for (std::uint32_t i = 1; i < count; ++i) {
        const Vec3& p = points_[ids_[first + i]];
        lo = cwise_min(lo, p);
        hi = cwise_max(hi, p);
    }
    const Vec3 extent = hi - lo;
    std::uint8_t axis = 0;
    if (extent.y > extent.x) axis = 1;
    if (extent.z > (axis == 0 ? extent.x : extent.y)) axis = 2;

    auto coord = [&](std::uint32_t id) {
        const Vec3& p = points_[id];
        return axis == 0 ? p.x : axis == 1 ? p.y : p.z;
    };

    const std::uint32_t mid = count / 2;
    auto* begin = ids_.data() + first;
    std::nth_element(begin, begin + mid, begin + count,
                     [&](std::uint32_t lhs, std::uint32_t rhs) {
                         const double cl = coord(lhs), cr = coord(rhs);
                         if (cl != cr) return cl < cr;
                         return lhs < rhs;
                     });

    nodes_[node_index].axis = axis;
    nodes_[node_index].split = coord(ids_[first + mid]);
    build(first, mid);
    nodes_[node_index].right = build(first + mid, count - mid);
    return node_index;
}

void KdTree::search(std::uint32_t node_index, const Vec3& query, Nearest& best) const {
    const Node& node = nodes_[node_index];
    if (node.count > 0) {
        for (std::uint32_t i = 0; i < node.count; ++i) {
            const std::uint32_t id = ids_[node.first + i];
            const double d2 = norm2(points_[id] - query);
            if (d2 < best.dist2 || (d2 == best.dist2 && id < best.index)) {
                best.dist2 = d2;
                best.index = id;
            }
        }
        return;
    }

    const double q = node.axis == 0 ? query.x : node.axis == 1 ? query.y : query.z;
    const double delta = q - node.split;
    const std::uint32_t near_child = delta < 0.0 ? node_index + 1 : node.right;
    const std::uint32_t far_child = delta < 0.0 ? node.right : node_index + 1;
    search(near_child, query, best);
    if (delta * delta <= best.dist2) search(far_child, query, best);
}

KdTree::Nearest KdTree::nearest(const Vec3& query) const {
    Nearest best;
    best.dist2 = std::numeric_limits<double>::infinity();
    best.index = 0;
    search(0, query, best);
    return best;
}

double KdTree::nearest_dist(const Vec3& query) const { return std::sqrt(nearest(query).dist2); }

namespace {

// Per-query results are stored before the sequential reduction, so sums do
// not depend on thread partitioning.
std::vector<double> nearest_distances(const std::vector<Vec3>& queries, const KdTree& tree,
                                      int threads) {
    std::vector<double> dist(queries.size());
    parallel_for(queries.size(), threads,
                 [&](std::size_t i) { dist[i] = tree.nearest_dist(queries[i]); });
    return dist;
}

double mean_mm(const std::vector<double>& meters) {
    double sum = 0.0;
    for (const double d : meters) sum += d;
    return 1000.0 * sum / static_cast<double>(meters.size());
}

double fraction_below(const std::vector<double>& meters, double eta_mm) {
    const double eta_m = eta_mm / 1000.0;
    std::size_t hits = 0;
    for (const double d : meters)
        if (d < eta_m) ++hits;
    return static_cast<double>(hits) / static_cast<double>(meters.size());
}

void require_nonempty(const PointCloud& predicted, const PointCloud& ground_truth) {
    if (predicted.empty() || ground_truth.empty())
        throw DomainError("undefined metric: empty point cloud");
}

}  // namespace

double accuracy_mm(const PointCloud& predicted, const PointCloud& ground_truth, int threads) {
    require_nonempty(predicted, ground_truth);
    const KdTree tree(ground_truth.points);
    return mean_mm(nearest_distances(predicted.points, tree, threads));
}

double completeness_mm(const PointCloud& predicted, const PointCloud& ground_truth, int threads) {
    return accuracy_mm(ground_truth, predicted, threads);
}

double chamfer_mm(const PointCloud& predicted, const PointCloud& ground_truth, int threads) {
    return 0.5 * (accuracy_mm(predicted, ground_truth, threads) +
                  completeness_mm(predicted, ground_truth, threads));
}

F1Score f1_at(const PointCloud& predicted, const PointCloud& ground_truth, double eta_mm,
              int threads) {
    require_nonempty(predicted, ground_truth);
    if (!(eta_mm > 0.0)) throw DomainError("f1_at: eta must be positive");

    const KdTree gt_tree(ground_truth.points);
    const KdTree pred_tree(predicted.points);
    const auto forward = nearest_distances(predicted.points, gt_tree, threads);
    const auto backward = nearest_distances(ground_truth.points, pred_tree, threads);

    F1Score score;
    score.precision = fraction_below(forward, eta_mm);
    score.recall = fraction_below(backward, eta_mm);
    const double pr = score.precision + score.recall;
    score.f1 = pr > 0.0 ? 2.0 * score.precision * score.recall / pr : 0.0;
    return score;
}

MetricReport evaluate(const PointCloud& predicted, const PointCloud& ground_truth, double eta_mm,
                      int threads) {
    require_nonempty(predicted, ground_truth);
    if (!(eta_mm > 0.0)) throw DomainError("evaluate: eta must be positive");

    const KdTree gt_tree(ground_truth.points);
    const KdTree pred_tree(predicted.points);
    const auto forward = nearest_distances(predicted.points, gt_tree, threads);
    const auto backward = nearest_distances(ground_truth.points, pred_tree, threads);

    MetricReport report;
    report.eta_mm = eta_mm;
    report.accuracy_mm = mean_mm(forward);
    report.completeness_mm = mean_mm(backward);
    report.chamfer_mm = 0.5 * (report.accuracy_mm + report.completeness_mm);
    report.precision = fraction_below(forward, eta_mm);
    report.recall = fraction_below(backward, eta_mm);
    const double pr = report.precision + report.recall;
    report.f1 = pr > 0.0 ? 2.0 * report.precision * report.recall / pr : 0.0;
    return report;
}

std::string format_report(const MetricReport& report) {
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

}  // namespace rayfuse
