#include <cmath>

#include "doctest.h"
#include "rayfuse/error.hpp"
#include "rayfuse/metrics.hpp"
#include "rayfuse/rng.hpp"
#include "support/synthetic.hpp"

using namespace rayfuse;

namespace {

PointCloud random_cloud(std::size_t n, std::uint64_t seed, double scale = 1.0) {
    Pcg32 rng(seed, 1);
    PointCloud cloud;
    cloud.points.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        cloud.points.push_back({scale * rng.uniform(-1.0, 1.0), scale * rng.uniform(-1.0, 1.0),
                                scale * rng.uniform(-1.0, 1.0)});
    return cloud;
}

// Quadratic-time reference used to certify the kd-tree.
double brute_mean_nn_mm(const PointCloud& from, const PointCloud& to) {
    double sum = 0.0;
    for (const Vec3& q : from.points) {
        double best = std::numeric_limits<double>::infinity();
        for (const Vec3& p : to.points) best = std::min(best, norm2(q - p));
        sum += std::sqrt(best);
    }
    return 1000.0 * sum / static_cast<double>(from.size());
}

}  // namespace

TEST_CASE("accuracy trivial and single-pair cases") {
    PointCloud q;
    q.points = {{0, 0, 0}};
    PointCloud gt;
    gt.points = {{0, 0, 0.003}};

    CHECK(accuracy_mm(q, q) == 0.0);
    CHECK(accuracy_mm(q, gt) == doctest::Approx(3.0).epsilon(1e-12));

    PointCloud empty;
    CHECK_THROWS_AS(accuracy_mm(empty, gt), DomainError);
    CHECK_THROWS_AS(accuracy_mm(q, empty), DomainError);
}

TEST_CASE("completeness is accuracy with roles swapped") {
    const PointCloud q = random_cloud(200, 31);
    const PointCloud gt = random_cloud(150, 32);
    CHECK(completeness_mm(q, gt) == accuracy_mm(gt, q));

    // Qgt subset of Q covers completeness exactly.
    PointCloud super = q;
    super.points.push_back({9, 9, 9});
    CHECK(completeness_mm(super, q) == 0.0);
}

TEST_CASE("kd-tree metrics match the brute-force oracle") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const PointCloud q = random_cloud(500, 100 + seed);
        const PointCloud gt = random_cloud(500, 200 + seed);
        CHECK(std::fabs(accuracy_mm(q, gt) - brute_mean_nn_mm(q, gt)) < 1e-9);
        CHECK(std::fabs(completeness_mm(q, gt) - brute_mean_nn_mm(gt, q)) < 1e-9);
    }
}

TEST_CASE("chamfer identities") {
    const PointCloud q = random_cloud(300, 41);
    const PointCloud gt = random_cloud(311, 42);

    CHECK(chamfer_mm(q, q) == 0.0);

    PointCloud a, b;
    a.points = {{0, 0, 0}};
    b.points = {{0.004, 0, 0}};
    CHECK(chamfer_mm(a, b) == doctest::Approx(4.0).epsilon(1e-12));

    const MetricReport report = evaluate(q, gt, 10.0);
    CHECK(report.chamfer_mm == 0.5 * (report.accuracy_mm + report.completeness_mm));
    CHECK(report.accuracy_mm == doctest::Approx(accuracy_mm(q, gt)).epsilon(1e-12));
}

TEST_CASE("f1 thresholds are strict and harmonic") {
    SUBCASE("coincident clouds") {
        const PointCloud q = random_cloud(50, 51);
        const F1Score s = f1_at(q, q, 10.0);
        CHECK(s.precision == 1.0);
        CHECK(s.recall == 1.0);
        CHECK(s.f1 == 1.0);
    }

    SUBCASE("single pair straddles the threshold") {
        PointCloud q, gt;
        q.points = {{0, 0, 0}};
        gt.points = {{0, 0, 0.003}};
        CHECK(f1_at(q, gt, 10.0).f1 == 1.0);
        CHECK(f1_at(q, gt, 2.0).f1 == 0.0);
    }

    SUBCASE("distance exactly at eta fails the strict compare") {
        PointCloud q, gt;
        q.points = {{0, 0, 0}};
        gt.points = {{0, 0, 1.0}};  // exactly 1000 mm
        const F1Score s = f1_at(q, gt, 1000.0);
        CHECK(s.precision == 0.0);
        CHECK(s.recall == 0.0);
        CHECK(s.f1 == 0.0);  // defined 0 when P + R = 0
        CHECK(f1_at(q, gt, 1000.0000001).f1 == 1.0);
    }

    SUBCASE("harmonic mean of P = 1 and R = 0.5") {
        PointCloud q, gt;
        q.points = {{0, 0, 0}};
        gt.points = {{0, 0, 0}, {1, 0, 0}};
        const F1Score s = f1_at(q, gt, 10.0);
        CHECK(s.precision == 1.0);
        CHECK(s.recall == 0.5);
        CHECK(s.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    }
}

TEST_CASE("metrics are invariant under a shared rigid motion") {
    const PointCloud q = random_cloud(400, 61);
    const PointCloud gt = random_cloud(380, 62);
    const MetricReport before = evaluate(q, gt, 10.0);

    RigidTransform t;
    t.rotation = rotation_axis_angle(normalized({1, 2, 3}), 0.83);
    t.translation = {0.4, -0.2, 1.1};

    PointCloud q2 = q, gt2 = gt;
    for (Vec3& p : q2.points) p = t.apply(p);
    for (Vec3& p : gt2.points) p = t.apply(p);
    const MetricReport after = evaluate(q2, gt2, 10.0);

    CHECK(std::fabs(before.accuracy_mm - after.accuracy_mm) < 1e-9);
    CHECK(std::fabs(before.completeness_mm - after.completeness_mm) < 1e-9);
    CHECK(before.precision == after.precision);
    CHECK(before.recall == after.recall);
}

TEST_CASE("evaluate is independent of thread count") {
    const PointCloud q = random_cloud(2000, 71);
    const PointCloud gt = random_cloud(1500, 72);
    const MetricReport a = evaluate(q, gt, 10.0, 1);
    const MetricReport b = evaluate(q, gt, 10.0, 4);
    CHECK(a.accuracy_mm == b.accuracy_mm);
    CHECK(a.completeness_mm == b.completeness_mm);
    CHECK(a.f1 == b.f1);
}

TEST_CASE("report formatting carries all fields") {
    MetricReport report;
    report.accuracy_mm = 1.25;
    report.chamfer_mm = 2.5;
    report.eta_mm = 10.0;
    const std::string text = format_report(report);
    CHECK(text.find("accuracy_mm = 1.25") != std::string::npos);
    CHECK(text.find("chamfer_mm = 2.5") != std::string::npos);
    CHECK(text.find("eta_mm = 10") != std::string::npos);
}
