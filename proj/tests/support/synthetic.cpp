#include "support/synthetic.hpp"

#include <array>
#include <cmath>
#include <map>

#include "rayfuse/view_sampling.hpp"

namespace rayfuse::testsupport {

TriangleMesh make_box(const Vec3& half_extents) {
    const double x = half_extents.x, y = half_extents.y, z = half_extents.z;
    TriangleMesh mesh;
    mesh.vertices = {{-x, -y, -z}, {x, -y, -z}, {x, y, -z}, {-x, y, -z},
                     {-x, -y, z},  {x, -y, z},  {x, y, z},  {-x, y, z}};
    mesh.triangles = {{0, 2, 1}, {0, 3, 2}, {4, 5, 6}, {4, 6, 7}, {0, 1, 5}, {0, 5, 4},
                      {2, 3, 7}, {2, 7, 6}, {1, 2, 6}, {1, 6, 5}, {3, 0, 4}, {3, 4, 7}};
    return mesh;
}

TriangleMesh make_icosphere(double radius, int subdivisions) {
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    TriangleMesh mesh;
    mesh.vertices = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0}, {0, -1, t},  {0, 1, t},
                     {0, -1, -t}, {0, 1, -t}, {t, 0, -1},  {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
    for (Vec3& v : mesh.vertices) v = radius * normalized(v);
    mesh.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

    for (int level = 0; level < subdivisions; ++level) {
        std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> midpoints;
        auto midpoint = [&](std::uint32_t a, std::uint32_t b) {
            const auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
            if (const auto it = midpoints.find(key); it != midpoints.end()) return it->second;
            const Vec3 m = radius * normalized(0.5 * (mesh.vertices[a] + mesh.vertices[b]));
            const auto id = static_cast<std::uint32_t>(mesh.vertices.size());
            mesh.vertices.push_back(m);
            midpoints.emplace(key, id);
            return id;
        };
        std::vector<std::array<std::uint32_t, 3>> next;
        next.reserve(4 * mesh.triangles.size());
        for (const auto& tri : mesh.triangles) {
            const std::uint32_t ab = midpoint(tri[0], tri[1]);
            const std::uint32_t bc = midpoint(tri[1], tri[2]);
            const std::uint32_t ca = midpoint(tri[2], tri[0]);
            next.push_back({tri[0], ab, ca});
            next.push_back({tri[1], bc, ab});
            next.push_back({tri[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        mesh.triangles = std::move(next);
    }
    return mesh;
}

TriangleMesh make_cylinder(double radius, double half_height, int segments) {
    TriangleMesh mesh;
    const double two_pi = 6.283185307179586476925286766559;
    for (int s = 0; s < segments; ++s) {
        const double a = two_pi * s / segments;
        mesh.vertices.push_back({radius * std::cos(a), radius * std::sin(a), -half_height});
        mesh.vertices.push_back({radius * std::cos(a), radius * std::sin(a), half_height});
    }
    const auto bottom_center = static_cast<std::uint32_t>(mesh.vertices.size());
    mesh.vertices.push_back({0, 0, -half_height});
    const auto top_center = static_cast<std::uint32_t>(mesh.vertices.size());
    mesh.vertices.push_back({0, 0, half_height});

    for (int s = 0; s < segments; ++s) {
        const auto b0 = static_cast<std::uint32_t>(2 * s);
        const auto t0 = b0 + 1;
        const auto b1 = static_cast<std::uint32_t>(2 * ((s + 1) % segments));
        const auto t1 = b1 + 1;
        mesh.triangles.push_back({b0, b1, t1});
        mesh.triangles.push_back({b0, t1, t0});
        mesh.triangles.push_back({bottom_center, b1, b0});
        mesh.triangles.push_back({top_center, t0, t1});
    }
    return mesh;
}

Scene make_cluster_scene(std::uint64_t seed) {
    Pcg32 rng(seed, 0xc105);
    Scene scene;

    // Octahedral slots keep instances disjoint; jitter stays well below the
    // slot spacing minus the largest circumscribed radius.
    const double d = 0.14;
    std::array<Vec3, 6> slots = {Vec3{d, 0, 0}, Vec3{-d, 0, 0}, Vec3{0, d, 0},
                                 Vec3{0, -d, 0}, Vec3{0, 0, d}, Vec3{0, 0, -d}};
    for (std::size_t i = slots.size(); i > 1; --i)
        std::swap(slots[i - 1], slots[rng.next_below(static_cast<std::uint32_t>(i))]);

    const int count = 2 + static_cast<int>(rng.next_below(5));  // 2..6
    for (int k = 0; k < count; ++k) {
        const double size = rng.uniform(0.030, 0.048);
        TriangleMesh mesh;
        switch (rng.next_below(4)) {
            case 0:
                mesh = make_box({size, rng.uniform(0.030, 0.048), rng.uniform(0.030, 0.048)});
                break;
            case 1:
                mesh = make_icosphere(size, 2);
                break;
            case 2:
                mesh = make_cylinder(0.75 * size, size, 32);
                break;
            default:
                mesh = make_icosphere(size, 0);  // plain icosahedron
                break;
        }

        MeshInstance instance;
        instance.mesh = std::make_shared<TriangleMesh>(std::move(mesh));
        const Vec3 axis = normalized(
            {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)});
        instance.world_from_mesh.rotation =
            rotation_axis_angle(norm2(axis) > 0.0 ? axis : Vec3{0, 0, 1},
                                rng.uniform(0.0, 6.283185307179586));
        instance.world_from_mesh.translation =
            slots[static_cast<std::size_t>(k)] +
            Vec3{rng.uniform(-0.01, 0.01), rng.uniform(-0.01, 0.01), rng.uniform(-0.01, 0.01)};
        scene.instances.push_back(std::move(instance));
    }
    return scene;
}

CameraPose make_input_camera(std::uint64_t seed, int width, int height, double focal) {
    Pcg32 rng(seed, 0xca3 + 1);
    const double azimuth = rng.uniform(0.0, 6.283185307179586);
    const double elevation = rng.uniform(0.35, 1.1);  // radians above the xy plane
    const double distance = 1.2;
    const Vec3 eye{distance * std::cos(elevation) * std::cos(azimuth),
                   distance * std::cos(elevation) * std::sin(azimuth),
                   distance * std::sin(elevation)};

    CameraPose camera;
    camera.intrinsics = {focal, focal, width / 2.0, height / 2.0, width, height};
    camera.pose = look_at_pose(eye, Vec3{0, 0, 0}, Vec3{0, 0, 1});
    return camera;
}

InputView make_input_view(const Scene& scene, const CameraPose& camera) {
    const RenderResult rendered = render_depth(scene, camera.pose, camera.intrinsics);
    InputView view;
    view.depth = rendered.depth;
    view.mask = rendered.mask;
    view.intrinsics = camera.intrinsics;
    view.pose = camera.pose;
    view.rgb = Image(camera.intrinsics.width, camera.intrinsics.height);
    return view;
}

}  // namespace rayfuse::testsupport
