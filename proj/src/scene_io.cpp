#include "rayfuse/scene_io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "rayfuse/error.hpp"

namespace fs = std::filesystem;

namespace rayfuse {

namespace {

void ensure_parent_dir(const std::string& path) {
    const fs::path parent = fs::path(path).parent_path();
    if (!parent.empty()) {
        std::error_code ec;
        fs::create_directories(parent, ec);
    }
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
    ensure_parent_dir(path);
    std::ofstream out(path, mode);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

std::ifstream open_in(const std::string& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream in(path, mode);
    if (!in) throw IoError("cannot open '" + path + "'");
    return in;
}

std::string read_all(std::ifstream& in) {
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

[[noreturn]] void parse_fail(const std::string& path, std::size_t line, const std::string& what) {
    throw IoError(path + ":" + std::to_string(line) + ": " + what);
}

bool parse_double(const std::string& token, double& out) {
    const char* begin = token.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end != begin && *end == '\0' && std::isfinite(out);
}

bool parse_long(const std::string& token, long& out) {
    const char* begin = token.c_str();
    char* end = nullptr;
    out = std::strtol(begin, &end, 10);
    return end != begin && *end == '\0';
}

std::vector<std::string> split_tokens(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream s(line);
    std::string t;
    while (s >> t) tokens.push_back(t);
    return tokens;
}

void append_u32_le(std::string& buf, std::uint32_t v) {
    buf.push_back(static_cast<char>(v & 0xffu));
    buf.push_back(static_cast<char>((v >> 8) & 0xffu));
    buf.push_back(static_cast<char>((v >> 16) & 0xffu));
    buf.push_back(static_cast<char>((v >> 24) & 0xffu));
}

std::uint32_t read_u32_le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::string format_g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Shared by the camera and scene loaders: accept a pose whose rotation is
// orthonormal to 1e-6, re-orthonormalizing only when it deviates enough that
// leaving it alone would violate the rigid-transform invariant. Keeping tight
// inputs untouched makes load/save an exact round trip.
Mat3 checked_rotation(const Mat3& r, const std::string& path, std::size_t line) {
    const double dev = orthonormality_deviation(r);
    if (dev > 1e-6) parse_fail(path, line, "rotation not orthonormal (deviation > 1e-6)");
    Mat3 fixed = dev > 1e-9 ? orthonormalized(r) : r;
    if (fixed.det() < 0.0) parse_fail(path, line, "rotation has negative determinant");
    return fixed;
}

}  // namespace

// --------------------------------------------------------------------------
// Wavefront OBJ subset

TriangleMesh load_mesh(const std::string& path) {
    std::ifstream in = open_in(path);
    TriangleMesh mesh;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream s(line);
        std::string tag;
        if (!(s >> tag) || tag[0] == '#') continue;
        if (tag == "v") {
            Vec3 v;
            if (!(s >> v.x >> v.y >> v.z))
                parse_fail(path, line_no, "vertex needs three coordinates");
            mesh.vertices.push_back(v);
        } else if (tag == "f") {
            std::vector<long> ids;
            std::string token;
            while (s >> token) {
                const std::size_t slash = token.find('/');
                if (slash != std::string::npos) token = token.substr(0, slash);
                long id = 0;
                if (!parse_long(token, id))
                    parse_fail(path, line_no, "non-integer face index '" + token + "'");
                ids.push_back(id);
            }
            if (ids.size() < 3) parse_fail(path, line_no, "face needs at least three indices");
            for (std::size_t k = 2; k < ids.size(); ++k) {
                const long fan[3] = {ids[0], ids[k - 1], ids[k]};
                std::array<std::uint32_t, 3> tri{};
                for (int c = 0; c < 3; ++c) {
                    if (fan[c] < 1)
                        parse_fail(path, line_no, "face index must be positive (1-indexed)");
                    tri[c] = static_cast<std::uint32_t>(fan[c] - 1);
                }
                mesh.triangles.push_back(tri);
            }
        }
        // Other tags (vn, vt, o, g, s, usemtl, ...) are ignored.
    }
    const auto n = static_cast<std::uint32_t>(mesh.vertices.size());
    for (const auto& tri : mesh.triangles)
        for (const auto idx : tri)
            if (idx >= n) throw IoError(path + ": face index " + std::to_string(idx + 1) +
                                        " exceeds vertex count " + std::to_string(n));
    return mesh;
}

void save_mesh(const std::string& path, const TriangleMesh& mesh) {
    validate(mesh);
    std::ofstream out = open_out(path);
    for (const Vec3& v : mesh.vertices)
        out << "v " << format_g9(v.x) << ' ' << format_g9(v.y) << ' ' << format_g9(v.z) << '\n';
    for (const auto& tri : mesh.triangles)
        out << "f " << tri[0] + 1 << ' ' << tri[1] + 1 << ' ' << tri[2] + 1 << '\n';
    if (!out) throw IoError("failed writing '" + path + "'");
}

// --------------------------------------------------------------------------
// RDM1 float raster

Raster load_raster(const std::string& path) {
    std::ifstream in = open_in(path, std::ios::binary);
    const std::string data = read_all(in);
    if (data.size() < 4 || data.compare(0, 4, "RDM1") != 0)
        throw IoError(path + ": wrong magic, expected RDM1");
    if (data.size() < 12) throw IoError(path + ": unexpected EOF in header");

    const auto* bytes = reinterpret_cast<const unsigned char*>(data.data());
    const std::uint32_t width = read_u32_le(bytes + 4);
    const std::uint32_t height = read_u32_le(bytes + 8);
    const std::uint64_t expected = 12u + 4ull * width * height;
    if (data.size() < expected)
        throw IoError(path + ": unexpected EOF at byte " + std::to_string(data.size()) +
                      ", expected " + std::to_string(expected));
    if (data.size() > expected)
        throw IoError(path + ": trailing bytes after pixel data (size " +
                      std::to_string(data.size()) + ", expected " + std::to_string(expected) + ")");

    Raster raster(static_cast<int>(width), static_cast<int>(height), 0.0);
    for (std::size_t s = 0; s < raster.values.size(); ++s) {
        const std::uint32_t bits = read_u32_le(bytes + 12 + 4 * s);
        raster.values[s] = static_cast<double>(std::bit_cast<float>(bits));
    }
    return raster;
}

void save_raster(const std::string& path, const Raster& raster) {
    std::string buf;
    buf.reserve(12 + 4 * raster.values.size());
    buf += "RDM1";
    append_u32_le(buf, static_cast<std::uint32_t>(raster.width));
    append_u32_le(buf, static_cast<std::uint32_t>(raster.height));
    for (const double v : raster.values)
        append_u32_le(buf, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    std::ofstream out = open_out(path, std::ios::binary);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw IoError("failed writing '" + path + "'");
}

// --------------------------------------------------------------------------
// PGM / PPM

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string netpbm_token(const std::string& data, std::size_t& pos, const std::string& path) {
    for (;;) {
        while (pos < data.size() && std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
        if (pos < data.size() && data[pos] == '#') {
            while (pos < data.size() && data[pos] != '\n') ++pos;
            continue;
        }
        break;
    }
    if (pos >= data.size()) throw IoError(path + ": unexpected EOF in header");
    const std::size_t start = pos;
    while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
    return data.substr(start, pos - start);
}

struct NetpbmHeader {
    long width = 0;
    long height = 0;
    std::size_t data_offset = 0;
};

NetpbmHeader load_netpbm(const std::string& path, const std::string& data,
                         const char* magic, int channels) {
    std::size_t pos = 0;
    if (netpbm_token(data, pos, path) != magic)
        throw IoError(path + ": wrong magic, expected " + magic);
    NetpbmHeader header;
    long maxval = 0;
    if (!parse_long(netpbm_token(data, pos, path), header.width) ||
        !parse_long(netpbm_token(data, pos, path), header.height) ||
        !parse_long(netpbm_token(data, pos, path), maxval))
        throw IoError(path + ": malformed header");
    if (header.width <= 0 || header.height <= 0)
        throw IoError(path + ": non-positive image size");
    if (maxval != 255) throw IoError(path + ": maxval must be 255");
    ++pos;  // single whitespace byte after maxval
    const std::uint64_t expected =
        static_cast<std::uint64_t>(channels) * header.width * header.height;
    if (data.size() < pos || data.size() - pos < expected)
        throw IoError(path + ": unexpected EOF at byte " + std::to_string(data.size()));
    if (data.size() - pos > expected) throw IoError(path + ": trailing bytes after pixel data");
    header.data_offset = pos;
    return header;
}

}  // namespace

BinaryMask load_mask(const std::string& path) {
    std::ifstream in = open_in(path, std::ios::binary);
    const std::string data = read_all(in);
    const NetpbmHeader header = load_netpbm(path, data, "P5", 1);
    BinaryMask mask(static_cast<int>(header.width), static_cast<int>(header.height), 0);
    for (std::size_t s = 0; s < mask.values.size(); ++s)
        mask.values[s] = data[header.data_offset + s] != 0 ? 1 : 0;
    return mask;
}

void save_mask(const std::string& path, const BinaryMask& mask) {
    std::ofstream out = open_out(path, std::ios::binary);
    out << "P5\n" << mask.width << ' ' << mask.height << "\n255\n";
    std::string buf(mask.values.size(), '\0');
    for (std::size_t s = 0; s < mask.values.size(); ++s)
        buf[s] = mask.values[s] ? static_cast<char>(255) : '\0';
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw IoError("failed writing '" + path + "'");
}

Image load_image(const std::string& path) {
    std::ifstream in = open_in(path, std::ios::binary);
    const std::string data = read_all(in);
    const NetpbmHeader header = load_netpbm(path, data, "P6", 3);
    Image image(static_cast<int>(header.width), static_cast<int>(header.height));
    for (std::size_t s = 0; s < image.rgb.size(); ++s)
        image.rgb[s] = static_cast<std::uint8_t>(data[header.data_offset + s]);
    return image;
}

void save_image(const std::string& path, const Image& image) {
    std::ofstream out = open_out(path, std::ios::binary);
    out << "P6\n" << image.width << ' ' << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.rgb.data()),
              static_cast<std::streamsize>(image.rgb.size()));
    if (!out) throw IoError("failed writing '" + path + "'");
}

// --------------------------------------------------------------------------
// ASCII PLY

PointCloud load_cloud(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    std::size_t line_no = 0;

    auto next_line = [&]() -> std::string {
        if (!std::getline(in, line)) parse_fail(path, line_no, "unexpected EOF");
        ++line_no;
        return line;
    };

    if (split_tokens(next_line()) != std::vector<std::string>{"ply"})
        parse_fail(path, line_no, "not a PLY file");
    {
        const auto tokens = split_tokens(next_line());
        if (tokens.size() != 3 || tokens[0] != "format" || tokens[1] != "ascii")
            parse_fail(path, line_no, "only ascii PLY is supported");
    }

    struct Element {
        std::string name;
        long count = 0;
        std::vector<std::string> properties;
    };
    std::vector<Element> elements;

    for (;;) {
        const auto tokens = split_tokens(next_line());
        if (tokens.empty()) continue;
        if (tokens[0] == "comment") continue;
        if (tokens[0] == "end_header") break;
        if (tokens[0] == "element") {
            if (tokens.size() != 3) parse_fail(path, line_no, "malformed element line");
            Element e;
            e.name = tokens[1];
            if (!parse_long(tokens[2], e.count) || e.count < 0)
                parse_fail(path, line_no, "bad element count");
            elements.push_back(e);
        } else if (tokens[0] == "property") {
            if (elements.empty()) parse_fail(path, line_no, "property before element");
            if (tokens.size() < 3) parse_fail(path, line_no, "malformed property line");
            if (tokens[1] == "list")
                elements.back().properties.push_back("");  // list property, skipped on read
            else
                elements.back().properties.push_back(tokens.back());
        } else {
            parse_fail(path, line_no, "unknown header line '" + tokens[0] + "'");
        }
    }

    PointCloud cloud;
    for (const auto& element : elements) {
        if (element.name != "vertex") {
            for (long r = 0; r < element.count; ++r) next_line();
            continue;
        }
        int ix = -1, iy = -1, iz = -1, iconf = -1;
        for (std::size_t p = 0; p < element.properties.size(); ++p) {
            const std::string& name = element.properties[p];
            if (name == "x") ix = static_cast<int>(p);
            else if (name == "y") iy = static_cast<int>(p);
            else if (name == "z") iz = static_cast<int>(p);
            else if (name == "confidence") iconf = static_cast<int>(p);
        }
        if (ix < 0 || iy < 0 || iz < 0)
            parse_fail(path, line_no, "vertex element lacks x/y/z properties");

        cloud.points.reserve(std::min<std::size_t>(static_cast<std::size_t>(element.count),
                                                   std::size_t{1} << 20));
        for (long r = 0; r < element.count; ++r) {
            const auto tokens = split_tokens(next_line());
            if (tokens.size() < element.properties.size())
                parse_fail(path, line_no, "vertex row has too few values");
            Vec3 point;
            double conf = 0.0;
            if (!parse_double(tokens[static_cast<std::size_t>(ix)], point.x) ||
                !parse_double(tokens[static_cast<std::size_t>(iy)], point.y) ||
                !parse_double(tokens[static_cast<std::size_t>(iz)], point.z))
                parse_fail(path, line_no, "bad vertex coordinate");
            if (iconf >= 0 && !parse_double(tokens[static_cast<std::size_t>(iconf)], conf))
                parse_fail(path, line_no, "bad confidence value");
            cloud.points.push_back(point);
            if (iconf >= 0) cloud.confidence.push_back(conf);
        }
    }
    return cloud;
}

void save_cloud(const std::string& path, const PointCloud& cloud) {
    if (cloud.has_confidence() && cloud.confidence.size() != cloud.points.size())
        throw DomainError("save_cloud: confidence size disagrees with point count");
    std::ofstream out = open_out(path);
    out << "ply\nformat ascii 1.0\n";
    out << "element vertex " << cloud.points.size() << '\n';
    out << "property float x\nproperty float y\nproperty float z\n";
    if (cloud.has_confidence()) out << "property float confidence\n";
    out << "end_header\n";
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        const Vec3& p = cloud.points[i];
        out << format_g9(p.x) << ' ' << format_g9(p.y) << ' ' << format_g9(p.z);
        if (cloud.has_confidence()) out << ' ' << format_g9(cloud.confidence[i]);
        out << '\n';
    }
    if (!out) throw IoError("failed writing '" + path + "'");
}

// --------------------------------------------------------------------------
// Camera text

CameraPose load_camera(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    std::size_t line_no = 0;

    auto next_tokens = [&]() {
        for (;;) {
            if (!std::getline(in, line)) parse_fail(path, line_no, "missing line");
            ++line_no;
            auto tokens = split_tokens(line);
            if (!tokens.empty() && tokens[0][0] != '#') return tokens;
        }
    };

    CameraPose camera;
    {
        const auto tokens = next_tokens();
        long w = 0, h = 0;
        if (tokens.size() != 6 || !parse_double(tokens[0], camera.intrinsics.fx) ||
            !parse_double(tokens[1], camera.intrinsics.fy) ||
            !parse_double(tokens[2], camera.intrinsics.cx) ||
            !parse_double(tokens[3], camera.intrinsics.cy) || !parse_long(tokens[4], w) ||
            !parse_long(tokens[5], h))
            parse_fail(path, line_no, "expected 'fx fy cx cy width height'");
        camera.intrinsics.width = static_cast<int>(w);
        camera.intrinsics.height = static_cast<int>(h);
    }
    validate(camera.intrinsics);

    Mat3 rotation;
    for (int r = 0; r < 3; ++r) {
        const auto tokens = next_tokens();
        if (tokens.size() != 4) parse_fail(path, line_no, "pose row needs four numbers");
        double row[4];
        for (int c = 0; c < 4; ++c)
            if (!parse_double(tokens[static_cast<std::size_t>(c)], row[c]))
                parse_fail(path, line_no, "bad pose number");
        rotation(r, 0) = row[0];
        rotation(r, 1) = row[1];
        rotation(r, 2) = row[2];
        (r == 0 ? camera.pose.translation.x
                : r == 1 ? camera.pose.translation.y : camera.pose.translation.z) = row[3];
    }
    camera.pose.rotation = checked_rotation(rotation, path, line_no);
    return camera;
}

void save_camera(const std::string& path, const CameraPose& camera) {
    validate(camera.intrinsics);
    std::ofstream out = open_out(path);
    out << format_g17(camera.intrinsics.fx) << ' ' << format_g17(camera.intrinsics.fy) << ' '
        << format_g17(camera.intrinsics.cx) << ' ' << format_g17(camera.intrinsics.cy) << ' '
        << camera.intrinsics.width << ' ' << camera.intrinsics.height << '\n';
    const Vec3 t = camera.pose.translation;
    const double trans[3] = {t.x, t.y, t.z};
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) out << format_g17(camera.pose.rotation(r, c)) << ' ';
        out << format_g17(trans[r]) << '\n';
    }
    if (!out) throw IoError("failed writing '" + path + "'");
}

// --------------------------------------------------------------------------
// Scene files

SceneFile load_scene(const std::string& path) {
    std::ifstream in = open_in(path);
    const fs::path base = fs::path(path).parent_path();

    SceneFile result;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto tokens = split_tokens(line);
        if (tokens.empty() || tokens[0][0] == '#') continue;

        if (tokens[0] == "mesh") {
            if (tokens.size() != 14)
                parse_fail(path, line_no, "mesh line needs a path and 12 pose numbers");
            double v[12];
            for (int k = 0; k < 12; ++k)
                if (!parse_double(tokens[static_cast<std::size_t>(2 + k)], v[k]))
                    parse_fail(path, line_no, "bad pose number");
            MeshInstance instance;
            const fs::path mesh_path = fs::path(tokens[1]).is_absolute()
                                           ? fs::path(tokens[1])
                                           : base / tokens[1];
            instance.mesh =
                std::make_shared<TriangleMesh>(load_mesh(mesh_path.string()));
            Mat3 rotation;
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c) rotation(r, c) = v[4 * r + c];
            instance.world_from_mesh.rotation = checked_rotation(rotation, path, line_no);
            instance.world_from_mesh.translation = {v[3], v[7], v[11]};
            result.scene.instances.push_back(std::move(instance));
        } else if (tokens[0] == "camera") {
            if (tokens.size() != 19)
                parse_fail(path, line_no,
                           "camera line needs 'fx fy cx cy width height' and 12 pose numbers");
            CameraPose camera;
            long w = 0, h = 0;
            double v[12];
            if (!parse_double(tokens[1], camera.intrinsics.fx) ||
                !parse_double(tokens[2], camera.intrinsics.fy) ||
                !parse_double(tokens[3], camera.intrinsics.cx) ||
                !parse_double(tokens[4], camera.intrinsics.cy) || !parse_long(tokens[5], w) ||
                !parse_long(tokens[6], h))
                parse_fail(path, line_no, "bad camera intrinsics");
            for (int k = 0; k < 12; ++k)
                if (!parse_double(tokens[static_cast<std::size_t>(7 + k)], v[k]))
                    parse_fail(path, line_no, "bad camera pose number");
            camera.intrinsics.width = static_cast<int>(w);
            camera.intrinsics.height = static_cast<int>(h);
            validate(camera.intrinsics);
            Mat3 rotation;
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c) rotation(r, c) = v[4 * r + c];
            camera.pose.rotation = checked_rotation(rotation, path, line_no);
            camera.pose.translation = {v[3], v[7], v[11]};
            result.input_camera = camera;
        } else {
            parse_fail(path, line_no, "unknown directive '" + tokens[0] + "'");
        }
    }
    return result;
}

void save_scene(const std::string& path, const Scene& scene,
                const std::optional<CameraPose>& input_camera) {
    std::ofstream out = open_out(path);
    const fs::path base = fs::path(path).parent_path();
    std::size_t index = 0;
    for (const MeshInstance& instance : scene.instances) {
        const std::string mesh_name = "mesh_" + std::to_string(index++) + ".obj";
        save_mesh((base / mesh_name).string(), *instance.mesh);
        out << "mesh " << mesh_name;
        const Vec3 t = instance.world_from_mesh.translation;
        const double trans[3] = {t.x, t.y, t.z};
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c)
                out << ' ' << format_g17(instance.world_from_mesh.rotation(r, c));
            out << ' ' << format_g17(trans[r]);
        }
        out << '\n';
    }
    if (input_camera) {
        out << "camera " << format_g17(input_camera->intrinsics.fx) << ' '
            << format_g17(input_camera->intrinsics.fy) << ' '
            << format_g17(input_camera->intrinsics.cx) << ' '
            << format_g17(input_camera->intrinsics.cy) << ' ' << input_camera->intrinsics.width
            << ' ' << input_camera->intrinsics.height;
        const Vec3 t = input_camera->pose.translation;
        const double trans[3] = {t.x, t.y, t.z};
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c)
                out << ' ' << format_g17(input_camera->pose.rotation(r, c));
            out << ' ' << format_g17(trans[r]);
        }
        out << '\n';
    }
    if (!out) throw IoError("failed writing '" + path + "'");
}

// --------------------------------------------------------------------------
// Prediction and input-view directories

namespace {

std::string view_stem(const std::string& directory, std::size_t k) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "view_%04zu", k);
    return (fs::path(directory) / buf).string();
}

}  // namespace

std::vector<ViewPrediction> load_prediction_dir(const std::string& directory) {
    if (!fs::is_directory(directory))
        throw IoError("prediction directory '" + directory + "' does not exist");

    std::vector<ViewPrediction> views;
    for (std::size_t k = 0;; ++k) {
        const std::string stem = view_stem(directory, k);
        if (!fs::exists(stem + ".depth")) break;

        ViewPrediction pred;
        pred.depth = load_raster(stem + ".depth");
        pred.raw_confidence = load_raster(stem + ".conf");
        const BinaryMask mask = load_mask(stem + ".mask.pgm");
        const CameraPose camera = load_camera(stem + ".cam");

        pred.mask_prob = Raster(mask.width, mask.height, 0.0);
        for (std::size_t s = 0; s < mask.values.size(); ++s)
            pred.mask_prob.values[s] = mask.values[s] ? 1.0 : 0.0;
        pred.pose = camera.pose;
        pred.intrinsics = camera.intrinsics;
        validate(pred);
        views.push_back(std::move(pred));
    }
    return views;
}

void save_prediction_dir(const std::string& directory,
                         const std::vector<ViewPrediction>& predictions) {
    std::error_code ec;
    fs::create_directories(directory, ec);
    for (std::size_t k = 0; k < predictions.size(); ++k) {
        const ViewPrediction& pred = predictions[k];
        const std::string stem = view_stem(directory, k);
        save_raster(stem + ".depth", pred.depth);
        save_raster(stem + ".conf", pred.raw_confidence);
        BinaryMask mask(pred.mask_prob.width, pred.mask_prob.height, 0);
        for (std::size_t s = 0; s < mask.values.size(); ++s)
            mask.values[s] = pred.mask_prob.values[s] > 0.5 ? 1 : 0;
        save_mask(stem + ".mask.pgm", mask);
        save_camera(stem + ".cam", {pred.intrinsics, pred.pose});
    }
}

InputView load_input_view(const std::string& directory) {
    const fs::path base(directory);
    InputView view;
    view.depth = load_raster((base / "input.depth").string());
    view.mask = load_mask((base / "input.mask.pgm").string());
    const CameraPose camera = load_camera((base / "input.cam").string());
    view.intrinsics = camera.intrinsics;
    view.pose = camera.pose;
    const fs::path rgb = base / "input.rgb.ppm";
    view.rgb = fs::exists(rgb) ? load_image(rgb.string())
                               : Image(view.intrinsics.width, view.intrinsics.height);
    validate(view);
    return view;
}

void save_input_view(const std::string& directory, const InputView& view) {
    validate(view);
    const fs::path base(directory);
    std::error_code ec;
    fs::create_directories(base, ec);
    save_raster((base / "input.depth").string(), view.depth);
    save_mask((base / "input.mask.pgm").string(), view.mask);
    save_camera((base / "input.cam").string(), {view.intrinsics, view.pose});
    if (view.rgb.width > 0) save_image((base / "input.rgb.ppm").string(), view.rgb);
}

}  // namespace rayfuse
