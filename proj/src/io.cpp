#include "panomem/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

#include <json.hpp>
#include <png.h>

namespace panomem {

namespace {

static_assert(std::endian::native == std::endian::little,
              "raster/PLY writers assume a little-endian host");

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::string& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) throw IoError("cannot open " + path);
    return f;
}

std::uint8_t to_u8(float v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f));
}

}  // namespace

void write_png_rgb(const std::string& path, int width, int height,
                   std::span<const float> rgb) {
    if (rgb.size() != static_cast<std::size_t>(width) * height * 3)
        throw IoError("rgb buffer size mismatch for " + path);
    FilePtr f = open_file(path, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (!png || !info || setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng write failure for " + path);
    }
    png_init_io(png, f.get());
    png_set_IHDR(png, info, width, height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    std::vector<std::uint8_t> row(static_cast<std::size_t>(width) * 3);
    for (int j = 0; j < height; ++j) {
        const float* src = &rgb[static_cast<std::size_t>(j) * width * 3];
        for (std::size_t i = 0; i < row.size(); ++i) row[i] = to_u8(src[i]);
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

void write_png_rgb(const std::string& path, const EquirectImage& img) {
    write_png_rgb(path, img.width, img.height, img.rgb);
}

EquirectImage read_png_rgb(const std::string& path) {
    FilePtr f = open_file(path, "rb");
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (!png || !info || setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("libpng read failure for " + path);
    }
    png_init_io(png, f.get());
    png_read_info(png, info);

    png_set_expand(png);
    png_set_strip_16(png);
    png_set_strip_alpha(png);
    png_set_gray_to_rgb(png);
    png_read_update_info(png, info);

    const int width = static_cast<int>(png_get_image_width(png, info));
    const int height = static_cast<int>(png_get_image_height(png, info));
    if (png_get_channels(png, info) != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("unexpected channel count in " + path);
    }

    EquirectImage img(width, height);
    std::vector<std::uint8_t> row(static_cast<std::size_t>(width) * 3);
    for (int j = 0; j < height; ++j) {
        png_read_row(png, row.data(), nullptr);
        float* dst = &img.rgb[static_cast<std::size_t>(j) * width * 3];
        for (std::size_t i = 0; i < row.size(); ++i) dst[i] = row[i] / 255.0f;
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

void write_png_mask(const std::string& path, int width, int height,
                    std::span<const std::uint8_t> mask) {
    if (mask.size() != static_cast<std::size_t>(width) * height)
        throw IoError("mask buffer size mismatch for " + path);
    FilePtr f = open_file(path, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (!png || !info || setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng write failure for " + path);
    }
    png_init_io(png, f.get());
    png_set_IHDR(png, info, width, height, 1, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    const int row_bytes = (width + 7) / 8;
    std::vector<std::uint8_t> row(row_bytes);
    for (int j = 0; j < height; ++j) {
        std::fill(row.begin(), row.end(), 0);
        for (int i = 0; i < width; ++i)
            if (mask[static_cast<std::size_t>(j) * width + i])
                row[i >> 3] |= static_cast<std::uint8_t>(0x80 >> (i & 7));
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

std::vector<std::uint8_t> read_png_mask(const std::string& path, int& width, int& height) {
    FilePtr f = open_file(path, "rb");
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (!png || !info || setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("libpng read failure for " + path);
    }
    png_init_io(png, f.get());
    png_read_info(png, info);
    png_set_packing(png);  // expand 1-bit rows to one byte per pixel
    png_read_update_info(png, info);

    width = static_cast<int>(png_get_image_width(png, info));
    height = static_cast<int>(png_get_image_height(png, info));
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(width) * height);
    std::vector<std::uint8_t> row(width);
    for (int j = 0; j < height; ++j) {
        png_read_row(png, row.data(), nullptr);
        for (int i = 0; i < width; ++i)
            mask[static_cast<std::size_t>(j) * width + i] = row[i] ? 1 : 0;
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return mask;
}

void write_f32_raster(const std::string& path, int width, int height, int channels,
                      std::span<const float> data) {
    if (data.size() != static_cast<std::size_t>(width) * height * channels)
        throw IoError("raster buffer size mismatch for " + path);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path);
    nlohmann::json header = {{"w", width}, {"h", height}, {"channels", channels}};
    os << header.dump() << "\n";
    os.write(reinterpret_cast<const char*>(data.data()),
             static_cast<std::streamsize>(data.size() * sizeof(float)));
    if (!os) throw IoError("short write to " + path);
}

std::vector<float> read_f32_raster(const std::string& path, int& width, int& height,
                                   int& channels) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(is, line)) throw IoError("missing header in " + path);
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(line);
        width = header.at("w").get<int>();
        height = header.at("h").get<int>();
        channels = header.at("channels").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw IoError("bad raster header in " + path + ": " + e.what());
    }
    if (width <= 0 || height <= 0 || channels <= 0) throw IoError("bad raster dims in " + path);
    std::vector<float> data(static_cast<std::size_t>(width) * height * channels);
    is.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(float)));
    if (is.gcount() != static_cast<std::streamsize>(data.size() * sizeof(float)))
        throw IoError("truncated raster payload in " + path);
    return data;
}

void write_plucker(const std::string& path, const PluckerField& field) {
    write_f32_raster(path, field.width, field.height, 6, field.channels);
}

PluckerField read_plucker(const std::string& path) {
    PluckerField pf;
    int channels = 0;
    pf.channels = read_f32_raster(path, pf.width, pf.height, channels);
    if (channels != 6) throw IoError("expected 6 channels in " + path);
    return pf;
}

void write_depth(const std::string& path, const EquirectImage& img) {
    if (!img.has_depth()) throw IoError("image has no depth channel");
    write_f32_raster(path, img.width, img.height, 1, img.depth);
}

void read_depth_into(const std::string& path, EquirectImage& img) {
    int w = 0, h = 0, c = 0;
    std::vector<float> d = read_f32_raster(path, w, h, c);
    if (c != 1 || w != img.width || h != img.height)
        throw IoError("depth raster shape mismatch in " + path);
    img.depth = std::move(d);
}

void write_ply(const std::string& path, std::span<const MemPoint> points) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path);
    os << "ply\nformat binary_little_endian 1.0\n"
       << "element vertex " << points.size() << "\n"
       << "property float x\nproperty float y\nproperty float z\n"
       << "property uchar red\nproperty uchar green\nproperty uchar blue\n"
       << "property float confidence\nend_header\n";
    for (const MemPoint& p : points) {
        float xyz[3] = {p.x, p.y, p.z};
        std::uint8_t rgb[3] = {to_u8(p.r), to_u8(p.g), to_u8(p.b)};
        os.write(reinterpret_cast<const char*>(xyz), sizeof(xyz));
        os.write(reinterpret_cast<const char*>(rgb), sizeof(rgb));
        os.write(reinterpret_cast<const char*>(&p.confidence), sizeof(float));
    }
    if (!os) throw IoError("short write to " + path);
}

std::vector<MemPoint> read_ply(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(is, line) || line != "ply") throw IoError("not a PLY file: " + path);

    std::size_t count = 0;
    struct Prop {
        std::string type, name;
    };
    std::vector<Prop> props;
    bool little_endian = false;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string tok;
        ls >> tok;
        if (tok == "format") {
            std::string fmt;
            ls >> fmt;
            little_endian = fmt == "binary_little_endian";
        } else if (tok == "element") {
            std::string what;
            ls >> what >> count;
            if (what != "vertex") throw IoError("unsupported PLY element in " + path);
        } else if (tok == "property") {
            Prop p;
            ls >> p.type >> p.name;
            props.push_back(p);
        } else if (tok == "end_header") {
            break;
        }
    }
    if (!little_endian) throw IoError("expected binary_little_endian PLY in " + path);

    std::vector<MemPoint> pts(count);
    for (std::size_t i = 0; i < count; ++i) {
        MemPoint& p = pts[i];
        for (const Prop& pr : props) {
            if (pr.type == "float") {
                float v = 0;
                is.read(reinterpret_cast<char*>(&v), sizeof(float));
                if (pr.name == "x") p.x = v;
                else if (pr.name == "y") p.y = v;
                else if (pr.name == "z") p.z = v;
                else if (pr.name == "confidence") p.confidence = v;
            } else if (pr.type == "uchar") {
                std::uint8_t v = 0;
                is.read(reinterpret_cast<char*>(&v), 1);
                if (pr.name == "red") p.r = v / 255.0f;
                else if (pr.name == "green") p.g = v / 255.0f;
                else if (pr.name == "blue") p.b = v / 255.0f;
            } else {
                throw IoError("unsupported PLY property type " + pr.type + " in " + path);
            }
        }
        if (!is) throw IoError("truncated PLY payload in " + path);
    }
    return pts;
}

namespace {

nlohmann::json pose_to_json(const CameraPose& p, int frame) {
    return {{"frame", frame},
            {"pos", {p.pos.x(), p.pos.y(), p.pos.z()}},
            {"quat", {p.quat.w(), p.quat.x(), p.quat.y(), p.quat.z()}},
            {"convention", p.convention == Convention::WorldToCameraCv ? "cv" : "gl"}};
}

CameraPose pose_from_json(const nlohmann::json& j) {
    const auto& pos = j.at("pos");
    const auto& q = j.at("quat");
    const std::string conv = j.at("convention").get<std::string>();
    if (conv != "cv" && conv != "gl") throw IoError("unknown pose convention: " + conv);
    return CameraPose(
        Eigen::Vector3d(pos.at(0).get<double>(), pos.at(1).get<double>(), pos.at(2).get<double>()),
        Eigen::Quaterniond(q.at(0).get<double>(), q.at(1).get<double>(), q.at(2).get<double>(),
                           q.at(3).get<double>()),
        conv == "cv" ? Convention::WorldToCameraCv : Convention::CameraToWorldGl);
}

nlohmann::json poses_to_json(const std::vector<CameraPose>& poses) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < poses.size(); ++i)
        arr.push_back(pose_to_json(poses[i], static_cast<int>(i)));
    return arr;
}

std::vector<CameraPose> poses_from_json(const nlohmann::json& arr) {
    std::vector<std::pair<int, CameraPose>> entries;
    for (const auto& j : arr) entries.emplace_back(j.at("frame").get<int>(), pose_from_json(j));
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<CameraPose> poses;
    poses.reserve(entries.size());
    for (auto& [_, p] : entries) poses.push_back(p);
    return poses;
}

nlohmann::json load_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open " + path);
    try {
        return nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception& e) {
        throw IoError("malformed JSON in " + path + ": " + e.what());
    }
}

void save_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path);
    os << j.dump(2) << "\n";
}

}  // namespace

void write_poses_json(const std::string& path, const std::vector<CameraPose>& poses) {
    save_json(path, poses_to_json(poses));
}

std::vector<CameraPose> read_poses_json(const std::string& path) {
    const nlohmann::json j = load_json(path);
    try {
        return poses_from_json(j.is_array() ? j : j.at("poses"));
    } catch (const nlohmann::json::exception& e) {
        throw IoError("bad pose file " + path + ": " + e.what());
    }
}

void write_trajectory_json(const std::string& path, const Trajectory& traj) {
    nlohmann::json j;
    switch (traj.kind) {
        case TrajectoryKind::PolylineLoop: j["kind"] = "polyline_loop"; break;
        case TrajectoryKind::Curve: j["kind"] = "curve"; break;
        case TrajectoryKind::ActionWalk: j["kind"] = "action_walk"; break;
    }
    j["step"] = traj.step;
    j["seed"] = traj.seed;
    j["poses"] = poses_to_json(traj.poses);
    save_json(path, j);
}

Trajectory read_trajectory_json(const std::string& path) {
    const nlohmann::json j = load_json(path);
    Trajectory traj;
    try {
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "polyline_loop") traj.kind = TrajectoryKind::PolylineLoop;
        else if (kind == "curve") traj.kind = TrajectoryKind::Curve;
        else if (kind == "action_walk") traj.kind = TrajectoryKind::ActionWalk;
        else throw IoError("unknown trajectory kind: " + kind);
        traj.step = j.at("step").get<double>();
        traj.seed = j.at("seed").get<std::uint64_t>();
        traj.poses = poses_from_json(j.at("poses"));
    } catch (const nlohmann::json::exception& e) {
        throw IoError("bad trajectory file " + path + ": " + e.what());
    }
    return traj;
}

}  // namespace panomem
