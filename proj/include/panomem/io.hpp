#pragma once

#include <span>
#include <string>
#include <vector>

#include "panomem/memory.hpp"
#include "panomem/sphere.hpp"
#include "panomem/trajectory.hpp"

// File formats:
//   - color images: 8-bit RGB PNG
//   - masks: 1-bit grayscale PNG
//   - depth / Plucker tensors: one-line JSON header {"w":..,"h":..,"channels":..}
//     followed by row-major little-endian float32 data
//   - point clouds: binary little-endian PLY (x y z float, rgb uchar,
//     confidence float)
//   - poses: JSON array of {"frame", "pos", "quat", "convention"}
//   - trajectories: {"kind", "step", "seed", "poses": [...]}

namespace panomem {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_png_rgb(const std::string& path, int width, int height,
                   std::span<const float> rgb);
void write_png_rgb(const std::string& path, const EquirectImage& img);
EquirectImage read_png_rgb(const std::string& path);

void write_png_mask(const std::string& path, int width, int height,
                    std::span<const std::uint8_t> mask);
std::vector<std::uint8_t> read_png_mask(const std::string& path, int& width, int& height);

void write_f32_raster(const std::string& path, int width, int height, int channels,
                      std::span<const float> data);
std::vector<float> read_f32_raster(const std::string& path, int& width, int& height,
                                   int& channels);

void write_plucker(const std::string& path, const PluckerField& field);
PluckerField read_plucker(const std::string& path);

void write_depth(const std::string& path, const EquirectImage& img);
void read_depth_into(const std::string& path, EquirectImage& img);

void write_ply(const std::string& path, std::span<const MemPoint> points);
std::vector<MemPoint> read_ply(const std::string& path);

void write_poses_json(const std::string& path, const std::vector<CameraPose>& poses);
std::vector<CameraPose> read_poses_json(const std::string& path);

void write_trajectory_json(const std::string& path, const Trajectory& traj);
Trajectory read_trajectory_json(const std::string& path);

}  // namespace panomem
