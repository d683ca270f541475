#pragma once

#include <span>
#include <vector>

#include "panomem/memory.hpp"
#include "panomem/sphere.hpp"

// Depth-buffered splatting of memory points into a target equirectangular
// view (the reprojection operator), and the inverse unprojection used by
// the oracle reconstructor.
//
// Determinism: the winner at each pixel is the lexicographic minimum of
// (depth quantized to 1e-9 m, gathered point index), a total order, so the
// output is bit-identical regardless of internal parallelism.  The gathered
// point index encodes the tie rule "lower frame_id, then insertion order"
// because gather_points emits points in exactly that order.

namespace panomem {

struct Reprojection {
    EquirectImage image;           // rgb + depth + mask populated
    double covered_fraction = 0.0; // mean of the mask
};

enum class RasterPath { Direct, Cubemap };

struct RasterConfig {
    int splat_radius = 1;  // 1 = single pixel; r dilates over a (2r-1)^2 square
    float background[3] = {0.5f, 0.5f, 0.5f};
    RasterPath path = RasterPath::Direct;
};

Reprojection reproject(std::span<const MemPoint> points, const CameraPose& pose,
                       int width, int height, const RasterConfig& cfg = {});
Reprojection reproject_serial(std::span<const MemPoint> points, const CameraPose& pose,
                              int width, int height, const RasterConfig& cfg = {});

// Alternative render path: rasterize six 90-degree pinhole faces
// (F = W/4) and compose them back to equirectangular.
Reprojection reproject_via_cubemap(std::span<const MemPoint> points, const CameraPose& pose,
                                   int width, int height, const RasterConfig& cfg = {});

// Ground-truth render of a full scene; same kernel as reproject, named so
// tests distinguish direct renders from memory reprojections.
Reprojection render_scene(std::span<const MemPoint> scene, const CameraPose& pose,
                          int width, int height, const RasterConfig& cfg = {});

// Inverse of the reprojection: one point per masked pixel (subsampled by
// stride), placed at camera_center + depth * world_ray(pixel).  Confidence
// is 1 unless a per-pixel raster is supplied.  Throws when depth is absent.
std::vector<MemPoint> unproject(const EquirectImage& img, const CameraPose& pose,
                                int stride = 1,
                                const std::vector<float>* confidence = nullptr);

}  // namespace panomem
