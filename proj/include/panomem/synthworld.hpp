#pragma once

#include <cstdint>
#include <vector>

#include "panomem/memory.hpp"
#include "panomem/raster.hpp"

// Procedural ground-truth point scenes used as the hidden world for oracle
// generation and end-to-end verification.

namespace panomem {

struct SceneSpec {
    std::uint64_t seed = 0;
    double extent = 8.0;       // ground side, meters
    int box_count = 0;
    int sphere_count = 0;
    double density = 2000.0;   // points per square meter
    bool enclosed = false;     // add walls + ceiling (room interior)
    double room_height = 3.0;
};

// Deterministic point cloud for the given SceneSpec; distinct primitives carry
// distinct solid colors, the ground is a two-tone checker.
std::vector<MemPoint> make_scene(const SceneSpec& spec);

// Canonical test scene: 8x8x3 m room interior with four flush corner
// columns (1x1x3 m), colored by a smooth global palette over the direction
// from the room center.  The bounded color gradient keeps resampled
// reprojections within one color quantum of direct renders.
std::vector<MemPoint> room1_scene(double density = 2000.0);

// Rendered mask coverage at a pose; used to pick trajectories with
// adequate co-visibility.
double scene_visibility(std::span<const MemPoint> scene, const CameraPose& pose,
                        int width, int height, const RasterConfig& cfg = {});

}  // namespace panomem
