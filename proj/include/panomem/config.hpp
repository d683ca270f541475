#pragma once

#include <cstdint>
#include <string>

#include "panomem/explore.hpp"

// Run configuration shared by the CLI commands.  Precedence, lowest to
// highest: built-in defaults, config file, PANOMEM_* environment variables,
// command-line flags.

namespace panomem {

struct RunConfig {
    int width = 1024;
    int height = 512;
    int clip_len = 25;                    // S + 1
    double confidence_threshold = 0.5;
    int frame_cap = 99;
    double retrieval_radius = 10.0;
    int splat_radius = 1;
    int stride = 1;
    double psnr_cap = 99.0;
    int ssim_window = 7;
    std::uint64_t seed = 0;
    bool letterbox = false;  // pad written PNGs to 1024x576-style 16:9

    void validate() const;  // throws std::invalid_argument

    ExploreConfig explore_config() const;
    RasterConfig raster_config() const;
    MemoryConfig memory_config() const;
};

RunConfig load_config_file(const std::string& path, RunConfig base = {});
void apply_env_overrides(RunConfig& cfg);  // PANOMEM_WIDTH, PANOMEM_SEED, ...

}  // namespace panomem
