#include "panomem/config.hpp"

#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace panomem {

void RunConfig::validate() const {
    if (width != 2 * height || height < 1)
        throw std::invalid_argument("resolution must satisfy W = 2H");
    if (clip_len < 2) throw std::invalid_argument("clip length must be at least 2");
    if (confidence_threshold < 0 || confidence_threshold > 1)
        throw std::invalid_argument("confidence threshold must be in [0,1]");
    if (frame_cap < 1) throw std::invalid_argument("frame cap must be at least 1");
    if (splat_radius < 1) throw std::invalid_argument("splat radius must be at least 1");
    if (stride < 1) throw std::invalid_argument("stride must be at least 1");
    if (ssim_window < 1 || ssim_window % 2 == 0)
        throw std::invalid_argument("ssim window must be odd");
}

ExploreConfig RunConfig::explore_config() const {
    ExploreConfig e;
    e.clip_len = clip_len;
    e.retrieval_radius = retrieval_radius;
    e.raster = raster_config();
    e.memory = memory_config();
    return e;
}

RasterConfig RunConfig::raster_config() const {
    RasterConfig r;
    r.splat_radius = splat_radius;
    return r;
}

MemoryConfig RunConfig::memory_config() const {
    MemoryConfig m;
    m.confidence_threshold = confidence_threshold;
    m.frame_cap = frame_cap;
    m.grid_cell = retrieval_radius > 0 ? retrieval_radius : 10.0;
    return m;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open config file " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("malformed config " + path + ": " + e.what());
    }
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("width", base.width);
    get("height", base.height);
    get("clip_len", base.clip_len);
    get("confidence_threshold", base.confidence_threshold);
    get("frame_cap", base.frame_cap);
    get("retrieval_radius", base.retrieval_radius);
    get("splat_radius", base.splat_radius);
    get("stride", base.stride);
    get("psnr_cap", base.psnr_cap);
    get("ssim_window", base.ssim_window);
    get("seed", base.seed);
    get("letterbox", base.letterbox);
    return base;
}

void apply_env_overrides(RunConfig& cfg) {
    auto env_int = [](const char* name, auto& field) {
        if (const char* v = std::getenv(name)) field = static_cast<std::decay_t<decltype(field)>>(std::stoll(v));
    };
    auto env_double = [](const char* name, double& field) {
        if (const char* v = std::getenv(name)) field = std::stod(v);
    };
    env_int("PANOMEM_WIDTH", cfg.width);
    env_int("PANOMEM_HEIGHT", cfg.height);
    env_int("PANOMEM_CLIP_LEN", cfg.clip_len);
    env_double("PANOMEM_CONFIDENCE_THRESHOLD", cfg.confidence_threshold);
    env_int("PANOMEM_FRAME_CAP", cfg.frame_cap);
    env_double("PANOMEM_RETRIEVAL_RADIUS", cfg.retrieval_radius);
    env_int("PANOMEM_SPLAT_RADIUS", cfg.splat_radius);
    env_int("PANOMEM_STRIDE", cfg.stride);
    env_double("PANOMEM_PSNR_CAP", cfg.psnr_cap);
    env_int("PANOMEM_SSIM_WINDOW", cfg.ssim_window);
    env_int("PANOMEM_SEED", cfg.seed);
    if (const char* v = std::getenv("PANOMEM_LETTERBOX"))
        cfg.letterbox = std::string(v) == "1" || std::string(v) == "true";
}

}  // namespace panomem
