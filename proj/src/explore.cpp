#include "panomem/explore.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "panomem/sphere.hpp"

namespace panomem {

namespace {

void add_noise(EquirectImage& img, double sigma, std::mt19937_64& rng) {
    if (sigma <= 0.0) return;
    std::normal_distribution<double> n(0.0, sigma);
    for (auto& v : img.rgb)
        v = static_cast<float>(std::clamp(static_cast<double>(v) + n(rng), 0.0, 1.0));
}

class OracleGenerator final : public GeneratorContract {
  public:
    OracleGenerator(std::vector<MemPoint> scene, double sigma, std::uint64_t seed,
                    const RasterConfig& raster)
        : scene_(std::move(scene)), sigma_(sigma), rng_(seed), raster_(raster) {}

    std::vector<EquirectImage> produce(const EquirectImage& last_frame,
                                       const std::vector<CameraPose>& targets,
                                       const std::vector<Reprojection>&,
                                       const std::vector<PluckerField>&) override {
        std::vector<EquirectImage> out;
        out.reserve(targets.size());
        for (const auto& pose : targets) {
            Reprojection r =
                render_scene(scene_, pose, last_frame.width, last_frame.height, raster_);
            add_noise(r.image, sigma_, rng_);
            out.push_back(std::move(r.image));
        }
        return out;
    }
    std::string name() const override { return "oracle"; }

  private:
    std::vector<MemPoint> scene_;
    double sigma_;
    std::mt19937_64 rng_;
    RasterConfig raster_;
};

class LastFrameGenerator final : public GeneratorContract {
  public:
    LastFrameGenerator(double sigma, std::uint64_t seed) : sigma_(sigma), rng_(seed) {}

    std::vector<EquirectImage> produce(const EquirectImage& last_frame,
                                       const std::vector<CameraPose>& targets,
                                       const std::vector<Reprojection>&,
                                       const std::vector<PluckerField>&) override {
        std::vector<EquirectImage> out(targets.size(), last_frame);
        for (auto& img : out) add_noise(img, sigma_, rng_);
        return out;
    }
    std::string name() const override { return "last-frame"; }

  private:
    double sigma_;
    std::mt19937_64 rng_;
};

class ReprojectionGenerator final : public GeneratorContract {
  public:
    ReprojectionGenerator(double sigma, std::uint64_t seed) : sigma_(sigma), rng_(seed) {}

    std::vector<EquirectImage> produce(const EquirectImage&,
                                       const std::vector<CameraPose>& targets,
                                       const std::vector<Reprojection>& reprojections,
                                       const std::vector<PluckerField>&) override {
        if (reprojections.size() != targets.size())
            throw std::invalid_argument("reprojection count mismatch");
        std::vector<EquirectImage> out;
        out.reserve(targets.size());
        for (const auto& r : reprojections) {
            EquirectImage img = r.image;  // background already fills the holes
            add_noise(img, sigma_, rng_);
            out.push_back(std::move(img));
        }
        return out;
    }
    std::string name() const override { return "reprojection"; }

  private:
    double sigma_;
    std::mt19937_64 rng_;
};

class MemoryConditionedGenerator final : public GeneratorContract {
  public:
    explicit MemoryConditionedGenerator(std::shared_ptr<GeneratorContract> fallback)
        : fallback_(std::move(fallback)) {
        if (!fallback_) throw std::invalid_argument("fallback generator required");
    }

    std::vector<EquirectImage> produce(const EquirectImage& last_frame,
                                       const std::vector<CameraPose>& targets,
                                       const std::vector<Reprojection>& reprojections,
                                       const std::vector<PluckerField>& plucker) override {
        if (reprojections.size() != targets.size())
            throw std::invalid_argument("reprojection count mismatch");
        std::vector<EquirectImage> out =
            fallback_->produce(last_frame, targets, reprojections, plucker);
        for (std::size_t t = 0; t < out.size(); ++t) {
            EquirectImage& img = out[t];
            const EquirectImage& rp = reprojections[t].image;
            if (!rp.has_mask()) continue;
            if (img.depth.empty()) img.depth.assign(img.pixel_count(), 0.0f);
            if (img.mask.empty()) img.mask.assign(img.pixel_count(), 0);
            for (std::size_t px = 0; px < img.pixel_count(); ++px) {
                if (!rp.mask[px]) continue;
                img.rgb[px * 3 + 0] = rp.rgb[px * 3 + 0];
                img.rgb[px * 3 + 1] = rp.rgb[px * 3 + 1];
                img.rgb[px * 3 + 2] = rp.rgb[px * 3 + 2];
                img.depth[px] = rp.depth[px];
                img.mask[px] = 1;
            }
        }
        return out;
    }
    std::string name() const override { return "memory-conditioned(" + fallback_->name() + ")"; }

  private:
    std::shared_ptr<GeneratorContract> fallback_;
};

class OracleReconstructor final : public ReconstructorContract {
  public:
    OracleReconstructor(int stride, const SimilarityTransform& perturb, Convention emit)
        : stride_(stride), perturb_(perturb), emit_(emit) {}

    Result reconstruct(const std::vector<EquirectImage>& frames,
                       const std::vector<CameraPose>& poses) override {
        if (frames.size() != poses.size())
            throw std::invalid_argument("frame / pose count mismatch");
        Result res;
        res.points.reserve(frames.size());
        res.est_poses.reserve(frames.size());
        const Eigen::Quaterniond pq(perturb_.rotation);
        for (std::size_t i = 0; i < frames.size(); ++i) {
            std::vector<MemPoint> pts = unproject(frames[i], poses[i], stride_);
            for (auto& p : pts) {
                const Eigen::Vector3d q = perturb_.apply(p.xyz());
                p.x = static_cast<float>(q.x());
                p.y = static_cast<float>(q.y());
                p.z = static_cast<float>(q.z());
            }
            res.points.push_back(std::move(pts));

            const CameraPose gl = convert_convention(poses[i], Convention::CameraToWorldGl);
            CameraPose est(perturb_.apply(gl.pos), (pq * gl.quat).normalized(),
                           Convention::CameraToWorldGl);
            res.est_poses.push_back(convert_convention(est, emit_));
        }
        return res;
    }

  private:
    int stride_;
    SimilarityTransform perturb_;
    Convention emit_;
};

}  // namespace

ExplorationRun explore(const EquirectImage& x0, const Trajectory& traj, GeneratorContract& gen,
                       ReconstructorContract& rec, const ExploreConfig& cfg) {
    if (x0.width != 2 * x0.height || x0.height < 1)
        throw std::invalid_argument("initial frame must be a 2:1 panorama");
    const auto windows = clip_targets(traj, cfg.clip_len, 1);

    ExplorationRun run;
    run.x0 = x0;
    run.memory = PointCloudMemory(cfg.memory);

    std::unordered_map<int, EquirectImage> archive_store;
    FrameArchive archive = [&archive_store](int id) -> const EquirectImage* {
        auto it = archive_store.find(id);
        return it == archive_store.end() ? nullptr : &it->second;
    };

    EquirectImage prev_last = x0;
    int window_start = 0;
    for (std::size_t t = 0; t < windows.size(); ++t) {
        const std::vector<CameraPose>& poses = windows[t];

        // World transition: reproject the current memory onto every target.
        std::vector<Reprojection> reprojections;
        reprojections.reserve(poses.size());
        std::vector<int> cached_ids;
        std::vector<MemPoint> cached_pts;
        for (const auto& pose : poses) {
            std::vector<int> ids = run.memory.retrieve_local(pose, cfg.retrieval_radius);
            if (ids != cached_ids) {
                cached_pts = run.memory.gather_points(ids);
                cached_ids = std::move(ids);
            }
            reprojections.push_back(
                reproject(cached_pts, pose, x0.width, x0.height, cfg.raster));
        }

        std::vector<PluckerField> plucker;
        if (cfg.build_plucker) plucker = plucker_field(poses, x0.width, x0.height);

        std::vector<EquirectImage> frames;
        try {
            frames = gen.produce(prev_last, poses, reprojections, plucker);
        } catch (const std::exception& e) {
            throw std::runtime_error("generator failed at step " + std::to_string(t + 1) + ": " +
                                     e.what());
        }
        if (frames.size() != poses.size())
            throw std::runtime_error("generator output length mismatch at step " +
                                     std::to_string(t + 1));
        frames[0] = prev_last;  // x_{t}^0 := x_{t-1}^S, exact by construction

        std::vector<int> ids(poses.size());
        for (std::size_t i = 0; i < poses.size(); ++i)
            ids[i] = window_start + static_cast<int>(i);

        // Memory base update with the frames this window introduced.
        const std::size_t skip = t == 0 ? 0 : 1;
        std::vector<EquirectImage> new_frames(frames.begin() + skip, frames.end());
        std::vector<CameraPose> new_poses(poses.begin() + skip, poses.end());
        std::vector<int> new_ids(ids.begin() + skip, ids.end());
        try {
            update_memory(run.memory, new_frames, new_poses, new_ids, rec,
                          cfg.retrieval_radius, archive);
        } catch (const std::exception& e) {
            throw std::runtime_error("memory update failed at step " + std::to_string(t + 1) +
                                     ": " + e.what());
        }
        for (std::size_t i = 0; i < frames.size(); ++i)
            archive_store.emplace(ids[i], frames[i]);

        prev_last = frames.back();
        run.frame_ids.push_back(std::move(ids));
        run.clips.push_back(std::move(frames));
        if (cfg.keep_reprojections) run.reprojections.push_back(std::move(reprojections));
        run.memory_points_after.push_back(run.memory.total_points());
        window_start += static_cast<int>(poses.size()) - 1;
    }
    return run;
}

std::unique_ptr<GeneratorContract> oracle_generator(std::vector<MemPoint> hidden_scene,
                                                    double noise_sigma, std::uint64_t seed,
                                                    const RasterConfig& raster) {
    return std::make_unique<OracleGenerator>(std::move(hidden_scene), noise_sigma, seed, raster);
}

std::unique_ptr<GeneratorContract> last_frame_generator(double noise_sigma, std::uint64_t seed) {
    return std::make_unique<LastFrameGenerator>(noise_sigma, seed);
}

std::unique_ptr<GeneratorContract> reprojection_generator(double noise_sigma,
                                                          std::uint64_t seed) {
    return std::make_unique<ReprojectionGenerator>(noise_sigma, seed);
}

std::unique_ptr<GeneratorContract> memory_conditioned_generator(
    std::shared_ptr<GeneratorContract> fallback) {
    return std::make_unique<MemoryConditionedGenerator>(std::move(fallback));
}

std::unique_ptr<ReconstructorContract> oracle_reconstructor(int stride,
                                                            const SimilarityTransform& perturb,
                                                            Convention emit_convention) {
    return std::make_unique<OracleReconstructor>(stride, perturb, emit_convention);
}

}  // namespace panomem
