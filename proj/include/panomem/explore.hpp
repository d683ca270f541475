#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "panomem/memory.hpp"
#include "panomem/raster.hpp"
#include "panomem/trajectory.hpp"

// The evolve-generate-reconstruct loop: iterate world transition ->
// generation -> memory update over clip windows, with pluggable generator
// and reconstructor contracts.  Oracle and baseline implementations make
// the loop verifiable against a synthetic scene without any neural model.

namespace panomem {

class GeneratorContract {
  public:
    virtual ~GeneratorContract() = default;
    // Output length must equal the target pose count; dimensions match the
    // conditioning frame.
    virtual std::vector<EquirectImage> produce(
        const EquirectImage& last_frame, const std::vector<CameraPose>& target_poses,
        const std::vector<Reprojection>& reprojections,
        const std::vector<PluckerField>& plucker) = 0;
    virtual std::string name() const = 0;
};

struct ExploreConfig {
    int clip_len = 25;              // S + 1 frames per window
    double retrieval_radius = 10.0; // locality radius for context frames
    RasterConfig raster;
    MemoryConfig memory;
    bool keep_reprojections = true;
    bool build_plucker = true;
};

struct ExplorationRun {
    EquirectImage x0;
    std::vector<std::vector<EquirectImage>> clips;        // x_1..x_T
    std::vector<std::vector<Reprojection>> reprojections; // r_1..r_T
    std::vector<std::vector<int>> frame_ids;              // global ids per window
    std::vector<std::size_t> memory_points_after;
    PointCloudMemory memory;
};

// Algorithm-1 analog: step 1 runs against an empty memory (all-false
// reprojection masks); each clip's first frame is the previous clip's last
// frame, bit-exact by construction.
ExplorationRun explore(const EquirectImage& x0, const Trajectory& traj,
                       GeneratorContract& gen, ReconstructorContract& rec,
                       const ExploreConfig& cfg);

// Renders the hidden ground-truth scene at each target pose, with optional
// Gaussian pixel noise; ignores the reprojections entirely.
std::unique_ptr<GeneratorContract> oracle_generator(std::vector<MemPoint> hidden_scene,
                                                    double noise_sigma = 0.0,
                                                    std::uint64_t seed = 0,
                                                    const RasterConfig& raster = {});

// Repeats the conditioning frame at every target (plus optional noise); the
// memory-less drifting baseline whose errors compound across clips.
std::unique_ptr<GeneratorContract> last_frame_generator(double noise_sigma = 0.0,
                                                        std::uint64_t seed = 0);

// Returns the reprojection colors as-is, holes filled with the raster
// background (plus optional noise).
std::unique_ptr<GeneratorContract> reprojection_generator(double noise_sigma = 0.0,
                                                          std::uint64_t seed = 0);

// Copies reprojected memory wherever the reprojection mask is true and
// defers to the fallback elsewhere; makes the memory's effect measurable
// without a neural generator.
std::unique_ptr<GeneratorContract> memory_conditioned_generator(
    std::shared_ptr<GeneratorContract> fallback);

// Unprojects frame depth into per-frame points; estimated poses are the
// given poses pushed through a configurable similarity (and emitted in the
// chosen convention) so memory updates exercise the alignment path.
std::unique_ptr<ReconstructorContract> oracle_reconstructor(
    int stride = 1, const SimilarityTransform& perturb = {},
    Convention emit_convention = Convention::WorldToCameraCv);

}  // namespace panomem
