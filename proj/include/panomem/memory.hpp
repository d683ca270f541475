#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <unordered_map>
#include <vector>

#include "panomem/geometry.hpp"
#include "panomem/sphere.hpp"

// Explicit 3D memory: confidence-filtered colored points grouped by source
// frame, with locality-aware retrieval capped at a fixed frame count.
//
// Concurrency: retrieval and gathering are read-only and may run from many
// threads at once; insert/update require exclusive access.

namespace panomem {

struct MemPoint {
    float x = 0, y = 0, z = 0;
    float r = 0, g = 0, b = 0;
    float confidence = 1.0f;
    std::int32_t frame_id = -1;

    Eigen::Vector3d xyz() const { return {x, y, z}; }
};

struct FrameNotFound : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FrameConflict : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MemoryConfig {
    double confidence_threshold = 0.5;
    int frame_cap = 99;      // hard cap on retrieved context frames
    double grid_cell = 10.0; // spatial hash cell size, meters
};

class PointCloudMemory {
  public:
    PointCloudMemory() = default;
    explicit PointCloudMemory(const MemoryConfig& cfg) : cfg_(cfg) {}

    // Stores the frame's points that pass the confidence threshold; returns
    // the number of dropped points.  Duplicate frame ids are a conflict.
    std::size_t insert_frame(int frame_id, const CameraPose& pose,
                             std::vector<MemPoint> points);

    // Frames whose camera center lies within `radius` of the query center,
    // nearest first (ties: lower frame id), truncated to the frame cap.
    std::vector<int> retrieve_local(const CameraPose& query, double radius) const;

    // Concatenates the named frames' points in (frame_id, insertion) order.
    std::vector<MemPoint> gather_points(const std::vector<int>& frame_ids) const;

    bool has_frame(int frame_id) const { return frames_.count(frame_id) != 0; }
    const CameraPose& frame_pose(int frame_id) const;
    const std::vector<MemPoint>& frame_points(int frame_id) const;
    std::vector<int> frame_ids() const;

    std::size_t frame_count() const { return frames_.size(); }
    std::size_t total_points() const { return total_points_; }
    std::size_t peak_context_points() const { return peak_context_points_; }

    const MemoryConfig& config() const { return cfg_; }

  private:
    struct Frame {
        CameraPose pose;
        std::vector<MemPoint> points;
    };

    std::int64_t cell_key(const Eigen::Vector3d& p) const;

    MemoryConfig cfg_;
    std::map<int, Frame> frames_;
    std::unordered_map<std::int64_t, std::vector<int>> grid_;
    std::size_t total_points_ = 0;
    mutable std::size_t peak_context_points_ = 0;
};

// Maps posed frames to per-frame point clouds plus estimated poses (which
// may live in a different similarity frame / convention than the inputs).
class ReconstructorContract {
  public:
    struct Result {
        std::vector<std::vector<MemPoint>> points;  // aligned with input order
        std::vector<CameraPose> est_poses;
    };

    virtual ~ReconstructorContract() = default;
    virtual Result reconstruct(const std::vector<EquirectImage>& frames,
                               const std::vector<CameraPose>& poses) = 0;
};

// Provides archived frames for retrieval context; may return nullptr for
// frames whose pixels were not kept.
using FrameArchive = std::function<const EquirectImage*(int frame_id)>;

// Runs the reconstructor on the locality-retrieved context plus the new
// clip, aligns the estimated poses to the given ones (convention conversion
// followed by similarity alignment of camera centers), and inserts the new
// frames' points.
void update_memory(PointCloudMemory& mem,
                   const std::vector<EquirectImage>& clip_frames,
                   const std::vector<CameraPose>& clip_poses,
                   const std::vector<int>& clip_frame_ids,
                   ReconstructorContract& reconstructor,
                   double retrieval_radius = 10.0,
                   const FrameArchive& archive = nullptr);

}  // namespace panomem
