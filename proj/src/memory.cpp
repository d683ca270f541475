#include "panomem/memory.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace panomem {

namespace {

// 21 bits per axis, offset to keep keys positive for +-1000 km of extent.
std::int64_t pack_cell(std::int64_t cx, std::int64_t cy, std::int64_t cz) {
    const std::int64_t off = 1 << 20;
    return ((cx + off) << 42) | ((cy + off) << 21) | (cz + off);
}

}  // namespace

std::int64_t PointCloudMemory::cell_key(const Eigen::Vector3d& p) const {
    const double cell = cfg_.grid_cell > 0 ? cfg_.grid_cell : 1.0;
    return pack_cell(static_cast<std::int64_t>(std::floor(p.x() / cell)),
                     static_cast<std::int64_t>(std::floor(p.y() / cell)),
                     static_cast<std::int64_t>(std::floor(p.z() / cell)));
}

std::size_t PointCloudMemory::insert_frame(int frame_id, const CameraPose& pose,
                                           std::vector<MemPoint> points) {
    if (frames_.count(frame_id))
        throw FrameConflict("frame id " + std::to_string(frame_id) + " already present");

    Frame f;
    f.pose = pose;
    f.points.reserve(points.size());
    std::size_t dropped = 0;
    for (auto& p : points) {
        if (p.confidence < cfg_.confidence_threshold) {
            ++dropped;
            continue;
        }
        p.frame_id = frame_id;
        f.points.push_back(p);
    }
    total_points_ += f.points.size();
    grid_[cell_key(pose.center())].push_back(frame_id);
    frames_.emplace(frame_id, std::move(f));
    return dropped;
}

std::vector<int> PointCloudMemory::retrieve_local(const CameraPose& query,
                                                  double radius) const {
    if (frames_.empty() || radius < 0) return {};
    const Eigen::Vector3d q = query.center();
    const double cell = cfg_.grid_cell > 0 ? cfg_.grid_cell : 1.0;
    const int reach = static_cast<int>(std::ceil(radius / cell));

    std::vector<std::pair<double, int>> hits;  // (distance, frame_id)
    const std::int64_t cx = static_cast<std::int64_t>(std::floor(q.x() / cell));
    const std::int64_t cy = static_cast<std::int64_t>(std::floor(q.y() / cell));
    const std::int64_t cz = static_cast<std::int64_t>(std::floor(q.z() / cell));
    for (int dx = -reach; dx <= reach; ++dx)
        for (int dy = -reach; dy <= reach; ++dy)
            for (int dz = -reach; dz <= reach; ++dz) {
                auto it = grid_.find(pack_cell(cx + dx, cy + dy, cz + dz));
                if (it == grid_.end()) continue;
                for (int id : it->second) {
                    const double d = (frames_.at(id).pose.center() - q).norm();
                    if (d <= radius) hits.emplace_back(d, id);
                }
            }

    std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second < b.second;
    });
    if (static_cast<int>(hits.size()) > cfg_.frame_cap) hits.resize(cfg_.frame_cap);

    std::vector<int> ids;
    ids.reserve(hits.size());
    for (const auto& h : hits) ids.push_back(h.second);
    return ids;
}

std::vector<MemPoint> PointCloudMemory::gather_points(const std::vector<int>& frame_ids) const {
    std::vector<int> sorted(frame_ids);
    std::sort(sorted.begin(), sorted.end());
    std::size_t total = 0;
    for (int id : sorted) {
        auto it = frames_.find(id);
        if (it == frames_.end())
            throw FrameNotFound("unknown frame id " + std::to_string(id));
        total += it->second.points.size();
    }
    std::vector<MemPoint> out;
    out.reserve(total);
    for (int id : sorted) {
        const auto& pts = frames_.at(id).points;
        out.insert(out.end(), pts.begin(), pts.end());
    }
    peak_context_points_ = std::max(peak_context_points_, out.size());
    return out;
}

const CameraPose& PointCloudMemory::frame_pose(int frame_id) const {
    auto it = frames_.find(frame_id);
    if (it == frames_.end()) throw FrameNotFound("unknown frame id " + std::to_string(frame_id));
    return it->second.pose;
}

const std::vector<MemPoint>& PointCloudMemory::frame_points(int frame_id) const {
    auto it = frames_.find(frame_id);
    if (it == frames_.end()) throw FrameNotFound("unknown frame id " + std::to_string(frame_id));
    return it->second.points;
}

std::vector<int> PointCloudMemory::frame_ids() const {
    std::vector<int> ids;
    ids.reserve(frames_.size());
    for (const auto& [id, _] : frames_) ids.push_back(id);
    return ids;
}

void update_memory(PointCloudMemory& mem,
                   const std::vector<EquirectImage>& clip_frames,
                   const std::vector<CameraPose>& clip_poses,
                   const std::vector<int>& clip_frame_ids,
                   ReconstructorContract& reconstructor,
                   double retrieval_radius,
                   const FrameArchive& archive) {
    if (clip_frames.size() != clip_poses.size() || clip_frames.size() != clip_frame_ids.size())
        throw std::invalid_argument("clip frames / poses / ids length mismatch");
    if (clip_frames.empty()) return;

    // Locality context around the clip's entry pose.
    std::vector<EquirectImage> frames;
    std::vector<CameraPose> poses;
    std::vector<int> ids;
    if (archive) {
        for (int id : mem.retrieve_local(clip_poses.front(), retrieval_radius)) {
            const EquirectImage* img = archive(id);
            if (!img) continue;
            frames.push_back(*img);
            poses.push_back(mem.frame_pose(id));
            ids.push_back(id);
        }
    }
    const std::size_t context_count = frames.size();
    frames.insert(frames.end(), clip_frames.begin(), clip_frames.end());
    poses.insert(poses.end(), clip_poses.begin(), clip_poses.end());
    ids.insert(ids.end(), clip_frame_ids.begin(), clip_frame_ids.end());

    ReconstructorContract::Result rec;
    try {
        rec = reconstructor.reconstruct(frames, poses);
    } catch (const std::exception& e) {
        throw std::runtime_error("reconstructor failed on clip starting at frame " +
                                 std::to_string(clip_frame_ids.front()) + ": " + e.what());
    }
    if (rec.points.size() != frames.size() || rec.est_poses.size() != frames.size())
        throw std::runtime_error("reconstructor output length mismatch");

    // Align the estimated poses to the given ones before insertion.
    std::vector<Eigen::Vector3d> est_centers, given_centers;
    est_centers.reserve(frames.size());
    given_centers.reserve(frames.size());
    double max_dev = 0.0;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        const CameraPose est = convert_convention(rec.est_poses[i], Convention::CameraToWorldGl);
        est_centers.push_back(est.center());
        given_centers.push_back(poses[i].center());
        max_dev = std::max(max_dev, (est_centers.back() - given_centers.back()).norm());
    }

    SimilarityTransform align;  // identity when the estimates already agree
    if (max_dev > 1e-12 && frames.size() >= 3) {
        align = umeyama_align(est_centers, given_centers, true);
    } else if (max_dev > 1e-12) {
        // Too few frames for a similarity fit; fall back to the translation
        // between centroids.
        Eigen::Vector3d mu_e = Eigen::Vector3d::Zero(), mu_g = Eigen::Vector3d::Zero();
        for (std::size_t i = 0; i < est_centers.size(); ++i) {
            mu_e += est_centers[i];
            mu_g += given_centers[i];
        }
        align.translation = (mu_g - mu_e) / static_cast<double>(est_centers.size());
    }

    for (std::size_t i = context_count; i < frames.size(); ++i) {
        std::vector<MemPoint> pts = std::move(rec.points[i]);
        if (!(align.scale == 1.0 && align.rotation.isIdentity(0.0) &&
              align.translation.isZero(0.0))) {
            for (auto& p : pts) {
                const Eigen::Vector3d q = align.apply(p.xyz());
                p.x = static_cast<float>(q.x());
                p.y = static_cast<float>(q.y());
                p.z = static_cast<float>(q.z());
            }
        }
        mem.insert_frame(ids[i], poses[i], std::move(pts));
    }
}

}  // namespace panomem
