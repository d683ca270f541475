#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Geometry>

// Camera pose representation, convention conversion, similarity alignment
// and pose-accuracy metrics.
//
// Two pose conventions are supported:
//   - CameraToWorldGl: the stored (q, pos) map camera-frame points to world,
//     x_world = R(q) x_cam + pos.  pos is the camera center.  This is the
//     engine's working convention; panoramic rays use the camera frame
//     directly (forward = +z at identity).
//   - WorldToCameraCv: the stored (q, pos) are the OpenCV-style extrinsic,
//     x_cam = R(q) x_world + pos.  Conversion between the two inverts the
//     transform and flips the y/z camera axes (OpenCV: x right, y down,
//     z forward; OpenGL: x right, y up, z backward).

namespace panomem {

enum class Convention { WorldToCameraCv, CameraToWorldGl };

struct CameraPose {
    Eigen::Vector3d pos = Eigen::Vector3d::Zero();
    Eigen::Quaterniond quat = Eigen::Quaterniond::Identity();  // (w, x, y, z)
    Convention convention = Convention::CameraToWorldGl;

    CameraPose() = default;
    CameraPose(const Eigen::Vector3d& p, const Eigen::Quaterniond& q,
               Convention c = Convention::CameraToWorldGl)
        : pos(p), quat(q.normalized()), convention(c) {}

    // Camera center in world coordinates, convention-independent.
    Eigen::Vector3d center() const;
    // Rotation mapping camera-frame directions to world (GL reading).
    Eigen::Quaterniond world_rotation() const;
};

struct SimilarityTransform {
    double scale = 1.0;
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();

    Eigen::Vector3d apply(const Eigen::Vector3d& x) const {
        return scale * (rotation * x) + translation;
    }
    SimilarityTransform compose(const SimilarityTransform& inner) const;
    SimilarityTransform inverse() const;
};

struct PoseErrors {
    std::vector<double> rra;  // degrees, per frame pair
    std::vector<double> rta;  // degrees, per frame pair
};

struct DegenerateConfiguration : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Express the same physical camera in the target convention.  Converting to
// the current convention is the identity; the two-way conversion is an
// involution.
CameraPose convert_convention(const CameraPose& p, Convention target);

// Closed-form least-squares similarity: argmin sum |dst_i - (s R src_i + t)|^2.
// Throws DegenerateConfiguration for N < 3 or rank-deficient point sets.
SimilarityTransform umeyama_align(const std::vector<Eigen::Vector3d>& src,
                                  const std::vector<Eigen::Vector3d>& dst,
                                  bool with_scale = true);

std::vector<Eigen::Vector3d> apply_similarity(const SimilarityTransform& t,
                                              const std::vector<Eigen::Vector3d>& pts);

// Geodesic angle between the two orientations, degrees in [0, 180].
// Both poses must carry the same convention.
double relative_rotation_error(const CameraPose& a, const CameraPose& b);

// Angle between the two position vectors read as directions, degrees.
// Throws std::invalid_argument when either vector is (near) zero.
double relative_translation_error(const CameraPose& a, const CameraPose& b);

// Anchor-relative pose errors: pair i compares the relative pose
// (frame 0 -> frame i) of the estimate against the ground truth.
PoseErrors pose_errors(const std::vector<CameraPose>& est,
                       const std::vector<CameraPose>& gt);

// Per-threshold accuracy counts a pair correct when both errors are <= tau
// (min over the per-metric accuracies).  MinOverErrors is the literal
// alternative reading, kept behind the flag.
enum class AucCombine { BothWithin, MinOverErrors };

double pose_auc(const PoseErrors& errors, double tau_max_deg = 30.0,
                AucCombine combine = AucCombine::BothWithin);

// Yaw-only orientation: rotates +z toward +x by `yaw` radians about +y.
Eigen::Quaterniond yaw_quat(double yaw);

}  // namespace panomem
