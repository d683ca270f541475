#include "panomem/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace panomem {

namespace {

constexpr double kRadToDeg = 180.0 / 3.14159265358979323846;

// 180-degree rotation about x: flips the y/z camera axes between the
// OpenCV (y down, z forward) and OpenGL (y up, z backward) frames.
const Eigen::Quaterniond& axis_flip() {
    static const Eigen::Quaterniond f(0.0, 1.0, 0.0, 0.0);
    return f;
}

double quat_angle_deg(const Eigen::Quaterniond& a, const Eigen::Quaterniond& b) {
    const double d = std::clamp(std::abs(a.coeffs().dot(b.coeffs())), 0.0, 1.0);
    return 2.0 * std::acos(d) * kRadToDeg;
}

double vector_angle_deg(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
    return std::atan2(a.cross(b).norm(), a.dot(b)) * kRadToDeg;
}

}  // namespace

Eigen::Vector3d CameraPose::center() const {
    if (convention == Convention::CameraToWorldGl) return pos;
    return -(quat.conjugate() * pos);
}

Eigen::Quaterniond CameraPose::world_rotation() const {
    if (convention == Convention::CameraToWorldGl) return quat;
    return quat.conjugate() * axis_flip();
}

SimilarityTransform SimilarityTransform::compose(const SimilarityTransform& inner) const {
    SimilarityTransform out;
    out.scale = scale * inner.scale;
    out.rotation = rotation * inner.rotation;
    out.translation = scale * (rotation * inner.translation) + translation;
    return out;
}

SimilarityTransform SimilarityTransform::inverse() const {
    SimilarityTransform out;
    out.scale = 1.0 / scale;
    out.rotation = rotation.transpose();
    out.translation = -(out.rotation * translation) / scale;
    return out;
}

CameraPose convert_convention(const CameraPose& p, Convention target) {
    if (p.convention == target) return p;
    CameraPose out;
    out.convention = target;
    if (target == Convention::CameraToWorldGl) {
        // (R, t) world->camera in CV axes -> camera center + GL camera-to-world
        out.quat = (p.quat.conjugate() * axis_flip()).normalized();
        out.pos = -(p.quat.conjugate() * p.pos);
    } else {
        out.quat = (axis_flip() * p.quat.conjugate()).normalized();
        out.pos = -(out.quat * p.pos);
    }
    return out;
}

SimilarityTransform umeyama_align(const std::vector<Eigen::Vector3d>& src,
                                  const std::vector<Eigen::Vector3d>& dst,
                                  bool with_scale) {
    const std::size_t n = src.size();
    if (n != dst.size()) throw std::invalid_argument("point count mismatch");
    if (n < 3) throw DegenerateConfiguration("umeyama needs at least 3 points");

    Eigen::Vector3d mu_s = Eigen::Vector3d::Zero();
    Eigen::Vector3d mu_d = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i < n; ++i) {
        mu_s += src[i];
        mu_d += dst[i];
    }
    mu_s /= static_cast<double>(n);
    mu_d /= static_cast<double>(n);

    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    double var_s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Eigen::Vector3d s = src[i] - mu_s;
        const Eigen::Vector3d d = dst[i] - mu_d;
        cov += d * s.transpose();
        var_s += s.squaredNorm();
    }
    cov /= static_cast<double>(n);
    var_s /= static_cast<double>(n);
    if (var_s <= 0.0) throw DegenerateConfiguration("source points are coincident");

    Eigen::JacobiSVD<Eigen::Matrix3d> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::Vector3d sv = svd.singularValues();
    if (!(sv(0) > 0.0) || sv(1) <= 1e-9 * sv(0))
        throw DegenerateConfiguration("rank-deficient (collinear) configuration");

    Eigen::Vector3d sgn = Eigen::Vector3d::Ones();
    if (svd.matrixU().determinant() * svd.matrixV().determinant() < 0.0) sgn(2) = -1.0;

    SimilarityTransform t;
    t.rotation = svd.matrixU() * sgn.asDiagonal() * svd.matrixV().transpose();
    t.scale = with_scale ? sv.dot(sgn) / var_s : 1.0;
    if (!(t.scale > 0.0)) throw DegenerateConfiguration("non-positive recovered scale");
    t.translation = mu_d - t.scale * (t.rotation * mu_s);
    return t;
}

std::vector<Eigen::Vector3d> apply_similarity(const SimilarityTransform& t,
                                              const std::vector<Eigen::Vector3d>& pts) {
    std::vector<Eigen::Vector3d> out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.push_back(t.apply(p));
    return out;
}

double relative_rotation_error(const CameraPose& a, const CameraPose& b) {
    if (a.convention != b.convention)
        throw std::invalid_argument("poses must share a convention");
    return quat_angle_deg(a.quat.normalized(), b.quat.normalized());
}

double relative_translation_error(const CameraPose& a, const CameraPose& b) {
    const double na = a.pos.norm();
    const double nb = b.pos.norm();
    if (na < 1e-12 || nb < 1e-12)
        throw std::invalid_argument("undefined direction: zero-length translation");
    return vector_angle_deg(a.pos, b.pos);
}

PoseErrors pose_errors(const std::vector<CameraPose>& est, const std::vector<CameraPose>& gt) {
    if (est.size() != gt.size()) throw std::invalid_argument("pose count mismatch");
    if (est.size() < 2) throw std::invalid_argument("need at least two poses");

    std::vector<CameraPose> e, g;
    e.reserve(est.size());
    g.reserve(gt.size());
    for (const auto& p : est) e.push_back(convert_convention(p, Convention::CameraToWorldGl));
    for (const auto& p : gt) g.push_back(convert_convention(p, Convention::CameraToWorldGl));

    PoseErrors errs;
    for (std::size_t i = 1; i < e.size(); ++i) {
        const Eigen::Quaterniond rel_e = e[0].quat.conjugate() * e[i].quat;
        const Eigen::Quaterniond rel_g = g[0].quat.conjugate() * g[i].quat;
        errs.rra.push_back(quat_angle_deg(rel_e.normalized(), rel_g.normalized()));

        const Eigen::Vector3d te = e[0].quat.conjugate() * (e[i].pos - e[0].pos);
        const Eigen::Vector3d tg = g[0].quat.conjugate() * (g[i].pos - g[0].pos);
        const bool ze = te.norm() < 1e-12;
        const bool zg = tg.norm() < 1e-12;
        if (ze && zg)
            errs.rta.push_back(0.0);  // both stationary relative to the anchor
        else if (ze || zg)
            errs.rta.push_back(180.0);
        else
            errs.rta.push_back(vector_angle_deg(te, tg));
    }
    return errs;
}

double pose_auc(const PoseErrors& errors, double tau_max_deg, AucCombine combine) {
    if (errors.rra.empty() || errors.rra.size() != errors.rta.size())
        throw std::invalid_argument("empty or mismatched pose errors");
    if (!(tau_max_deg > 0.0)) throw std::invalid_argument("tau_max must be positive");

    // Exact area under the step accuracy curve: each pair contributes the
    // fraction of thresholds it passes, (tau_max - e) / tau_max for e <= tau_max.
    double acc = 0.0;
    for (std::size_t i = 0; i < errors.rra.size(); ++i) {
        const double e = combine == AucCombine::BothWithin
                             ? std::max(errors.rra[i], errors.rta[i])
                             : std::min(errors.rra[i], errors.rta[i]);
        acc += std::max(0.0, 1.0 - e / tau_max_deg);
    }
    return acc / static_cast<double>(errors.rra.size());
}

Eigen::Quaterniond yaw_quat(double yaw) {
    return Eigen::Quaterniond(Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitY()));
}

}  // namespace panomem
