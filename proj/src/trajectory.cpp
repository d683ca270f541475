#include "panomem/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace panomem {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDegToRad = kPi / 180.0;

double wrap_angle(double a) {
    double w = std::fmod(a + kPi, 2.0 * kPi);
    if (w < 0) w += 2.0 * kPi;
    return w - kPi;
}

// Facing directions live in the xz-plane; yaw 0 looks along +z.
Eigen::Vector3d heading_dir(double yaw) { return {std::sin(yaw), 0.0, std::cos(yaw)}; }

void assign_forward_orientations(std::vector<CameraPose>& poses) {
    for (std::size_t k = 0; k + 1 < poses.size(); ++k) {
        const Eigen::Vector3d d = poses[k + 1].pos - poses[k].pos;
        if (std::hypot(d.x(), d.z()) < 1e-15) {
            poses[k].quat = k > 0 ? poses[k - 1].quat : Eigen::Quaterniond::Identity();
        } else {
            poses[k].quat = yaw_quat(std::atan2(d.x(), d.z()));
        }
        poses[k].convention = Convention::CameraToWorldGl;
    }
    if (poses.size() >= 2) {
        poses.back().quat = poses[poses.size() - 2].quat;
        poses.back().convention = Convention::CameraToWorldGl;
    }
}

}  // namespace

Trajectory gen_polyline_loop(double length, double step, std::uint64_t seed, double height) {
    if (!(step > 0) || !(length >= 4.0 * step))
        throw std::invalid_argument("polyline loop needs length >= 4*step and positive step");
    const int n_seg = static_cast<int>(std::lround(length / step));

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u_heading(-kPi, kPi);
    std::uniform_real_distribution<double> u_turn(-60.0 * kDegToRad, 60.0 * kDegToRad);

    Trajectory traj;
    traj.step = step;
    traj.kind = TrajectoryKind::PolylineLoop;
    traj.seed = seed;

    const Eigen::Vector3d start(0.0, height, 0.0);
    Eigen::Vector3d cur = start;
    double yaw = u_heading(rng);
    traj.poses.emplace_back(cur, Eigen::Quaterniond::Identity());

    for (int k = 0; k < n_seg; ++k) {
        const double remaining = (n_seg - k) * step;
        const double dist_home = (cur - start).norm();
        const double home_yaw =
            dist_home > 1e-12 ? std::atan2(start.x() - cur.x(), start.z() - cur.z()) : yaw;

        if (remaining - dist_home <= 2.0 * step) {
            yaw = home_yaw;  // out of slack: walk straight back
        } else {
            yaw = wrap_angle(yaw + u_turn(rng));
            const double frac = static_cast<double>(k) / n_seg;
            if (frac >= 0.7) {
                const double w = 0.8 * (frac - 0.7) / 0.3;
                yaw = wrap_angle(yaw + w * wrap_angle(home_yaw - yaw));
            }
        }
        cur += step * heading_dir(yaw);
        traj.poses.emplace_back(cur, Eigen::Quaterniond::Identity());
    }

    assign_forward_orientations(traj.poses);
    return traj;
}

namespace {

// Centripetal Catmull-Rom (Barry-Goldman) over one segment P1->P2.
Eigen::Vector3d barry_goldman(const Eigen::Vector3d& p0, const Eigen::Vector3d& p1,
                              const Eigen::Vector3d& p2, const Eigen::Vector3d& p3, double t) {
    auto knot = [](double prev, const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
        return prev + std::sqrt((b - a).norm());
    };
    const double t0 = 0.0;
    const double t1 = knot(t0, p0, p1);
    const double t2 = knot(t1, p1, p2);
    const double t3 = knot(t2, p2, p3);
    const double s = t1 + t * (t2 - t1);

    auto lerp = [](const Eigen::Vector3d& a, const Eigen::Vector3d& b, double ta, double tb,
                   double s) -> Eigen::Vector3d {
        if (tb - ta < 1e-14) return a;
        const double w = (s - ta) / (tb - ta);
        return (1.0 - w) * a + w * b;
    };
    const Eigen::Vector3d a1 = lerp(p0, p1, t0, t1, s);
    const Eigen::Vector3d a2 = lerp(p1, p2, t1, t2, s);
    const Eigen::Vector3d a3 = lerp(p2, p3, t2, t3, s);
    const Eigen::Vector3d b1 = lerp(a1, a2, t0, t2, s);
    const Eigen::Vector3d b2 = lerp(a2, a3, t1, t3, s);
    return lerp(b1, b2, t1, t2, s);
}

}  // namespace

Eigen::Vector3d catmull_rom_eval(const std::vector<Eigen::Vector3d>& control, int segment,
                                 double t) {
    if (control.size() < 4) throw std::invalid_argument("need at least 4 control points");
    if (segment < 0 || segment + 3 >= static_cast<int>(control.size()))
        throw std::invalid_argument("segment out of range");
    return barry_goldman(control[segment], control[segment + 1], control[segment + 2],
                         control[segment + 3], std::clamp(t, 0.0, 1.0));
}

Trajectory catmull_rom(const std::vector<Eigen::Vector3d>& control, double step) {
    if (control.size() < 4) throw std::invalid_argument("need at least 4 control points");
    if (!(step > 0)) throw std::invalid_argument("step must be positive");
    for (std::size_t i = 0; i + 1 < control.size(); ++i)
        if ((control[i + 1] - control[i]).norm() < 1e-12)
            throw std::invalid_argument("duplicate adjacent control points");

    // Dense evaluation of the interior segments.
    std::vector<Eigen::Vector3d> dense;
    const int n_seg = static_cast<int>(control.size()) - 3;
    for (int s = 0; s < n_seg; ++s) {
        const double seg_len = (control[s + 2] - control[s + 1]).norm();
        const int m = std::max(32, static_cast<int>(std::ceil(seg_len / step * 64.0)));
        const int start = s == 0 ? 0 : 1;  // shared knot emitted once
        for (int i = start; i <= m; ++i)
            dense.push_back(catmull_rom_eval(control, s, static_cast<double>(i) / m));
    }

    // Chordal walk: emit a pose whenever the Euclidean distance from the
    // previously emitted pose reaches exactly `step`.
    Trajectory traj;
    traj.step = step;
    traj.kind = TrajectoryKind::Curve;
    traj.poses.emplace_back(dense.front(), Eigen::Quaterniond::Identity());
    Eigen::Vector3d last = dense.front();
    for (std::size_t i = 0; i + 1 < dense.size();) {
        if ((dense[i + 1] - last).norm() < step) {
            ++i;
            continue;
        }
        // Bisect s in [0,1] on the dense segment for |a + s(b-a) - last| = step.
        const Eigen::Vector3d a = dense[i], b = dense[i + 1];
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            ((a + mid * (b - a) - last).norm() < step ? lo : hi) = mid;
        }
        last = a + 0.5 * (lo + hi) * (b - a);
        traj.poses.emplace_back(last, Eigen::Quaterniond::Identity());
        dense[i] = last;  // continue the walk from the emitted point
    }

    if (traj.poses.size() < 2) throw std::invalid_argument("step larger than the whole curve");
    assign_forward_orientations(traj.poses);
    return traj;
}

Trajectory action_walk(const std::vector<Action>& actions, const CameraPose& start) {
    Trajectory traj;
    traj.kind = TrajectoryKind::ActionWalk;

    CameraPose cur = convert_convention(start, Convention::CameraToWorldGl);
    traj.poses.push_back(cur);
    for (const Action& a : actions) {
        if (a.kind == Action::Kind::Forward) {
            if (!(a.magnitude > 0))
                throw std::invalid_argument("forward magnitude must be positive");
            cur.pos += a.magnitude * (cur.quat * Eigen::Vector3d::UnitZ());
            traj.step = a.magnitude;
        } else {
            if (a.magnitude == 0) throw std::invalid_argument("rotate magnitude must be nonzero");
            cur.quat = (yaw_quat(a.magnitude * kDegToRad) * cur.quat).normalized();
        }
        traj.poses.push_back(cur);
    }
    return traj;
}

std::vector<std::vector<CameraPose>> clip_targets(const Trajectory& traj, int clip_len,
                                                  int overlap) {
    if (clip_len < 2) throw std::invalid_argument("clip length must be at least 2");
    if (overlap < 1 || overlap >= clip_len)
        throw std::invalid_argument("overlap must be in [1, clip_len)");
    const int n = static_cast<int>(traj.poses.size());
    if (n < clip_len) throw std::invalid_argument("trajectory shorter than one clip");

    std::vector<std::vector<CameraPose>> windows;
    const int stride = clip_len - overlap;
    int start = 0;
    while (true) {
        const int end = std::min(start + clip_len, n);
        windows.emplace_back(traj.poses.begin() + start, traj.poses.begin() + end);
        if (end >= n) break;
        start += stride;
    }
    return windows;
}

}  // namespace panomem
