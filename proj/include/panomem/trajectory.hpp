#pragma once

#include <cstdint>
#include <vector>

#include "panomem/geometry.hpp"

// Trajectory and action tooling: looped random polylines, Catmull-Rom
// smoothed curves, and step-wise action walks.  Trajectories are planar
// (constant height) with yaw-only orientations facing the direction of
// travel; the final pose copies the previous orientation.

namespace panomem {

struct Action {
    enum class Kind { Forward, Rotate };
    Kind kind = Kind::Forward;
    double magnitude = 0.4;  // meters for Forward, degrees for Rotate

    static Action forward(double meters = 0.4) { return {Kind::Forward, meters}; }
    static Action rotate(double degrees = 22.5) { return {Kind::Rotate, degrees}; }
};

enum class TrajectoryKind { PolylineLoop, Curve, ActionWalk };

struct Trajectory {
    std::vector<CameraPose> poses;
    double step = 0.4;
    TrajectoryKind kind = TrajectoryKind::PolylineLoop;
    std::uint64_t seed = 0;
};

// Random-turn closed polyline: total arc length equals `length` within one
// step, the end lands within one step of the start.  Turns are uniform in
// +-60 degrees with a homing bias after 70% of the budget.
Trajectory gen_polyline_loop(double length, double step, std::uint64_t seed,
                             double height = 1.5);

// Centripetal Catmull-Rom spline through the interior control points,
// resampled so consecutive poses are exactly `step` apart (chordal walk
// along the densely evaluated curve).
Trajectory catmull_rom(const std::vector<Eigen::Vector3d>& control, double step);

// Evaluate the centripetal spline itself at interior knot s in [0, 1]
// (test hook for the interpolation property).
Eigen::Vector3d catmull_rom_eval(const std::vector<Eigen::Vector3d>& control,
                                 int segment, double t);

// Folds actions from `start`: Forward translates along the current facing,
// Rotate yaws in place (positive degrees turn from +z toward +x).
Trajectory action_walk(const std::vector<Action>& actions, const CameraPose& start);

// Clip windows of `clip_len` poses; each window's first pose is the
// previous window's last (the recursion overlap).  The final window may be
// short when the trajectory length is not aligned.
std::vector<std::vector<CameraPose>> clip_targets(const Trajectory& traj, int clip_len,
                                                  int overlap = 1);

}  // namespace panomem
