#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "panomem/trajectory.hpp"

using namespace panomem;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("polyline loop pose counts match the protocol arithmetic") {
    CHECK(gen_polyline_loop(20.0, 0.4, 1).poses.size() == 51);
    CHECK(gen_polyline_loop(30.0, 0.4, 1).poses.size() == 76);
    CHECK(gen_polyline_loop(40.0, 0.4, 1).poses.size() == 101);
}

TEST_CASE("polyline loops close within one step across 100 seeds") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Trajectory t = gen_polyline_loop(20.0, 0.4, seed);
        const double gap = (t.poses.front().pos - t.poses.back().pos).norm();
        CHECK(gap <= 0.4 + 1e-9);
    }
}

TEST_CASE("polyline loop step gaps and arc length") {
    const Trajectory t = gen_polyline_loop(30.0, 0.4, 9);
    double arc = 0.0;
    for (std::size_t i = 0; i + 1 < t.poses.size(); ++i) {
        const double gap = (t.poses[i + 1].pos - t.poses[i].pos).norm();
        CHECK(gap == doctest::Approx(0.4).epsilon(1e-6));
        arc += gap;
    }
    CHECK(arc == doctest::Approx((t.poses.size() - 1) * 0.4).epsilon(1e-3));
}

TEST_CASE("polyline loop is deterministic per seed and planar") {
    const Trajectory a = gen_polyline_loop(20.0, 0.4, 1234);
    const Trajectory b = gen_polyline_loop(20.0, 0.4, 1234);
    REQUIRE(a.poses.size() == b.poses.size());
    for (std::size_t i = 0; i < a.poses.size(); ++i) {
        CHECK(a.poses[i].pos == b.poses[i].pos);
        CHECK(a.poses[i].quat.coeffs() == b.poses[i].quat.coeffs());
        CHECK(a.poses[i].pos.y() == doctest::Approx(1.5));
    }
    const Trajectory c = gen_polyline_loop(20.0, 0.4, 1235);
    CHECK(a.poses[10].pos != c.poses[10].pos);
}

TEST_CASE("polyline loop orientations face the travel direction") {
    const Trajectory t = gen_polyline_loop(20.0, 0.4, 3);
    for (std::size_t i = 0; i + 1 < t.poses.size(); ++i) {
        CHECK(std::abs(t.poses[i].quat.norm() - 1.0) < 1e-9);
        const Eigen::Vector3d facing = t.poses[i].quat * Eigen::Vector3d::UnitZ();
        const Eigen::Vector3d chord = (t.poses[i + 1].pos - t.poses[i].pos).normalized();
        CHECK(facing.dot(chord) == doctest::Approx(1.0).epsilon(1e-9));
        // yaw-only for planar trajectories
        CHECK(std::abs((t.poses[i].quat * Eigen::Vector3d::UnitY()).y() - 1.0) < 1e-9);
    }
    CHECK(t.poses.back().quat.coeffs() == t.poses[t.poses.size() - 2].quat.coeffs());
}

TEST_CASE("polyline loop rejects infeasible parameters") {
    CHECK_THROWS_AS(gen_polyline_loop(1.0, 0.4, 0), std::invalid_argument);
    CHECK_THROWS_AS(gen_polyline_loop(20.0, 0.0, 0), std::invalid_argument);
}

TEST_CASE("catmull_rom interpolates the interior control points") {
    const std::vector<Eigen::Vector3d> ctrl = {
        {0, 0, 0}, {1, 0, 0}, {2, 0, 1}, {3, 0, 0}, {4, 0, -1}, {5, 0, 0}};
    for (int seg = 0; seg + 3 < static_cast<int>(ctrl.size()); ++seg) {
        CHECK((catmull_rom_eval(ctrl, seg, 0.0) - ctrl[seg + 1]).norm() < 1e-6);
        CHECK((catmull_rom_eval(ctrl, seg, 1.0) - ctrl[seg + 2]).norm() < 1e-6);
    }
}

TEST_CASE("catmull_rom on collinear controls is a straight line") {
    const std::vector<Eigen::Vector3d> ctrl = {
        {0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}, {4, 0, 0}, {5, 0, 0}};
    const Trajectory t = catmull_rom(ctrl, 0.25);
    for (const auto& p : t.poses) {
        CHECK(std::abs(p.pos.y()) < 1e-9);
        CHECK(std::abs(p.pos.z()) < 1e-9);
    }
    // curvature zero: consecutive headings identical
    for (std::size_t i = 0; i + 2 < t.poses.size(); ++i) {
        const Eigen::Vector3d d1 = (t.poses[i + 1].pos - t.poses[i].pos).normalized();
        const Eigen::Vector3d d2 = (t.poses[i + 2].pos - t.poses[i + 1].pos).normalized();
        CHECK((d1 - d2).norm() < 1e-9);
    }
}

TEST_CASE("catmull_rom resampled gaps equal the step") {
    const std::vector<Eigen::Vector3d> ctrl = {
        {0, 1.5, 0}, {1, 1.5, 0}, {2, 1.5, 1.5}, {2.5, 1.5, 3}, {1, 1.5, 4}, {0, 1.5, 4.5}};
    const Trajectory t = catmull_rom(ctrl, 0.4);
    REQUIRE(t.poses.size() >= 3);
    for (std::size_t i = 0; i + 1 < t.poses.size(); ++i)
        CHECK((t.poses[i + 1].pos - t.poses[i].pos).norm() ==
              doctest::Approx(0.4).epsilon(1e-6));
}

TEST_CASE("catmull_rom input validation") {
    CHECK_THROWS_AS(catmull_rom({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}, 0.4),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        catmull_rom({{0, 0, 0}, {1, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}}, 0.4),
        std::invalid_argument);
}

TEST_CASE("action_walk forward, rotation closure, and square loop") {
    CameraPose start({0, 0, 0}, Eigen::Quaterniond::Identity());

    SUBCASE("single forward step lands 0.4 m ahead") {
        const Trajectory t = action_walk({Action::forward(0.4)}, start);
        REQUIRE(t.poses.size() == 2);
        CHECK((t.poses[1].pos - Eigen::Vector3d(0, 0, 0.4)).norm() < 1e-12);
    }

    SUBCASE("sixteen 22.5-degree turns return the heading") {
        std::vector<Action> actions(16, Action::rotate(22.5));
        const Trajectory t = action_walk(actions, start);
        const Eigen::Vector3d facing = t.poses.back().quat * Eigen::Vector3d::UnitZ();
        CHECK((facing - Eigen::Vector3d(0, 0, 1)).norm() < 1e-9);
    }

    SUBCASE("square walk closes") {
        std::vector<Action> actions;
        for (int side = 0; side < 4; ++side) {
            for (int s = 0; s < 5; ++s) actions.push_back(Action::forward(0.4));
            actions.push_back(Action::rotate(90.0));
        }
        const Trajectory t = action_walk(actions, start);
        CHECK((t.poses.back().pos - start.pos).norm() < 1e-9);
        CHECK(t.poses.size() == actions.size() + 1);
    }

    SUBCASE("rotate steps leave the position fixed") {
        const Trajectory t =
            action_walk({Action::forward(0.4), Action::rotate(-22.5)}, start);
        CHECK((t.poses[2].pos - t.poses[1].pos).norm() == 0.0);
    }

    SUBCASE("invalid magnitudes are rejected") {
        CHECK_THROWS_AS(action_walk({Action::forward(0.0)}, start), std::invalid_argument);
        CHECK_THROWS_AS(action_walk({Action::rotate(0.0)}, start), std::invalid_argument);
    }
}

TEST_CASE("clip_targets windowing and overlap") {
    auto make_traj = [](int n) {
        Trajectory t;
        for (int i = 0; i < n; ++i)
            t.poses.emplace_back(Eigen::Vector3d(i, 0, 0), Eigen::Quaterniond::Identity());
        return t;
    };

    SUBCASE("73 poses and 25-frame clips form three windows") {
        const auto w = clip_targets(make_traj(73), 25);
        REQUIRE(w.size() == 3);
        CHECK(w[0].size() == 25);
        CHECK(w[1].size() == 25);
        CHECK(w[2].size() == 25);
        CHECK(w[0].back().pos == w[1].front().pos);
        CHECK(w[1].back().pos == w[2].front().pos);
    }

    SUBCASE("an exact single window") {
        const auto w = clip_targets(make_traj(25), 25);
        REQUIRE(w.size() == 1);
        CHECK(w[0].size() == 25);
    }

    SUBCASE("51 poses yield three windows with a short tail") {
        const auto w = clip_targets(make_traj(51), 25);
        REQUIRE(w.size() == 3);
        CHECK(w[2].size() == 3);
        CHECK(w[1].back().pos == w[2].front().pos);
    }

    SUBCASE("windows cover the whole trajectory") {
        const auto w = clip_targets(make_traj(40), 25);
        CHECK(w.back().back().pos.x() == 39.0);
    }

    SUBCASE("degenerate inputs are rejected") {
        CHECK_THROWS_AS(clip_targets(make_traj(10), 25), std::invalid_argument);
        CHECK_THROWS_AS(clip_targets(make_traj(30), 1), std::invalid_argument);
        CHECK_THROWS_AS(clip_targets(make_traj(30), 25, 0), std::invalid_argument);
    }
}

TEST_CASE("clip windows share `overlap` boundary poses") {
    Trajectory t;
    for (int i = 0; i < 20; ++i)
        t.poses.emplace_back(Eigen::Vector3d(i, 0, 0), Eigen::Quaterniond::Identity());
    const auto w = clip_targets(t, 8, 3);  // stride 5
    REQUIRE(w.size() >= 2);
    for (std::size_t k = 1; k < w.size(); ++k) {
        const auto& prev = w[k - 1];
        for (int o = 0; o < 3 && o < static_cast<int>(w[k].size()); ++o)
            CHECK(w[k][o].pos == prev[prev.size() - 3 + o].pos);
    }
    CHECK(w.back().back().pos.x() == 19.0);
}
