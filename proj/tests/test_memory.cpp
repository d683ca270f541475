#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "panomem/explore.hpp"
#include "panomem/memory.hpp"
#include "panomem/raster.hpp"
#include "panomem/synthworld.hpp"

using namespace panomem;

namespace {

MemPoint pt(float x, float y, float z, float conf = 1.0f) {
    MemPoint p;
    p.x = x;
    p.y = y;
    p.z = z;
    p.confidence = conf;
    return p;
}

CameraPose pose_at(double x, double y, double z) {
    return CameraPose({x, y, z}, Eigen::Quaterniond::Identity());
}

}  // namespace

TEST_CASE("insert_frame filters by confidence threshold") {
    MemoryConfig cfg;
    cfg.confidence_threshold = 0.5;
    PointCloudMemory mem(cfg);

    SUBCASE("0.4 dropped, 0.6 kept") {
        const std::size_t dropped =
            mem.insert_frame(0, pose_at(0, 0, 0), {pt(1, 0, 0, 0.4f), pt(0, 1, 0, 0.6f)});
        CHECK(dropped == 1);
        CHECK(mem.frame_points(0).size() == 1);
        CHECK(mem.frame_points(0)[0].frame_id == 0);
    }
    SUBCASE("threshold zero keeps everything") {
        MemoryConfig all;
        all.confidence_threshold = 0.0;
        PointCloudMemory m(all);
        CHECK(m.insert_frame(0, pose_at(0, 0, 0), {pt(1, 0, 0, 0.0f), pt(0, 1, 0, 0.2f)}) == 0);
        CHECK(m.total_points() == 2);
    }
    SUBCASE("threshold one with sub-one confidences accepts an empty frame") {
        MemoryConfig strict;
        strict.confidence_threshold = 1.0;
        PointCloudMemory m(strict);
        CHECK(m.insert_frame(3, pose_at(0, 0, 0), {pt(1, 0, 0, 0.999f)}) == 1);
        CHECK(m.total_points() == 0);
        CHECK(m.has_frame(3));
    }
    SUBCASE("duplicate frame id is a conflict") {
        mem.insert_frame(7, pose_at(0, 0, 0), {pt(1, 0, 0)});
        CHECK_THROWS_AS(mem.insert_frame(7, pose_at(1, 0, 0), {}), FrameConflict);
    }
}

TEST_CASE("raising the threshold never increases the stored count") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<MemPoint> pts;
    for (int i = 0; i < 500; ++i) pts.push_back(pt(1, 2, 3, static_cast<float>(u(rng))));

    std::size_t prev = pts.size() + 1;
    for (double thr : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        MemoryConfig cfg;
        cfg.confidence_threshold = thr;
        PointCloudMemory mem(cfg);
        mem.insert_frame(0, pose_at(0, 0, 0), pts);
        CHECK(mem.total_points() < prev);
        prev = mem.total_points() + 1;
    }
}

TEST_CASE("retrieve_local distance ordering, cap, and edge cases") {
    MemoryConfig cfg;
    cfg.frame_cap = 99;
    cfg.grid_cell = 10.0;
    PointCloudMemory mem(cfg);

    SUBCASE("empty memory returns empty, not an error") {
        CHECK(mem.retrieve_local(pose_at(0, 0, 0), 5.0).empty());
    }

    SUBCASE("single frame at distance zero") {
        mem.insert_frame(4, pose_at(1, 2, 3), {});
        const auto ids = mem.retrieve_local(pose_at(1, 2, 3), 0.5);
        REQUIRE(ids.size() == 1);
        CHECK(ids[0] == 4);
    }

    SUBCASE("150 frames inside the radius are capped at the 99 nearest") {
        for (int i = 0; i < 150; ++i)
            mem.insert_frame(i, pose_at(0.01 * i, 0, 0), {});
        const auto ids = mem.retrieve_local(pose_at(0, 0, 0), 10.0);
        REQUIRE(ids.size() == 99);
        for (int i = 0; i < 99; ++i) CHECK(ids[i] == i);  // nearest first
    }

    SUBCASE("all frames outside the radius yield an empty result") {
        for (int i = 0; i < 10; ++i) mem.insert_frame(i, pose_at(100.0 + i, 0, 0), {});
        CHECK(mem.retrieve_local(pose_at(0, 0, 0), 5.0).empty());
    }

    SUBCASE("equal distances break ties toward the lower frame id") {
        mem.insert_frame(9, pose_at(1, 0, 0), {});
        mem.insert_frame(2, pose_at(-1, 0, 0), {});
        const auto ids = mem.retrieve_local(pose_at(0, 0, 0), 2.0);
        REQUIRE(ids.size() == 2);
        CHECK(ids[0] == 2);
        CHECK(ids[1] == 9);
    }
}

TEST_CASE("retrieve_local is translation equivariant") {
    MemoryConfig cfg;
    PointCloudMemory a(cfg), b(cfg);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    const Eigen::Vector3d shift(13.7, -4.2, 8.9);
    for (int i = 0; i < 60; ++i) {
        const Eigen::Vector3d p(u(rng), u(rng), u(rng));
        a.insert_frame(i, CameraPose(p, Eigen::Quaterniond::Identity()), {});
        b.insert_frame(i, CameraPose(p + shift, Eigen::Quaterniond::Identity()), {});
    }
    const Eigen::Vector3d q(u(rng), u(rng), u(rng));
    CHECK(a.retrieve_local(CameraPose(q, Eigen::Quaterniond::Identity()), 12.0) ==
          b.retrieve_local(CameraPose(q + shift, Eigen::Quaterniond::Identity()), 12.0));
}

TEST_CASE("retrieval never exceeds the cap over a long trajectory") {
    MemoryConfig cfg;
    cfg.frame_cap = 99;
    PointCloudMemory mem(cfg);
    for (int i = 0; i < 1000; ++i)
        mem.insert_frame(i, pose_at(0.05 * i, 0, 0), {});
    for (int q = 0; q < 1000; q += 37)
        CHECK(mem.retrieve_local(pose_at(0.05 * q, 0, 0), 50.0).size() <= 99);
}

TEST_CASE("gather_points order, counts, and errors") {
    PointCloudMemory mem;
    mem.insert_frame(2, pose_at(0, 0, 0), {pt(1, 0, 0), pt(2, 0, 0)});
    mem.insert_frame(1, pose_at(1, 0, 0), {pt(3, 0, 0)});

    CHECK(mem.gather_points({}).empty());
    CHECK(mem.gather_points({1}).size() == 1);

    const auto both = mem.gather_points({2, 1});  // sorted by frame id
    REQUIRE(both.size() == 3);
    CHECK(both[0].frame_id == 1);
    CHECK(both[1].frame_id == 2);
    CHECK(both[1].x == 1.0f);
    CHECK(both[2].x == 2.0f);

    CHECK_THROWS_AS(mem.gather_points({5}), FrameNotFound);
    CHECK(mem.peak_context_points() == 3);
}

TEST_CASE("update_memory with the oracle reconstructor") {
    const std::vector<MemPoint> scene = room1_scene(300.0);
    const int W = 128, H = 64;
    const CameraPose pose({0.2, 1.5, -0.1}, yaw_quat(0.3));
    const Reprojection frame = render_scene(scene, pose, W, H, {.splat_radius = 2});

    SUBCASE("one frame inserts one point per covered pixel") {
        PointCloudMemory mem;
        auto rec = oracle_reconstructor(1, {}, Convention::CameraToWorldGl);
        update_memory(mem, {frame.image}, {pose}, {0}, *rec);
        std::size_t covered = 0;
        for (auto m : frame.image.mask) covered += m;
        CHECK(mem.total_points() == covered);
        CHECK(mem.total_points() <= static_cast<std::size_t>(W) * H);
    }

    SUBCASE("empty clip leaves the memory unchanged") {
        PointCloudMemory mem;
        auto rec = oracle_reconstructor();
        update_memory(mem, {}, {}, {}, *rec);
        CHECK(mem.frame_count() == 0);
    }

    SUBCASE("length mismatch is rejected") {
        PointCloudMemory mem;
        auto rec = oracle_reconstructor();
        CHECK_THROWS_AS(update_memory(mem, {frame.image}, {}, {}, *rec),
                        std::invalid_argument);
    }

    SUBCASE("reconstructor failures carry frame context") {
        PointCloudMemory mem;
        auto rec = oracle_reconstructor();
        EquirectImage no_depth(W, H);
        try {
            update_memory(mem, {no_depth}, {pose}, {3}, *rec);
            FAIL("expected a reconstructor error");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()).find("frame 3") != std::string::npos);
        }
    }
}

TEST_CASE("update_memory aligns perturbed reconstructions back to ground truth") {
    const std::vector<MemPoint> scene = room1_scene(300.0);
    const int W = 128, H = 64;

    // Clip of 4 non-collinear poses.
    std::vector<CameraPose> poses = {
        CameraPose({0.0, 1.5, 0.0}, yaw_quat(0.0)),
        CameraPose({0.4, 1.5, 0.2}, yaw_quat(0.4)),
        CameraPose({0.5, 1.5, 0.7}, yaw_quat(0.9)),
        CameraPose({0.2, 1.5, 1.0}, yaw_quat(1.4)),
    };
    std::vector<EquirectImage> frames;
    for (const auto& p : poses)
        frames.push_back(render_scene(scene, p, W, H, {.splat_radius = 2}).image);

    SimilarityTransform perturb;
    perturb.scale = 2.0;
    perturb.rotation = yaw_quat(0.8).toRotationMatrix();
    perturb.translation = {3.0, -1.0, 0.5};

    PointCloudMemory plain, perturbed;
    auto rec_id = oracle_reconstructor(1, {}, Convention::WorldToCameraCv);
    auto rec_p = oracle_reconstructor(1, perturb, Convention::WorldToCameraCv);
    update_memory(plain, frames, poses, {0, 1, 2, 3}, *rec_id);
    update_memory(perturbed, frames, poses, {0, 1, 2, 3}, *rec_p);

    // Alignment must undo the similarity: the stored clouds agree.
    for (int f = 0; f < 4; ++f) {
        const auto& a = plain.frame_points(f);
        const auto& b = perturbed.frame_points(f);
        REQUIRE(a.size() == b.size());
        for (std::size_t k = 0; k < a.size(); k += 97) {
            CHECK(std::abs(a[k].x - b[k].x) < 1e-4f);
            CHECK(std::abs(a[k].y - b[k].y) < 1e-4f);
            CHECK(std::abs(a[k].z - b[k].z) < 1e-4f);
        }
    }
}

TEST_CASE("dual-view insertion keeps co-visible reprojections stable") {
    // The one-quantum bound assumes pixel footprints small against the
    // palette gradient, so this runs at the working resolution.
    const std::vector<MemPoint> scene = room1_scene(1500.0);
    const int W = 512, H = 256;
    const CameraPose pa({0.0, 1.5, 0.0}, yaw_quat(0.0));
    const CameraPose pb({0.4, 1.5, 0.1}, yaw_quat(0.2));
    const RasterConfig cfg{.splat_radius = 2};

    auto rec = oracle_reconstructor(1, {}, Convention::CameraToWorldGl);
    const EquirectImage fa = render_scene(scene, pa, W, H, cfg).image;
    const EquirectImage fb = render_scene(scene, pb, W, H, cfg).image;

    PointCloudMemory single, dual;
    update_memory(single, {fa}, {pa}, {0}, *rec);
    update_memory(dual, {fa}, {pa}, {0}, *rec);
    update_memory(dual, {fb}, {pb}, {1}, *rec);

    const Reprojection rs = reproject(single.gather_points(single.frame_ids()), pa, W, H, cfg);
    const Reprojection rd = reproject(dual.gather_points(dual.frame_ids()), pa, W, H, cfg);

    // On pixels covered by the single-frame memory, adding the second view
    // must not move colors by more than one quantum.
    std::size_t worse = 0;
    for (int j = 1; j < H; ++j)
        for (int i = 0; i < W; ++i) {
            const std::size_t px = static_cast<std::size_t>(j) * W + i;
            if (!rs.image.mask[px]) continue;
            REQUIRE(rd.image.mask[px] == 1);
            for (int ch = 0; ch < 3; ++ch)
                if (std::abs(rs.image.rgb[px * 3 + ch] - rd.image.rgb[px * 3 + ch]) >
                    1.0f / 255)
                    ++worse;
        }
    CHECK(worse == 0);
}

TEST_CASE("memory growth is bounded by one point per pixel per frame") {
    const std::vector<MemPoint> scene = room1_scene(500.0);
    const int W = 64, H = 32;
    PointCloudMemory mem;
    auto rec = oracle_reconstructor();
    for (int f = 0; f < 5; ++f) {
        const CameraPose p({0.1 * f, 1.5, 0.05 * f}, yaw_quat(0.2 * f));
        const EquirectImage img = render_scene(scene, p, W, H, {.splat_radius = 2}).image;
        update_memory(mem, {img}, {p}, {f}, *rec);
        CHECK(mem.total_points() <= static_cast<std::size_t>(W) * H * (f + 1));
    }
}

TEST_CASE("retrieve_local matches a brute-force scan across cell ratios") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-30.0, 30.0);
    for (double cell : {0.5, 4.0, 25.0}) {
        MemoryConfig cfg;
        cfg.frame_cap = 7;
        cfg.grid_cell = cell;
        PointCloudMemory mem(cfg);
        std::vector<Eigen::Vector3d> centers;
        for (int i = 0; i < 80; ++i) {
            centers.emplace_back(u(rng), u(rng), u(rng));
            mem.insert_frame(i, CameraPose(centers.back(), Eigen::Quaterniond::Identity()),
                             {});
        }
        for (int q = 0; q < 20; ++q) {
            const Eigen::Vector3d query(u(rng), u(rng), u(rng));
            const double radius = 2.0 + 10.0 * (q % 4);
            std::vector<std::pair<double, int>> expect;
            for (int i = 0; i < 80; ++i) {
                const double d = (centers[i] - query).norm();
                if (d <= radius) expect.emplace_back(d, i);
            }
            std::sort(expect.begin(), expect.end());
            if (expect.size() > 7) expect.resize(7);
            std::vector<int> expect_ids;
            for (auto& [_, id] : expect) expect_ids.push_back(id);
            CHECK(mem.retrieve_local(CameraPose(query, Eigen::Quaterniond::Identity()),
                                     radius) == expect_ids);
        }
    }
}
