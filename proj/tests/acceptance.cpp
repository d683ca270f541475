// Acceptance suite: one pass/fail line per criterion, exit code equals the
// number of failed criteria.  Tolerances are pinned here, in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "panomem/explore.hpp"
#include "panomem/metrics.hpp"
#include "panomem/synthworld.hpp"

using namespace panomem;

namespace {

constexpr double kPi = 3.14159265358979323846;

int g_failures = 0;

void report(int criterion, const char* name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %-34s %s\n", pass ? "PASS" : "FAIL", criterion, name,
                detail.c_str());
    if (!pass) ++g_failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- criterion 1: projection exactness ------------------------------------

void criterion_1() {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> uphi(-kPi, kPi - 1e-12);
    std::uniform_real_distribution<double> utheta(-kPi / 2, kPi / 2);
    const int n = 1000000;
    double worst = 0.0;
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < n; ++i) {
        const SphCoord s{uphi(rng), utheta(rng)};
        const PixCoord p = sph_to_pix(s, 2000, 1000);
        const SphCoord back = pix_to_sph(p, 2000, 1000);
        worst = std::max(worst, std::abs(back.phi - s.phi));
        worst = std::max(worst, std::abs(back.theta - s.theta));
    }
    const double elapsed = seconds_since(t0);
    char buf[128];
    std::snprintf(buf, sizeof(buf), "worst %.2e rad, %.2f s", worst, elapsed);
    report(1, "projection round-trip", worst < 1e-12 && elapsed < 5.0, buf);
}

// ---- criterion 2: Plucker invariants ---------------------------------------

void criterion_2() {
    const int W = 1024, H = 512;
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::normal_distribution<double> nq(0.0, 1.0);

    double worst_norm = 0.0, worst_dot = 0.0;
    for (int k = 0; k < 8; ++k) {
        const CameraPose pose(
            {u(rng), u(rng), u(rng)},
            Eigen::Quaterniond(nq(rng), nq(rng), nq(rng), nq(rng)).normalized());
        const PluckerField f = plucker_field_one(pose, W, H);
        for (std::size_t i = 0; i < f.channels.size(); i += 6) {
            const double dx = f.channels[i], dy = f.channels[i + 1], dz = f.channels[i + 2];
            const double mx = f.channels[i + 3], my = f.channels[i + 4],
                         mz = f.channels[i + 5];
            worst_norm = std::max(
                worst_norm, std::abs(std::sqrt(dx * dx + dy * dy + dz * dz) - 1.0));
            worst_dot = std::max(worst_dot, std::abs(dx * mx + dy * my + dz * mz));
        }
    }

    bool origin_zero = true;
    const PluckerField at_origin = plucker_field_one(CameraPose{}, W, H);
    for (std::size_t i = 0; i < at_origin.channels.size(); i += 6)
        origin_zero = origin_zero && at_origin.channels[i + 3] == 0.0f &&
                      at_origin.channels[i + 4] == 0.0f && at_origin.channels[i + 5] == 0.0f;

    char buf[128];
    std::snprintf(buf, sizeof(buf), "|d|-1 max %.2e, m.d max %.2e, origin moment %s",
                  worst_norm, worst_dot, origin_zero ? "zero" : "NONZERO");
    report(2, "Plucker invariants", worst_norm < 1e-6 && worst_dot < 1e-6 && origin_zero,
           buf);
}

// ---- criterion 3: cubemap fidelity -----------------------------------------

EquirectImage procedural_pano(int w, int h, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
    const double a1 = u(rng), a2 = u(rng), a3 = u(rng);
    EquirectImage img(w, h);
    for (int j = 0; j < h; ++j)
        for (int i = 0; i < w; ++i) {
            const Eigen::Vector3d d = dir_from_sph(
                pix_to_sph({static_cast<double>(i), static_cast<double>(j)}, w, h));
            float* p = img.px(i, j);
            p[0] = static_cast<float>(0.5 + 0.25 * std::sin(3 * d.x() + a1) +
                                      0.15 * std::cos(2 * d.y() + a2));
            p[1] = static_cast<float>(0.5 + 0.25 * std::sin(2 * d.z() + a2) +
                                      0.15 * std::cos(3 * d.x() + a3));
            p[2] = static_cast<float>(0.5 + 0.25 * std::cos(2 * d.y() + a3) +
                                      0.15 * std::sin(3 * d.z() + a1));
        }
    return img;
}

void criterion_3() {
    const int W = 512, H = 256;
    double worst = 1e9;
    for (unsigned seed = 0; seed < 10; ++seed) {
        const EquirectImage img = procedural_pano(W, H, 300 + seed);
        const EquirectImage back = cubemap_to_pano(pano_to_cubemap(img, W / 4), W, H);
        double acc = 0.0;
        std::size_t n = 0;
        for (int j = H / 8; j < 7 * H / 8; ++j)
            for (int i = 0; i < W; ++i)
                for (int c = 0; c < 3; ++c) {
                    const double d =
                        static_cast<double>(img.px(i, j)[c]) - back.px(i, j)[c];
                    acc += d * d;
                    ++n;
                }
        const double band_psnr = 10.0 * std::log10(1.0 / (acc / n));
        worst = std::min(worst, band_psnr);
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "worst band PSNR %.1f dB", worst);
    report(3, "cubemap round-trip >= 40 dB", worst >= 40.0, buf);
}

// ---- criterion 4: rasterizer correctness -----------------------------------

struct BruteProj {
    int iu, iv;
    std::int64_t qd;
    float depth;
    bool ok;
};

BruteProj brute_project(const MemPoint& pt, const Eigen::Quaterniond& w2c,
                        const Eigen::Vector3d& c, int W, int H) {
    BruteProj e{0, 0, 0, 0.0f, false};
    const Eigen::Vector3d v(pt.x - c.x(), pt.y - c.y(), pt.z - c.z());
    const Eigen::Vector3d d = w2c * v;
    const double depth = std::sqrt(d.x() * d.x() + d.y() * d.y() + d.z() * d.z());
    if (!(depth > 1e-12)) return e;
    const double theta = std::asin(std::clamp(d.y() / depth, -1.0, 1.0));
    const double phi = (std::abs(d.x()) < 1e-300 && std::abs(d.z()) < 1e-300)
                           ? 0.0
                           : std::atan2(d.x(), d.z());
    long iu = std::lround(W * (phi + kPi) / (2.0 * kPi));
    if (iu >= W) iu -= W;
    if (iu < 0) iu += W;
    e.iu = static_cast<int>(iu);
    e.iv = static_cast<int>(
        std::clamp(std::lround(H * (kPi / 2 - theta) / kPi), 0L, static_cast<long>(H - 1)));
    e.depth = static_cast<float>(depth);
    e.qd = static_cast<std::int64_t>(std::floor(depth * 1e9));
    e.ok = true;
    return e;
}

void criterion_4() {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> uc(0.0, 1.0);
    std::normal_distribution<double> nq(0.0, 1.0);

    const int W = 64, H = 32;
    std::size_t depth_mismatches = 0, roundtrip_mismatches = 0;
    for (int scene_idx = 0; scene_idx < 20; ++scene_idx) {
        std::vector<MemPoint> pts;
        const std::size_t n = 2000 + 400 * scene_idx;  // up to 1e4
        while (pts.size() < n) {
            Eigen::Vector3d p(u(rng), u(rng), u(rng));
            if (p.norm() < 0.05 || p.norm() > 1.0) continue;
            p *= 6.0;
            MemPoint mp;
            mp.x = static_cast<float>(p.x());
            mp.y = static_cast<float>(p.y());
            mp.z = static_cast<float>(p.z());
            mp.r = static_cast<float>(uc(rng));
            mp.g = static_cast<float>(uc(rng));
            mp.b = static_cast<float>(uc(rng));
            pts.push_back(mp);
        }
        const CameraPose pose(
            {u(rng), u(rng), u(rng)},
            Eigen::Quaterniond(nq(rng), nq(rng), nq(rng), nq(rng)).normalized());
        const int radius = 1 + scene_idx % 2;
        const Reprojection r = reproject(pts, pose, W, H, {.splat_radius = radius});

        const Eigen::Quaterniond w2c = pose.world_rotation().conjugate();
        const Eigen::Vector3d c = pose.center();
        std::vector<BruteProj> proj(pts.size());
        for (std::size_t k = 0; k < pts.size(); ++k)
            proj[k] = brute_project(pts[k], w2c, c, W, H);

        const int h = radius - 1;
        for (int j = 0; j < H; ++j)
            for (int i = 0; i < W; ++i) {
                std::int64_t best_qd = std::numeric_limits<std::int64_t>::max();
                int best_k = -1;
                for (std::size_t k = 0; k < pts.size(); ++k) {
                    if (!proj[k].ok) continue;
                    if (std::abs(proj[k].iv - j) > h) continue;
                    const int du = std::abs(proj[k].iu - i);
                    if (std::min(du, W - du) > h) continue;
                    if (proj[k].qd < best_qd ||
                        (proj[k].qd == best_qd && static_cast<int>(k) < best_k)) {
                        best_qd = proj[k].qd;
                        best_k = static_cast<int>(k);
                    }
                }
                const std::size_t px = static_cast<std::size_t>(j) * W + i;
                if (best_k < 0) {
                    if (r.image.mask[px]) ++depth_mismatches;
                } else if (!r.image.mask[px] || r.image.depth[px] != proj[best_k].depth ||
                           r.image.px(i, j)[0] != pts[best_k].r) {
                    ++depth_mismatches;
                }
            }

        // unproject -> reproject bit-exactness on masked pixels; row 0 is
        // the degenerate zenith row (phi is canonicalized away there)
        const Reprojection first = reproject(pts, pose, 128, 64, {.splat_radius = 1});
        const std::vector<MemPoint> up = unproject(first.image, pose);
        const Reprojection second = reproject(up, pose, 128, 64, {.splat_radius = 1});
        for (int j = 1; j < 64; ++j)
            for (int i = 0; i < 128; ++i) {
                const std::size_t px = static_cast<std::size_t>(j) * 128 + i;
                if (second.image.mask[px] != first.image.mask[px])
                    ++roundtrip_mismatches;
                else if (first.image.mask[px] &&
                         (second.image.rgb[px * 3] != first.image.rgb[px * 3] ||
                          second.image.rgb[px * 3 + 1] != first.image.rgb[px * 3 + 1] ||
                          second.image.rgb[px * 3 + 2] != first.image.rgb[px * 3 + 2]))
                    ++roundtrip_mismatches;
            }
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "depth mismatches %zu, round-trip mismatches %zu",
                  depth_mismatches, roundtrip_mismatches);
    report(4, "rasterizer exactness", depth_mismatches == 0 && roundtrip_mismatches == 0,
           buf);
}

// ---- criterion 5: alignment ------------------------------------------------

void criterion_5() {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::uniform_real_distribution<double> us(0.1, 10.0);
    std::normal_distribution<double> nq(0.0, 1.0);

    double worst_scale = 0.0, worst_rot = 0.0, worst_trans = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Eigen::Vector3d> src;
        for (int i = 0; i < 50; ++i) src.push_back({u(rng), u(rng), u(rng)});
        SimilarityTransform truth;
        truth.scale = us(rng);
        truth.rotation =
            Eigen::Quaterniond(nq(rng), nq(rng), nq(rng), nq(rng)).normalized()
                .toRotationMatrix();
        truth.translation = {u(rng), u(rng), u(rng)};
        const SimilarityTransform got =
            umeyama_align(src, apply_similarity(truth, src), true);
        worst_scale = std::max(worst_scale, std::abs(got.scale - truth.scale));
        // |R1-R2|_F = 2*sqrt(2)*sin(angle/2), well conditioned near zero
        const double gap = 2.0 * std::asin(std::clamp(
                               (got.rotation - truth.rotation).norm() / (2 * std::sqrt(2.0)),
                               0.0, 1.0));
        worst_rot = std::max(worst_rot, gap);
        worst_trans =
            std::max(worst_trans, (got.translation - truth.translation).norm());
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "worst: scale %.1e, rot %.1e rad, trans %.1e",
                  worst_scale, worst_rot, worst_trans);
    report(5, "umeyama recovery", worst_scale < 1e-6 && worst_rot < 1e-6 &&
           worst_trans < 1e-6, buf);
}

// ---- criterion 6: pose AUC anchors ------------------------------------------

void criterion_6() {
    const PoseErrors perfect{{0, 0, 0, 0}, {0, 0, 0, 0}};
    const PoseErrors bad{{40, 55}, {31, 70}};
    const PoseErrors single{{15.0}, {10.0}};
    const double a1 = pose_auc(perfect, 30.0);
    const double a2 = pose_auc(bad, 30.0);
    const double a3 = pose_auc(single, 30.0);
    char buf[128];
    std::snprintf(buf, sizeof(buf), "perfect %.3f, bad %.3f, 15-degree pair %.12f", a1, a2,
                  a3);
    report(6, "pose AUC anchors",
           a1 == 1.0 && a2 == 0.0 && std::abs(a3 - 0.5) < 1e-9, buf);
}

// ---- shared harness for criteria 7 and 8 ------------------------------------

// 20 m / 0.4 m closed loop as two laps of a 10 m circle: 51 poses, exact
// closure, and lap 2 revisits every lap-1 viewpoint.
Trajectory acceptance_loop(double height = 1.5) {
    Trajectory t;
    t.kind = TrajectoryKind::Curve;
    t.step = 0.4;
    const int segments = 50, laps = 2;
    const double radius = 10.0 / (2.0 * kPi);
    for (int k = 0; k <= segments; ++k) {
        const double a = 2.0 * kPi * laps * k / segments;
        t.poses.emplace_back(
            Eigen::Vector3d(radius * std::sin(a), height, radius * std::cos(a)),
            yaw_quat(std::atan2(std::cos(a), -std::sin(a))));
    }
    return t;
}

void criterion_7() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto scene = room1_scene(2000.0);
    const int W = 512, H = 256;
    const Trajectory traj = acceptance_loop();
    ExploreConfig cfg;
    cfg.clip_len = 25;
    cfg.raster.splat_radius = 2;

    auto gen = oracle_generator(scene, 0.0, 0, cfg.raster);
    auto rec = oracle_reconstructor(1, {}, Convention::WorldToCameraCv);
    const EquirectImage x0 = render_scene(scene, traj.poses[0], W, H, cfg.raster).image;
    const ExplorationRun run = explore(x0, traj, *gen, *rec, cfg);
    const auto windows = clip_targets(traj, cfg.clip_len, 1);

    bool three_windows = windows.size() == 3 && traj.poses.size() == 51;
    std::size_t bad_pixels = 0;
    double min_cov = 1.0;
    for (std::size_t t = 1; t < windows.size(); ++t) {
        for (std::size_t f = 0; f < windows[t].size(); ++f) {
            const Reprojection direct =
                render_scene(scene, windows[t][f], W, H, cfg.raster);
            const Reprojection& rt = run.reprojections[t][f];
            min_cov = std::min(min_cov, rt.covered_fraction);
            for (int j = 1; j < H; ++j)
                for (int i = 0; i < W; ++i) {
                    const std::size_t px = static_cast<std::size_t>(j) * W + i;
                    if (!rt.image.mask[px] || !direct.image.mask[px]) continue;
                    for (int c = 0; c < 3; ++c)
                        if (std::abs(rt.image.rgb[px * 3 + c] -
                                     direct.image.rgb[px * 3 + c]) > 1.0f / 255)
                            ++bad_pixels;
                }
        }
    }
    const double elapsed = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "windows %zu, bad pixels %zu, min coverage %.3f, %.0f s", windows.size(),
                  bad_pixels, min_cov, elapsed);
    report(7, "end-to-end memory fidelity",
           three_windows && bad_pixels == 0 && min_cov >= 0.9 && elapsed < 120.0, buf);
}

void criterion_8() {
    const auto scene = room1_scene(2000.0);
    const int W = 256, H = 128;
    const Trajectory traj = acceptance_loop();
    ExploreConfig cfg;
    cfg.clip_len = 25;
    cfg.raster.splat_radius = 2;
    const EquirectImage x0 = render_scene(scene, traj.poses[0], W, H, cfg.raster).image;

    const double sigma = 0.05;
    int wins = 0;
    for (int seed = 0; seed < 10; ++seed) {
        auto rec_a = oracle_reconstructor(1, {}, Convention::WorldToCameraCv);
        auto base = last_frame_generator(sigma, 1000 + seed);
        const double drift_base = loop_consistency(
            x0, explore(x0, traj, *base, *rec_a, cfg).clips.back().back());

        auto rec_b = oracle_reconstructor(1, {}, Convention::WorldToCameraCv);
        auto mc = memory_conditioned_generator(std::shared_ptr<GeneratorContract>(
            last_frame_generator(sigma, 1000 + seed).release()));
        const double drift_mc = loop_consistency(
            x0, explore(x0, traj, *mc, *rec_b, cfg).clips.back().back());
        if (drift_mc < drift_base) ++wins;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "memory wins %d/10 seeds", wins);
    report(8, "memory reduces drift", wins >= 9, buf);
}

// ---- criterion 9: constant-memory retrieval ----------------------------------

void criterion_9() {
    const int W = 64, H = 32;
    MemoryConfig mcfg;
    mcfg.frame_cap = 99;
    PointCloudMemory mem(mcfg);

    // 1000-frame trajectory with one point per pixel in every frame.
    std::vector<MemPoint> frame_points(static_cast<std::size_t>(W) * H);
    for (int f = 0; f < 1000; ++f) {
        const CameraPose pose({0.05 * f, 1.5, std::sin(0.1 * f)},
                              Eigen::Quaterniond::Identity());
        mem.insert_frame(f, pose, frame_points);
    }

    std::size_t max_retrieved = 0;
    for (int q = 0; q < 1000; q += 13) {
        const CameraPose query({0.05 * q, 1.5, std::sin(0.1 * q)},
                               Eigen::Quaterniond::Identity());
        const auto ids = mem.retrieve_local(query, 50.0);
        max_retrieved = std::max(max_retrieved, ids.size());
        mem.gather_points(ids);
    }
    const std::size_t bound = 99 * static_cast<std::size_t>(W) * H;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "max frames %zu, peak context %zu <= %zu",
                  max_retrieved, mem.peak_context_points(), bound);
    report(9, "constant-memory retrieval",
           max_retrieved <= 99 && mem.peak_context_points() <= bound, buf);
}

// ---- criterion 10: metric sanity ----------------------------------------------

double ssim_reference(const EquirectImage& a, const EquirectImage& b) {
    const int w = a.width, h = a.height, half = 3;
    const double sigma = 1.5, c1 = 1e-4, c2 = 9e-4;
    std::vector<double> x(static_cast<std::size_t>(w) * h), y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = 0.299 * a.rgb[i * 3] + 0.587 * a.rgb[i * 3 + 1] + 0.114 * a.rgb[i * 3 + 2];
        y[i] = 0.299 * b.rgb[i * 3] + 0.587 * b.rgb[i * 3 + 1] + 0.114 * b.rgb[i * 3 + 2];
    }
    double total = 0.0;
    for (int j = 0; j < h; ++j)
        for (int i = 0; i < w; ++i) {
            double wsum = 0, mx = 0, my = 0, mxx = 0, myy = 0, mxy = 0;
            for (int dj = -half; dj <= half; ++dj)
                for (int di = -half; di <= half; ++di) {
                    const int ii = i + di, jj = j + dj;
                    if (ii < 0 || ii >= w || jj < 0 || jj >= h) continue;
                    const double g = std::exp(-0.5 * (di * di + dj * dj) / (sigma * sigma));
                    const double xv = x[static_cast<std::size_t>(jj) * w + ii];
                    const double yv = y[static_cast<std::size_t>(jj) * w + ii];
                    wsum += g;
                    mx += g * xv;
                    my += g * yv;
                    mxx += g * xv * xv;
                    myy += g * yv * yv;
                    mxy += g * xv * yv;
                }
            mx /= wsum;
            my /= wsum;
            const double vx = mxx / wsum - mx * mx;
            const double vy = myy / wsum - my * my;
            const double cov = mxy / wsum - mx * my;
            total += ((2 * mx * my + c1) * (2 * cov + c2)) /
                     ((mx * mx + my * my + c1) * (vx + vy + c2));
        }
    return total / (static_cast<double>(w) * h);
}

void criterion_10() {
    EquirectImage black(32, 16), white(32, 16, 1.0f), gray(32, 16, 0.1f);
    const bool trivial = mse(black, black) == 0.0 && std::abs(mse(black, white) - 1.0) < 1e-12 &&
                         psnr(black, black) == 99.0 &&
                         std::abs(psnr(black, gray) - 20.0) < 1e-6 &&
                         std::abs(ssim(white, white) - 1.0) < 1e-9;

    std::mt19937 rng(10);
    std::uniform_real_distribution<float> u(0.0f, 1.0f);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        EquirectImage a(48, 24), b(48, 24);
        for (auto& v : a.rgb) v = u(rng);
        for (auto& v : b.rgb) v = u(rng);
        worst = std::max(worst, std::abs(ssim(a, b) - ssim_reference(a, b)));
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "trivial %s, ssim-vs-reference max %.2e",
                  trivial ? "exact" : "BROKEN", worst);
    report(10, "metric sanity", trivial && worst < 1e-4, buf);
}

// ---- criterion 11: trajectory protocol ----------------------------------------

void criterion_11() {
    const int expect_poses[3] = {51, 76, 101};
    const double lengths[3] = {20.0, 30.0, 40.0};
    bool counts_ok = true;
    double worst_closure = 0.0;
    for (int li = 0; li < 3; ++li) {
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const Trajectory t = gen_polyline_loop(lengths[li], 0.4, seed);
            counts_ok = counts_ok &&
                        static_cast<int>(t.poses.size()) == expect_poses[li];
            worst_closure = std::max(
                worst_closure, (t.poses.front().pos - t.poses.back().pos).norm());
        }
    }

    const std::vector<Eigen::Vector3d> ctrl = {
        {0, 1.5, 0}, {1, 1.5, 0}, {2, 1.5, 1.2}, {2.5, 1.5, 2.6}, {1.2, 1.5, 3.4},
        {0, 1.5, 4.0}};
    double worst_interp = 0.0;
    for (int s = 0; s + 3 < static_cast<int>(ctrl.size()); ++s) {
        worst_interp =
            std::max(worst_interp, (catmull_rom_eval(ctrl, s, 0.0) - ctrl[s + 1]).norm());
        worst_interp =
            std::max(worst_interp, (catmull_rom_eval(ctrl, s, 1.0) - ctrl[s + 2]).norm());
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "counts %s, worst closure %.3f m, spline interp %.1e",
                  counts_ok ? "ok" : "WRONG", worst_closure, worst_interp);
    report(11, "trajectory protocol",
           counts_ok && worst_closure <= 0.4 && worst_interp < 1e-6, buf);
}

}  // namespace

int main() {
    std::printf("panomem acceptance suite\n");
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    std::printf("%d of 11 criteria passed\n", 11 - g_failures);
    return g_failures;
}
