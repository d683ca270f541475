// panomem: panoramic 3D-memory engine CLI.
//
// Subcommands: scene, trajectory, convert, rotate, plucker, render,
// explore, eval, align.  Errors are reported as one-line JSON on stderr;
// exit code 0 means all outputs were written.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "panomem/config.hpp"
#include "panomem/explore.hpp"
#include "panomem/io.hpp"
#include "panomem/metrics.hpp"
#include "panomem/synthworld.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace panomem;

namespace {

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

std::string zero_pad(int v, int width) {
    std::string s = std::to_string(v);
    return std::string(width > static_cast<int>(s.size()) ? width - s.size() : 0, '0') + s;
}

// Pads the 2:1 panorama to a 16:9 frame with gray bars (the alternative
// generation size of 1024x576 for W=1024).
EquirectImage letterboxed(const EquirectImage& img) {
    const int out_h = img.width * 9 / 16;
    const int pad = (out_h - img.height) / 2;
    EquirectImage out(img.width, 1, 0.5f);
    out.height = out_h;
    out.rgb.assign(static_cast<std::size_t>(img.width) * out_h * 3, 0.5f);
    std::copy(img.rgb.begin(), img.rgb.end(),
              out.rgb.begin() + static_cast<std::size_t>(pad) * img.width * 3);
    return out;
}

void write_frame_png(const std::string& path, const EquirectImage& img, bool letterbox) {
    if (letterbox)
        write_png_rgb(path, letterboxed(img));
    else
        write_png_rgb(path, img);
}

RunConfig base_config(const std::string& config_path) {
    RunConfig cfg;
    if (!config_path.empty()) cfg = load_config_file(config_path, cfg);
    apply_env_overrides(cfg);
    return cfg;
}

SceneSpec scene_spec_from_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open scene spec " + path);
    const json j = json::parse(is);
    SceneSpec spec;
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("extent")) spec.extent = j.at("extent").get<double>();
    if (j.contains("box_count")) spec.box_count = j.at("box_count").get<int>();
    if (j.contains("sphere_count")) spec.sphere_count = j.at("sphere_count").get<int>();
    if (j.contains("density")) spec.density = j.at("density").get<double>();
    if (j.contains("enclosed")) spec.enclosed = j.at("enclosed").get<bool>();
    if (j.contains("room_height")) spec.room_height = j.at("room_height").get<double>();
    return spec;
}

json scene_spec_to_json(const SceneSpec& s) {
    return {{"seed", s.seed},         {"extent", s.extent},
            {"box_count", s.box_count}, {"sphere_count", s.sphere_count},
            {"density", s.density},   {"enclosed", s.enclosed},
            {"room_height", s.room_height}};
}

std::unique_ptr<GeneratorContract> make_generator(const std::string& name,
                                                  const std::vector<MemPoint>& scene,
                                                  double sigma, std::uint64_t seed,
                                                  const RasterConfig& raster) {
    if (name == "oracle") return oracle_generator(scene, sigma, seed, raster);
    if (name == "last-frame") return last_frame_generator(sigma, seed);
    if (name == "reprojection") return reprojection_generator(sigma, seed);
    if (name.rfind("memory:", 0) == 0) {
        auto fallback = make_generator(name.substr(7), scene, sigma, seed, raster);
        return memory_conditioned_generator(
            std::shared_ptr<GeneratorContract>(fallback.release()));
    }
    throw std::invalid_argument("unknown generator: " + name);
}

struct RunLock {
    fs::path path;
    explicit RunLock(const fs::path& dir) : path(dir / ".lock") {
        if (fs::exists(path))
            throw std::runtime_error("run directory is locked: " + path.string());
        std::ofstream os(path);
        os << "locked\n";
    }
    ~RunLock() {
        std::error_code ec;
        fs::remove(path, ec);
    }
};

struct ExploreOutputs {
    ExplorationRun run;
    double loop = 0.0;
};

ExploreOutputs run_and_write(const fs::path& out_dir, const std::vector<MemPoint>& scene,
                             const Trajectory& traj, const std::string& generator,
                             double sigma, const RunConfig& cfg, bool write_files) {
    const ExploreConfig ecfg = cfg.explore_config();
    auto gen = make_generator(generator, scene, sigma, cfg.seed, ecfg.raster);
    auto rec = oracle_reconstructor(cfg.stride, {}, Convention::WorldToCameraCv);

    const EquirectImage x0 =
        render_scene(scene, traj.poses.at(0), cfg.width, cfg.height, ecfg.raster).image;

    ExploreOutputs out{explore(x0, traj, *gen, *rec, ecfg), 0.0};
    out.loop = loop_consistency(x0, out.run.clips.back().back());
    if (!write_files) return out;

    write_frame_png((out_dir / "x0.png").string(), x0, cfg.letterbox);
    write_depth((out_dir / "x0_depth.f32").string(), x0);
    write_poses_json((out_dir / "poses.json").string(), traj.poses);

    const fs::path memdir = out_dir / "memory";
    fs::create_directories(memdir);
    std::vector<CameraPose> mem_poses;
    for (int id : out.run.memory.frame_ids()) {
        write_ply((memdir / ("frame_" + zero_pad(id, 5) + ".ply")).string(),
                  out.run.memory.frame_points(id));
        mem_poses.push_back(out.run.memory.frame_pose(id));
    }
    write_poses_json((memdir / "poses.json").string(), mem_poses);
    json mem_manifest = {{"frames", out.run.memory.frame_ids()},
                         {"confidence_threshold", cfg.confidence_threshold},
                         {"frame_cap", cfg.frame_cap}};
    std::ofstream(memdir / "manifest.json") << mem_manifest.dump(2) << "\n";

    for (std::size_t t = 0; t < out.run.clips.size(); ++t) {
        const fs::path step = out_dir / ("step_" + zero_pad(static_cast<int>(t) + 1, 3));
        fs::create_directories(step);
        for (std::size_t f = 0; f < out.run.clips[t].size(); ++f) {
            const std::string stem = zero_pad(static_cast<int>(f), 3);
            const EquirectImage& frame = out.run.clips[t][f];
            write_frame_png((step / ("frame_" + stem + ".png")).string(), frame,
                            cfg.letterbox);
            if (frame.has_depth())
                write_depth((step / ("frame_" + stem + "_depth.f32")).string(), frame);
            if (frame.has_mask())
                write_png_mask((step / ("frame_" + stem + "_mask.png")).string(),
                               frame.width, frame.height, frame.mask);
            const Reprojection& r = out.run.reprojections[t][f];
            write_frame_png((step / ("reproj_" + stem + ".png")).string(), r.image,
                            cfg.letterbox);
            write_depth((step / ("reproj_" + stem + "_depth.f32")).string(), r.image);
            write_png_mask((step / ("reproj_" + stem + "_mask.png")).string(),
                           r.image.width, r.image.height, r.image.mask);
        }
    }

    json manifest = {{"generator", generator},
                     {"sigma", sigma},
                     {"steps", out.run.clips.size()},
                     {"clip_len", cfg.clip_len},
                     {"width", cfg.width},
                     {"height", cfg.height},
                     {"frame_ids", out.run.frame_ids},
                     {"memory_points_after", out.run.memory_points_after},
                     {"loop_consistency", out.loop},
                     {"seed", cfg.seed}};
    std::ofstream(out_dir / "manifest.json") << manifest.dump(2) << "\n";
    return out;
}

std::vector<std::string> sorted_pngs(const std::string& dir) {
    std::vector<std::string> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        const std::string stem = e.path().stem().string();
        if (e.path().extension() == ".png" && !stem.ends_with("_mask"))
            files.push_back(e.path().string());
    }
    std::sort(files.begin(), files.end());
    return files;
}

int run_cli(int argc, char** argv) {
    // --config is resolved before flag parsing so flags can override it.
    std::string config_path;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") config_path = argv[i + 1];
    RunConfig cfg = base_config(config_path);

    CLI::App app{"panomem: panoramic 3D-memory engine"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand name
    app.add_option("--config", config_path, "JSON config file")->expected(1);
    app.add_option("--seed", cfg.seed, "global RNG seed");
    app.add_option("--width", cfg.width, "panorama width (W = 2H)");
    app.add_option("--height", cfg.height, "panorama height");
    app.add_option("--splat-radius", cfg.splat_radius, "raster splat radius");
    app.add_option("--stride", cfg.stride, "reconstructor pixel stride");
    app.add_option("--frame-cap", cfg.frame_cap, "retrieval frame cap");
    app.add_option("--retrieval-radius", cfg.retrieval_radius, "locality radius, m");
    app.add_option("--confidence-threshold", cfg.confidence_threshold,
                   "memory confidence threshold");
    app.add_option("--clip-len", cfg.clip_len, "frames per clip window (S+1)");
    app.add_flag("--letterbox", cfg.letterbox, "pad written PNGs to 16:9");

    // scene
    auto* sc = app.add_subcommand("scene", "generate a synthetic point scene");
    std::string sc_preset, sc_spec, sc_out, sc_spec_out;
    double sc_density = 2000.0;
    sc->add_option("--preset", sc_preset, "preset name (room-1)");
    sc->add_option("--spec", sc_spec, "SceneSpec JSON file");
    sc->add_option("--density", sc_density, "points per square meter");
    sc->add_option("--out", sc_out, "output PLY")->required();
    sc->add_option("--spec-out", sc_spec_out, "echo the SceneSpec as JSON");

    // trajectory
    auto* tj = app.add_subcommand("trajectory", "generate a camera trajectory");
    std::string tj_kind = "loop", tj_out, tj_controls, tj_actions;
    double tj_length = 20.0, tj_step = 0.4, tj_height = 1.5;
    tj->add_option("--kind", tj_kind, "loop | curve | walk");
    tj->add_option("--length", tj_length, "loop length, m");
    tj->add_option("--step", tj_step, "step size, m");
    tj->add_option("--height", tj_height, "camera height, m");
    tj->add_option("--controls", tj_controls, "JSON [[x,y,z],...] for curve");
    tj->add_option("--actions", tj_actions, "JSON action list for walk");
    tj->add_option("--out", tj_out, "output trajectory JSON")->required();

    // convert
    auto* cv = app.add_subcommand("convert", "panorama <-> cubemap");
    std::string cv_in, cv_out, cv_in_dir, cv_out_dir;
    int cv_face = 0;
    bool cv_nearest = false;
    cv->add_option("--in", cv_in, "input panorama PNG");
    cv->add_option("--out-dir", cv_out_dir, "output cubemap directory");
    cv->add_option("--face-size", cv_face, "cube face size (default W/4)");
    cv->add_option("--in-dir", cv_in_dir, "input cubemap directory");
    cv->add_option("--out", cv_out, "output panorama PNG");
    cv->add_flag("--nearest", cv_nearest, "nearest-neighbor sampling");

    // rotate
    auto* rt = app.add_subcommand("rotate", "spherical rotation of a panorama");
    std::string rt_in, rt_out;
    double rt_dphi = 0.0, rt_dtheta = 0.0;
    bool rt_nearest = false;
    rt->add_option("--in", rt_in)->required();
    rt->add_option("--out", rt_out)->required();
    rt->add_option("--dphi", rt_dphi, "longitude offset, degrees");
    rt->add_option("--dtheta", rt_dtheta, "latitude offset, degrees");
    rt->add_flag("--nearest", rt_nearest);

    // plucker
    auto* pl = app.add_subcommand("plucker", "per-pose spherical ray embeddings");
    std::string pl_poses, pl_out_dir;
    pl->add_option("--poses", pl_poses, "pose or trajectory JSON")->required();
    pl->add_option("--out-dir", pl_out_dir)->required();

    // render
    auto* rd = app.add_subcommand("render", "depth-buffered scene renders");
    std::string rd_scene, rd_poses, rd_out_dir;
    bool rd_cubemap_path = false;
    rd->add_option("--scene", rd_scene, "scene PLY")->required();
    rd->add_option("--poses", rd_poses, "pose or trajectory JSON")->required();
    rd->add_option("--out-dir", rd_out_dir)->required();
    rd->add_flag("--cubemap-path", rd_cubemap_path, "render via pinhole faces");

    // explore
    auto* ex = app.add_subcommand("explore", "run the evolve-generate-reconstruct loop");
    std::string ex_scene, ex_traj, ex_out, ex_gen = "oracle";
    double ex_sigma = 0.0;
    bool ex_compare = false;
    ex->add_option("--scene", ex_scene, "hidden scene PLY")->required();
    ex->add_option("--trajectory", ex_traj, "trajectory JSON")->required();
    ex->add_option("--out", ex_out, "run output directory")->required();
    ex->add_option("--generator", ex_gen,
                   "oracle | last-frame | reprojection | memory:<fallback>");
    ex->add_option("--sigma", ex_sigma, "generator pixel noise");
    ex->add_flag("--compare", ex_compare,
                 "also run the pure fallback and emit a comparative loop report");

    // eval
    auto* ev = app.add_subcommand("eval", "metric reports and pose accuracy");
    std::string ev_a, ev_b, ev_metrics = "mse,psnr,ssim", ev_out, ev_csv;
    std::string ev_est, ev_gt;
    double ev_tau = 30.0;
    bool ev_min_errors = false;
    ev->add_option("--dir-a", ev_a, "frame directory A (ground truth)");
    ev->add_option("--dir-b", ev_b, "frame directory B (generated)");
    ev->add_option("--metrics", ev_metrics, "comma-separated metric names");
    ev->add_option("--out", ev_out, "report JSON path");
    ev->add_option("--csv", ev_csv, "report CSV path");
    ev->add_option("--poses-est", ev_est, "estimated poses JSON");
    ev->add_option("--poses-gt", ev_gt, "ground-truth poses JSON");
    ev->add_option("--tau-max", ev_tau, "pose AUC threshold cap, degrees");
    ev->add_flag("--min-errors", ev_min_errors,
                 "use the literal min-over-errors AUC combination");

    // align
    auto* al = app.add_subcommand("align", "similarity-align estimated poses");
    std::string al_est, al_gt, al_out;
    bool al_no_scale = false, al_convert = false;
    al->add_option("--est", al_est)->required();
    al->add_option("--gt", al_gt)->required();
    al->add_option("--out", al_out, "transform JSON")->required();
    al->add_flag("--no-scale", al_no_scale);
    al->add_flag("--convert", al_convert, "convert conventions when they differ");

    CLI11_PARSE(app, argc, argv);
    cfg.validate();

    if (sc->parsed()) {
        std::vector<MemPoint> pts;
        SceneSpec spec;
        if (!sc_preset.empty()) {
            if (sc_preset != "room-1")
                throw std::invalid_argument("unknown preset: " + sc_preset);
            pts = room1_scene(sc_density);
            spec.density = sc_density;
            spec.enclosed = true;
        } else if (!sc_spec.empty()) {
            spec = scene_spec_from_json(sc_spec);
            pts = make_scene(spec);
        } else {
            throw std::invalid_argument("scene needs --preset or --spec");
        }
        write_ply(sc_out, pts);
        if (!sc_spec_out.empty())
            std::ofstream(sc_spec_out) << scene_spec_to_json(spec).dump(2) << "\n";
        std::cout << "scene: " << pts.size() << " points -> " << sc_out << "\n";
        return 0;
    }

    if (tj->parsed()) {
        Trajectory traj;
        if (tj_kind == "loop") {
            traj = gen_polyline_loop(tj_length, tj_step, cfg.seed, tj_height);
        } else if (tj_kind == "curve") {
            if (tj_controls.empty()) throw std::invalid_argument("curve needs --controls");
            std::ifstream is(tj_controls);
            if (!is) throw std::invalid_argument("cannot open " + tj_controls);
            std::vector<Eigen::Vector3d> ctrl;
            for (const auto& p : json::parse(is))
                ctrl.emplace_back(p.at(0).get<double>(), p.at(1).get<double>(),
                                  p.at(2).get<double>());
            traj = catmull_rom(ctrl, tj_step);
        } else if (tj_kind == "walk") {
            if (tj_actions.empty()) throw std::invalid_argument("walk needs --actions");
            std::ifstream is(tj_actions);
            if (!is) throw std::invalid_argument("cannot open " + tj_actions);
            std::vector<Action> actions;
            for (const auto& a : json::parse(is)) {
                const std::string kind = a.at("kind").get<std::string>();
                const double mag = a.at("magnitude").get<double>();
                actions.push_back(kind == "forward" ? Action::forward(mag)
                                                    : Action::rotate(mag));
            }
            traj = action_walk(actions,
                               CameraPose({0, tj_height, 0}, Eigen::Quaterniond::Identity()));
        } else {
            throw std::invalid_argument("unknown trajectory kind: " + tj_kind);
        }
        traj.seed = cfg.seed;
        write_trajectory_json(tj_out, traj);
        std::cout << "trajectory: " << traj.poses.size() << " poses -> " << tj_out << "\n";
        return 0;
    }

    if (cv->parsed()) {
        const Sampling s = cv_nearest ? Sampling::Nearest : Sampling::Bilinear;
        static const char* names[6] = {"front", "back", "left", "right", "top", "bottom"};
        if (!cv_in.empty()) {
            const EquirectImage pano = read_png_rgb(cv_in);
            if (pano.width != 2 * pano.height)
                throw std::invalid_argument("input is not a 2:1 equirect panorama");
            const int F = cv_face > 0 ? cv_face : pano.width / 4;
            const CubeMap cm = pano_to_cubemap(pano, F, s);
            fs::create_directories(cv_out_dir);
            for (int f = 0; f < 6; ++f)
                write_png_rgb((fs::path(cv_out_dir) / (std::string(names[f]) + ".png"))
                                  .string(),
                              F, F, cm.faces[f]);
            std::cout << "cubemap: 6 faces of " << F << "px -> " << cv_out_dir << "\n";
        } else if (!cv_in_dir.empty()) {
            CubeMap cm;
            for (int f = 0; f < 6; ++f) {
                const EquirectImage face = read_png_rgb(
                    (fs::path(cv_in_dir) / (std::string(names[f]) + ".png")).string());
                if (face.width != face.height)
                    throw std::invalid_argument("cube faces must be square");
                if (f == 0) cm.face_size = face.width;
                if (face.width != cm.face_size)
                    throw std::invalid_argument("cube faces disagree in size");
                cm.faces[f] = face.rgb;
            }
            const EquirectImage pano = cubemap_to_pano(cm, cfg.width, cfg.height, s);
            write_png_rgb(cv_out, pano);
            std::cout << "panorama: " << cfg.width << "x" << cfg.height << " -> " << cv_out
                      << "\n";
        } else {
            throw std::invalid_argument("convert needs --in or --in-dir");
        }
        return 0;
    }

    if (rt->parsed()) {
        const EquirectImage pano = read_png_rgb(rt_in);
        if (pano.width != 2 * pano.height)
            throw std::invalid_argument("input is not a 2:1 equirect panorama");
        const EquirectImage out =
            rotate_pano(pano, rt_dphi * kDegToRad, rt_dtheta * kDegToRad,
                        rt_nearest ? Sampling::Nearest : Sampling::Bilinear);
        write_png_rgb(rt_out, out);
        return 0;
    }

    if (pl->parsed()) {
        const std::vector<CameraPose> poses = read_poses_json(pl_poses);
        fs::create_directories(pl_out_dir);
        const auto fields = plucker_field(poses, cfg.width, cfg.height);
        for (std::size_t i = 0; i < fields.size(); ++i)
            write_plucker((fs::path(pl_out_dir) /
                           (zero_pad(static_cast<int>(i), 4) + ".plk"))
                              .string(),
                          fields[i]);
        std::cout << "plucker: " << fields.size() << " fields -> " << pl_out_dir << "\n";
        return 0;
    }

    if (rd->parsed()) {
        const std::vector<MemPoint> scene = read_ply(rd_scene);
        const std::vector<CameraPose> poses = read_poses_json(rd_poses);
        fs::create_directories(rd_out_dir);
        RasterConfig rcfg = cfg.raster_config();
        rcfg.path = rd_cubemap_path ? RasterPath::Cubemap : RasterPath::Direct;
        for (std::size_t i = 0; i < poses.size(); ++i) {
            const Reprojection r =
                render_scene(scene, poses[i], cfg.width, cfg.height, rcfg);
            const std::string stem = zero_pad(static_cast<int>(i), 4);
            const fs::path base = fs::path(rd_out_dir) / stem;
            write_frame_png(base.string() + ".png", r.image, cfg.letterbox);
            write_depth(base.string() + "_depth.f32", r.image);
            write_png_mask(base.string() + "_mask.png", r.image.width, r.image.height,
                           r.image.mask);
            std::cout << "frame " << stem << " covered_fraction " << r.covered_fraction
                      << "\n";
        }
        return 0;
    }

    if (ex->parsed()) {
        const std::vector<MemPoint> scene = read_ply(ex_scene);
        const Trajectory traj = read_trajectory_json(ex_traj);
        fs::create_directories(ex_out);
        RunLock lock(ex_out);
        const ExploreOutputs main_run =
            run_and_write(ex_out, scene, traj, ex_gen, ex_sigma, cfg, true);
        std::cout << "explore: " << main_run.run.clips.size() << " steps, loop_consistency "
                  << main_run.loop << "\n";
        if (ex_compare) {
            const std::string fallback =
                ex_gen.rfind("memory:", 0) == 0 ? ex_gen.substr(7) : ex_gen;
            const std::string other =
                ex_gen.rfind("memory:", 0) == 0 ? fallback : "memory:" + ex_gen;
            const ExploreOutputs alt =
                run_and_write(ex_out, scene, traj, other, ex_sigma, cfg, false);
            json cmpj = {{"generator", ex_gen},
                         {"loop_consistency", main_run.loop},
                         {"compare_generator", other},
                         {"compare_loop_consistency", alt.loop}};
            std::ofstream(fs::path(ex_out) / "loop_report.json") << cmpj.dump(2) << "\n";
            std::cout << "compare: " << other << " loop_consistency " << alt.loop << "\n";
        }
        return 0;
    }

    if (ev->parsed()) {
        if (!ev_est.empty() || !ev_gt.empty()) {
            if (ev_est.empty() || ev_gt.empty())
                throw std::invalid_argument("pose eval needs both --poses-est and --poses-gt");
            const PoseErrors errs =
                pose_errors(read_poses_json(ev_est), read_poses_json(ev_gt));
            const double auc =
                pose_auc(errs, ev_tau,
                         ev_min_errors ? AucCombine::MinOverErrors : AucCombine::BothWithin);
            json j = {{"auc", auc}, {"tau_max", ev_tau}, {"pairs", errs.rra.size()},
                      {"rra", errs.rra}, {"rta", errs.rta}};
            if (!ev_out.empty())
                std::ofstream(ev_out) << j.dump(2) << "\n";
            std::cout << j.dump() << "\n";
            return 0;
        }
        if (ev_a.empty() || ev_b.empty())
            throw std::invalid_argument("eval needs --dir-a/--dir-b or pose files");
        const auto files_a = sorted_pngs(ev_a);
        const auto files_b = sorted_pngs(ev_b);
        if (files_a.size() != files_b.size() || files_a.empty())
            throw std::invalid_argument("frame directories differ in size or are empty");
        std::vector<EquirectImage> frames_a, frames_b;
        for (const auto& f : files_a) frames_a.push_back(read_png_rgb(f));
        for (const auto& f : files_b) frames_b.push_back(read_png_rgb(f));
        std::vector<std::string> names;
        for (std::size_t pos = 0; pos < ev_metrics.size();) {
            const std::size_t comma = ev_metrics.find(',', pos);
            names.push_back(ev_metrics.substr(
                pos, comma == std::string::npos ? std::string::npos : comma - pos));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        const MetricReport rep =
            report(frames_a, frames_b, names, cfg.psnr_cap, cfg.ssim_window);
        const std::string j = report_to_json(rep);
        if (!ev_out.empty()) std::ofstream(ev_out) << j << "\n";
        if (!ev_csv.empty()) std::ofstream(ev_csv) << report_to_csv(rep);
        std::cout << j << "\n";
        return 0;
    }

    if (al->parsed()) {
        std::vector<CameraPose> est = read_poses_json(al_est);
        const std::vector<CameraPose> gt = read_poses_json(al_gt);
        if (est.size() != gt.size())
            throw std::invalid_argument("pose count mismatch between est and gt");
        for (std::size_t i = 0; i < est.size(); ++i) {
            if (est[i].convention != gt[i].convention) {
                if (!al_convert)
                    throw std::invalid_argument(
                        "pose conventions differ; pass --convert to reconcile");
                est[i] = convert_convention(est[i], gt[i].convention);
            }
        }
        std::vector<Eigen::Vector3d> src, dst;
        for (const auto& p : est) src.push_back(p.center());
        for (const auto& p : gt) dst.push_back(p.center());
        const SimilarityTransform t = umeyama_align(src, dst, !al_no_scale);

        std::vector<double> residuals;
        double rms = 0.0;
        for (std::size_t i = 0; i < src.size(); ++i) {
            const double r = (dst[i] - t.apply(src[i])).norm();
            residuals.push_back(r);
            rms += r * r;
        }
        rms = std::sqrt(rms / src.size());
        const Eigen::Quaterniond q(t.rotation);
        json j = {{"scale", t.scale},
                  {"quat", {q.w(), q.x(), q.y(), q.z()}},
                  {"rotation",
                   {{t.rotation(0, 0), t.rotation(0, 1), t.rotation(0, 2)},
                    {t.rotation(1, 0), t.rotation(1, 1), t.rotation(1, 2)},
                    {t.rotation(2, 0), t.rotation(2, 1), t.rotation(2, 2)}}},
                  {"translation", {t.translation.x(), t.translation.y(), t.translation.z()}},
                  {"rms_residual", rms},
                  {"per_frame_residuals", residuals}};
        std::ofstream(al_out) << j.dump(2) << "\n";
        std::cout << j.dump() << "\n";
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const std::exception& e) {
        json err = {{"error", "command failed"}, {"detail", e.what()}};
        std::cerr << err.dump() << "\n";
        return 1;
    }
}
