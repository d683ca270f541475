#include "panomem/synthworld.hpp"

#include <cmath>
#include <random>

#include "panomem/sphere.hpp"

namespace panomem {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Color {
    float r, g, b;
};

Color hsv(double h_deg, double s, double v) {
    const double h = std::fmod(h_deg / 60.0, 6.0);
    const int i = static_cast<int>(h);
    const double f = h - i;
    const double p = v * (1 - s), q = v * (1 - s * f), t = v * (1 - s * (1 - f));
    double r = 0, g = 0, b = 0;
    switch (i) {
        case 0: r = v; g = t; b = p; break;
        case 1: r = q; g = v; b = p; break;
        case 2: r = p; g = v; b = t; break;
        case 3: r = p; g = q; b = v; break;
        case 4: r = t; g = p; b = v; break;
        default: r = v; g = p; b = q; break;
    }
    return {static_cast<float>(r), static_cast<float>(g), static_cast<float>(b)};
}

Color palette(int idx) { return hsv(std::fmod(idx * 137.50776405, 360.0), 0.7, 0.85); }

template <typename ColorFn>
void sample_quad(std::vector<MemPoint>& out, const Eigen::Vector3d& origin,
                 const Eigen::Vector3d& edge_u, const Eigen::Vector3d& edge_v, double density,
                 ColorFn color) {
    const double lu = edge_u.norm(), lv = edge_v.norm();
    const int nu = std::max(1, static_cast<int>(std::lround(lu * std::sqrt(density))));
    const int nv = std::max(1, static_cast<int>(std::lround(lv * std::sqrt(density))));
    for (int j = 0; j < nv; ++j) {
        for (int i = 0; i < nu; ++i) {
            const Eigen::Vector3d p =
                origin + ((i + 0.5) / nu) * edge_u + ((j + 0.5) / nv) * edge_v;
            MemPoint mp;
            mp.x = static_cast<float>(p.x());
            mp.y = static_cast<float>(p.y());
            mp.z = static_cast<float>(p.z());
            const Color c = color(p);
            mp.r = c.r;
            mp.g = c.g;
            mp.b = c.b;
            out.push_back(mp);
        }
    }
}

void sample_box(std::vector<MemPoint>& out, const Eigen::Vector3d& lo,
                const Eigen::Vector3d& hi, double density, const Color& c) {
    const Eigen::Vector3d d = hi - lo;
    auto solid = [&](const Eigen::Vector3d&) { return c; };
    const Eigen::Vector3d ex(d.x(), 0, 0), ey(0, d.y(), 0), ez(0, 0, d.z());
    sample_quad(out, {lo.x(), hi.y(), lo.z()}, ex, ez, density, solid);             // top
    sample_quad(out, lo, ex, ey, density, solid);                                   // z = lo
    sample_quad(out, {lo.x(), lo.y(), hi.z()}, ex, ey, density, solid);             // z = hi
    sample_quad(out, lo, ez, ey, density, solid);                                   // x = lo
    sample_quad(out, {hi.x(), lo.y(), lo.z()}, ez, ey, density, solid);             // x = hi
}

void sample_sphere(std::vector<MemPoint>& out, const Eigen::Vector3d& center, double radius,
                   double density, const Color& c) {
    const int n = std::max(8, static_cast<int>(std::lround(4.0 * kPi * radius * radius * density)));
    const double ga = kPi * (3.0 - std::sqrt(5.0));  // golden angle
    for (int i = 0; i < n; ++i) {
        const double y = 1.0 - 2.0 * (i + 0.5) / n;
        const double r = std::sqrt(std::max(0.0, 1.0 - y * y));
        const double a = ga * i;
        MemPoint mp;
        mp.x = static_cast<float>(center.x() + radius * r * std::cos(a));
        mp.y = static_cast<float>(center.y() + radius * y);
        mp.z = static_cast<float>(center.z() + radius * r * std::sin(a));
        mp.r = c.r;
        mp.g = c.g;
        mp.b = c.b;
        out.push_back(mp);
    }
}

}  // namespace

std::vector<MemPoint> make_scene(const SceneSpec& spec) {
    if (!(spec.density > 0)) throw std::invalid_argument("density must be positive");
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    std::vector<MemPoint> pts;
    int color_idx = 0;

    // Checkered ground, one-meter tiles.
    const double half = 0.5 * spec.extent;
    const Color ca = palette(color_idx++), cb = palette(color_idx++);
    sample_quad(pts, {-half, 0.0, -half}, {spec.extent, 0, 0}, {0, 0, spec.extent}, spec.density,
                [&](const Eigen::Vector3d& p) {
                    const int tile = static_cast<int>(std::floor(p.x())) +
                                     static_cast<int>(std::floor(p.z()));
                    return ((tile % 2 + 2) % 2 == 0) ? ca : cb;
                });

    for (int b = 0; b < spec.box_count; ++b) {
        const double sx = 0.4 + 0.8 * u01(rng);
        const double sy = 0.4 + 0.8 * u01(rng);
        const double sz = 0.4 + 0.8 * u01(rng);
        const double cx = (u01(rng) - 0.5) * (spec.extent - 2.0);
        const double cz = (u01(rng) - 0.5) * (spec.extent - 2.0);
        sample_box(pts, {cx - sx / 2, 0.0, cz - sz / 2}, {cx + sx / 2, sy, cz + sz / 2},
                   spec.density, palette(color_idx++));
    }
    for (int s = 0; s < spec.sphere_count; ++s) {
        const double r = 0.3 + 0.5 * u01(rng);
        const double cx = (u01(rng) - 0.5) * (spec.extent - 2.0);
        const double cz = (u01(rng) - 0.5) * (spec.extent - 2.0);
        sample_sphere(pts, {cx, r + 0.1, cz}, r, spec.density, palette(color_idx++));
    }

    if (spec.enclosed) {
        const double h = spec.room_height;
        auto solid = [&](int i) {
            const Color c = palette(100 + i);
            return [c](const Eigen::Vector3d&) { return c; };
        };
        sample_quad(pts, {-half, h, -half}, {spec.extent, 0, 0}, {0, 0, spec.extent},
                    spec.density, solid(0));  // ceiling
        sample_quad(pts, {-half, 0, -half}, {spec.extent, 0, 0}, {0, h, 0}, spec.density,
                    solid(1));  // z = -half wall
        sample_quad(pts, {-half, 0, half}, {spec.extent, 0, 0}, {0, h, 0}, spec.density,
                    solid(2));
        sample_quad(pts, {-half, 0, -half}, {0, 0, spec.extent}, {0, h, 0}, spec.density,
                    solid(3));  // x = -half wall
        sample_quad(pts, {half, 0, -half}, {0, 0, spec.extent}, {0, h, 0}, spec.density,
                    solid(4));
    }
    return pts;
}

namespace {

// Smooth global palette over the direction from the room center, built
// from unit-direction components so the angular gradient stays bounded
// everywhere on the sphere (raw-longitude terms would oscillate without
// bound near the zenith).  Small gradients keep depth-competition between
// nearby surface samples within one 8-bit color quantum.
Color room1_field(const Eigen::Vector3d& p, const Eigen::Vector3d& center) {
    Eigen::Vector3d d = p - center;
    const double n = d.norm();
    d = n > 1e-12 ? Eigen::Vector3d(d / n) : Eigen::Vector3d(0, 0, 1);

    // gentle hue accents on the four corner-column directions
    double accent = 0.0;
    for (const double sx : {-1.0, 1.0})
        for (const double sz : {-1.0, 1.0}) {
            const double ax = sx * 0.7071, az = sz * 0.7071;
            const double q = (d.x() - ax) * (d.x() - ax) + (d.z() - az) * (d.z() - az);
            accent += (sx * sz) * 0.009 * std::exp(-q / 0.36);
        }

    Color c;
    c.r = static_cast<float>(0.55 + 0.017 * d.x() + 0.008 * d.y() + accent);
    c.g = static_cast<float>(0.50 + 0.017 * d.z() - 0.008 * d.y() - accent);
    c.b = static_cast<float>(0.45 + 0.012 * d.x() * d.z() + 0.010 * d.y());
    return c;
}

}  // namespace

std::vector<MemPoint> room1_scene(double density) {
    const double half = 4.0, h = 3.0, col = 1.0;
    const Eigen::Vector3d center(0.0, 0.5 * h, 0.0);
    auto field = [&](const Eigen::Vector3d& p) { return room1_field(p, center); };

    std::vector<MemPoint> pts;
    // Floor and ceiling, full extent.
    sample_quad(pts, {-half, 0, -half}, {2 * half, 0, 0}, {0, 0, 2 * half}, density, field);
    sample_quad(pts, {-half, h, -half}, {2 * half, 0, 0}, {0, 0, 2 * half}, density, field);

    // Walls, skipping the strips hidden behind the corner columns.
    const double lo = -half + col, hi = half - col, span = hi - lo;
    sample_quad(pts, {lo, 0, -half}, {span, 0, 0}, {0, h, 0}, density, field);  // z=-4
    sample_quad(pts, {lo, 0, half}, {span, 0, 0}, {0, h, 0}, density, field);   // z=+4
    sample_quad(pts, {-half, 0, lo}, {0, 0, span}, {0, h, 0}, density, field);  // x=-4
    sample_quad(pts, {half, 0, lo}, {0, 0, span}, {0, h, 0}, density, field);   // x=+4

    // Four flush corner columns (two interior faces each).
    for (const double sx : {-1.0, 1.0}) {
        for (const double sz : {-1.0, 1.0}) {
            const double cx = sx * half, cz = sz * half;       // corner
            const double fx = cx - sx * col, fz = cz - sz * col;  // inner planes
            // Face at x = fx, z from fz to the corner.
            sample_quad(pts, {fx, 0, fz}, {0, 0, cz - fz}, {0, h, 0}, density, field);
            // Face at z = fz, x from fx to the corner.
            sample_quad(pts, {fx, 0, fz}, {cx - fx, 0, 0}, {0, h, 0}, density, field);
        }
    }
    return pts;
}

double scene_visibility(std::span<const MemPoint> scene, const CameraPose& pose, int width,
                        int height, const RasterConfig& cfg) {
    return render_scene(scene, pose, width, height, cfg).covered_fraction;
}

}  // namespace panomem
