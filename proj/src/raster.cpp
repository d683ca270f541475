#include "panomem/raster.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace panomem {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kHalfPi = 0.5 * kPi;
constexpr std::int64_t kNoDepth = std::numeric_limits<std::int64_t>::max();

struct ProjEntry {
    int iu = 0;
    int iv = 0;
    std::int64_t qdepth = kNoDepth;
    float depth = 0.0f;
    bool ok = false;
};

// Camera-frame transform shared by every raster path.  Depth is the metric
// distance to the point; the pixel is the nearest center to the projected
// continuous coordinate (u wraps, v clamps).
inline ProjEntry project_point(const MemPoint& pt, const Eigen::Quaterniond& world_to_cam,
                               const Eigen::Vector3d& center, int width, int height) {
    ProjEntry e;
    const Eigen::Vector3d v(pt.x - center.x(), pt.y - center.y(), pt.z - center.z());
    const Eigen::Vector3d d = world_to_cam * v;
    const double depth = std::sqrt(d.x() * d.x() + d.y() * d.y() + d.z() * d.z());
    if (!(depth > 1e-12) || !std::isfinite(depth)) return e;

    const double theta = std::asin(std::clamp(d.y() / depth, -1.0, 1.0));
    const double phi = (std::abs(d.x()) < 1e-300 && std::abs(d.z()) < 1e-300)
                           ? 0.0
                           : std::atan2(d.x(), d.z());
    const double u = width * (phi + kPi) / kTwoPi;
    const double vpix = height * (kHalfPi - theta) / kPi;

    long iu = std::lround(u);
    if (iu >= width) iu -= width;
    if (iu < 0) iu += width;
    e.iu = static_cast<int>(iu);
    e.iv = static_cast<int>(std::clamp(std::lround(vpix), 0L, static_cast<long>(height - 1)));
    e.depth = static_cast<float>(depth);
    e.qdepth = static_cast<std::int64_t>(std::floor(depth * 1e9));
    e.ok = true;
    return e;
}

struct DepthBuffer {
    std::vector<std::int64_t> qdepth;
    std::vector<std::int32_t> idx;
    std::vector<float> depth;

    explicit DepthBuffer(std::size_t n)
        : qdepth(n, kNoDepth), idx(n, -1), depth(n, 0.0f) {}

    inline void offer(std::size_t px, std::int64_t qd, std::int32_t k, float d) {
        if (qd < qdepth[px] || (qd == qdepth[px] && k < idx[px])) {
            qdepth[px] = qd;
            idx[px] = k;
            depth[px] = d;
        }
    }
};

void splat_entry(DepthBuffer& buf, const ProjEntry& e, std::int32_t k, int width, int height,
                 int radius, int row_lo, int row_hi) {
    const int h = radius - 1;
    for (int dv = -h; dv <= h; ++dv) {
        const int row = e.iv + dv;
        if (row < row_lo || row >= row_hi || row < 0 || row >= height) continue;
        for (int du = -h; du <= h; ++du) {
            int col = e.iu + du;
            if (col < 0) col += width;
            if (col >= width) col -= width;
            buf.offer(static_cast<std::size_t>(row) * width + col, e.qdepth, k, e.depth);
        }
    }
}

Reprojection finalize(std::span<const MemPoint> points, DepthBuffer& buf, int width,
                      int height, const RasterConfig& cfg) {
    Reprojection out;
    out.image = EquirectImage(width, height);
    out.image.depth.assign(out.image.pixel_count(), 0.0f);
    out.image.mask.assign(out.image.pixel_count(), 0);

    std::size_t covered = 0;
#pragma omp parallel for schedule(static) reduction(+ : covered)
    for (int j = 0; j < height; ++j) {
        for (int i = 0; i < width; ++i) {
            const std::size_t px = static_cast<std::size_t>(j) * width + i;
            float* rgb = out.image.px(i, j);
            if (buf.idx[px] >= 0) {
                const MemPoint& p = points[buf.idx[px]];
                rgb[0] = p.r;
                rgb[1] = p.g;
                rgb[2] = p.b;
                out.image.depth[px] = buf.depth[px];
                out.image.mask[px] = 1;
                ++covered;
            } else {
                rgb[0] = cfg.background[0];
                rgb[1] = cfg.background[1];
                rgb[2] = cfg.background[2];
            }
        }
    }
    out.covered_fraction = static_cast<double>(covered) / out.image.pixel_count();
    return out;
}

void validate_raster_args(int width, int height, const RasterConfig& cfg) {
    if (width != 2 * height || height < 1)
        throw std::invalid_argument("target view must satisfy W = 2H");
    if (cfg.splat_radius < 1) throw std::invalid_argument("splat_radius must be >= 1");
}

}  // namespace

Reprojection reproject_serial(std::span<const MemPoint> points, const CameraPose& pose,
                              int width, int height, const RasterConfig& cfg) {
    validate_raster_args(width, height, cfg);
    const Eigen::Quaterniond w2c = pose.world_rotation().conjugate();
    const Eigen::Vector3d c = pose.center();

    DepthBuffer buf(static_cast<std::size_t>(width) * height);
    for (std::size_t k = 0; k < points.size(); ++k) {
        const ProjEntry e = project_point(points[k], w2c, c, width, height);
        if (!e.ok) continue;
        splat_entry(buf, e, static_cast<std::int32_t>(k), width, height, cfg.splat_radius, 0,
                    height);
    }
    return finalize(points, buf, width, height, cfg);
}

Reprojection reproject(std::span<const MemPoint> points, const CameraPose& pose, int width,
                       int height, const RasterConfig& cfg) {
    validate_raster_args(width, height, cfg);
    const Eigen::Quaterniond w2c = pose.world_rotation().conjugate();
    const Eigen::Vector3d c = pose.center();
    const std::int64_t n = static_cast<std::int64_t>(points.size());

    std::vector<ProjEntry> proj(points.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < n; ++k)
        proj[k] = project_point(points[k], w2c, c, width, height);

    // Row bands: each band owns a row range and is reduced by one thread, so
    // the per-pixel (qdepth, index) minimum needs no synchronization.
    const int band_rows = 16;
    const int nbands = (height + band_rows - 1) / band_rows;
    const int halo = cfg.splat_radius - 1;

    std::vector<std::atomic<std::uint32_t>> counts(nbands);
    for (auto& a : counts) a.store(0, std::memory_order_relaxed);
    auto band_range = [&](const ProjEntry& e, int& b0, int& b1) {
        b0 = std::max(0, (e.iv - halo)) / band_rows;
        b1 = std::min(height - 1, (e.iv + halo)) / band_rows;
    };
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < n; ++k) {
        if (!proj[k].ok) continue;
        int b0, b1;
        band_range(proj[k], b0, b1);
        for (int b = b0; b <= b1; ++b) counts[b].fetch_add(1, std::memory_order_relaxed);
    }

    std::vector<std::uint32_t> offsets(nbands + 1, 0);
    for (int b = 0; b < nbands; ++b) offsets[b + 1] = offsets[b] + counts[b].load();
    std::vector<std::int32_t> binned(offsets[nbands]);
    std::vector<std::atomic<std::uint32_t>> cursor(nbands);
    for (int b = 0; b < nbands; ++b) cursor[b].store(offsets[b], std::memory_order_relaxed);
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < n; ++k) {
        if (!proj[k].ok) continue;
        int b0, b1;
        band_range(proj[k], b0, b1);
        for (int b = b0; b <= b1; ++b)
            binned[cursor[b].fetch_add(1, std::memory_order_relaxed)] =
                static_cast<std::int32_t>(k);
    }

    DepthBuffer buf(static_cast<std::size_t>(width) * height);
#pragma omp parallel for schedule(dynamic)
    for (int b = 0; b < nbands; ++b) {
        const int row_lo = b * band_rows;
        const int row_hi = std::min(height, row_lo + band_rows);
        for (std::uint32_t s = offsets[b]; s < offsets[b + 1]; ++s) {
            const std::int32_t k = binned[s];
            splat_entry(buf, proj[k], k, width, height, cfg.splat_radius, row_lo, row_hi);
        }
    }
    return finalize(points, buf, width, height, cfg);
}

Reprojection reproject_via_cubemap(std::span<const MemPoint> points, const CameraPose& pose,
                                   int width, int height, const RasterConfig& cfg) {
    validate_raster_args(width, height, cfg);
    if (width % 4 != 0) throw std::invalid_argument("cubemap path needs W divisible by 4");
    const int F = width / 4;
    const double fc = 0.5 * (F - 1);
    const double focal = 0.5 * F;
    const Eigen::Quaterniond w2c = pose.world_rotation().conjugate();
    const Eigen::Vector3d c = pose.center();

    std::array<DepthBuffer, 6> face_buf{
        DepthBuffer(static_cast<std::size_t>(F) * F), DepthBuffer(static_cast<std::size_t>(F) * F),
        DepthBuffer(static_cast<std::size_t>(F) * F), DepthBuffer(static_cast<std::size_t>(F) * F),
        DepthBuffer(static_cast<std::size_t>(F) * F), DepthBuffer(static_cast<std::size_t>(F) * F)};

    const int h = cfg.splat_radius - 1;
    for (std::size_t k = 0; k < points.size(); ++k) {
        const MemPoint& pt = points[k];
        const Eigen::Vector3d v(pt.x - c.x(), pt.y - c.y(), pt.z - c.z());
        const Eigen::Vector3d d = w2c * v;
        const double depth = std::sqrt(d.x() * d.x() + d.y() * d.y() + d.z() * d.z());
        if (!(depth > 1e-12) || !std::isfinite(depth)) continue;

        const CubeFace f = face_for_direction(d);
        const FaceFrame& fr = face_frame(f);
        const double t = d.dot(fr.axis);
        if (!(t > 0)) continue;
        const double a = fc + focal * d.dot(fr.right) / t;
        const double b = fc + focal * d.dot(fr.down) / t;
        const int ia = static_cast<int>(std::clamp(std::lround(a), 0L, static_cast<long>(F - 1)));
        const int ib = static_cast<int>(std::clamp(std::lround(b), 0L, static_cast<long>(F - 1)));
        const std::int64_t qd = static_cast<std::int64_t>(std::floor(depth * 1e9));

        DepthBuffer& buf = face_buf[static_cast<int>(f)];
        for (int dv = -h; dv <= h; ++dv) {
            const int row = ib + dv;
            if (row < 0 || row >= F) continue;
            for (int du = -h; du <= h; ++du) {
                const int col = ia + du;
                if (col < 0 || col >= F) continue;
                buf.offer(static_cast<std::size_t>(row) * F + col, qd,
                          static_cast<std::int32_t>(k), static_cast<float>(depth));
            }
        }
    }

    // Compose the six faces back to the equirectangular target (nearest face
    // pixel, carrying depth and mask).
    Reprojection out;
    out.image = EquirectImage(width, height);
    out.image.depth.assign(out.image.pixel_count(), 0.0f);
    out.image.mask.assign(out.image.pixel_count(), 0);
    std::size_t covered = 0;
#pragma omp parallel for schedule(static) reduction(+ : covered)
    for (int j = 0; j < height; ++j) {
        for (int i = 0; i < width; ++i) {
            const Eigen::Vector3d d = dir_from_sph(
                pix_to_sph({static_cast<double>(i), static_cast<double>(j)}, width, height));
            const CubeFace f = face_for_direction(d);
            const FaceFrame& fr = face_frame(f);
            const double t = d.dot(fr.axis);
            const double a = fc + focal * d.dot(fr.right) / t;
            const double b = fc + focal * d.dot(fr.down) / t;
            const int ia =
                static_cast<int>(std::clamp(std::lround(a), 0L, static_cast<long>(F - 1)));
            const int ib =
                static_cast<int>(std::clamp(std::lround(b), 0L, static_cast<long>(F - 1)));
            const DepthBuffer& buf = face_buf[static_cast<int>(f)];
            const std::size_t fpx = static_cast<std::size_t>(ib) * F + ia;
            const std::size_t px = static_cast<std::size_t>(j) * width + i;
            float* rgb = out.image.px(i, j);
            if (buf.idx[fpx] >= 0) {
                const MemPoint& p = points[buf.idx[fpx]];
                rgb[0] = p.r;
                rgb[1] = p.g;
                rgb[2] = p.b;
                out.image.depth[px] = buf.depth[fpx];
                out.image.mask[px] = 1;
                ++covered;
            } else {
                rgb[0] = cfg.background[0];
                rgb[1] = cfg.background[1];
                rgb[2] = cfg.background[2];
            }
        }
    }
    out.covered_fraction = static_cast<double>(covered) / out.image.pixel_count();
    return out;
}

Reprojection render_scene(std::span<const MemPoint> scene, const CameraPose& pose, int width,
                          int height, const RasterConfig& cfg) {
    if (cfg.path == RasterPath::Cubemap)
        return reproject_via_cubemap(scene, pose, width, height, cfg);
    return reproject(scene, pose, width, height, cfg);
}

std::vector<MemPoint> unproject(const EquirectImage& img, const CameraPose& pose, int stride,
                                const std::vector<float>* confidence) {
    if (!img.has_depth()) throw std::invalid_argument("unproject requires a depth channel");
    if (stride < 1) throw std::invalid_argument("stride must be >= 1");
    if (confidence && confidence->size() != img.pixel_count())
        throw std::invalid_argument("confidence raster size mismatch");

    const Eigen::Quaterniond q = pose.world_rotation();
    const Eigen::Vector3d c = pose.center();
    std::vector<MemPoint> pts;
    for (int j = 0; j < img.height; j += stride) {
        for (int i = 0; i < img.width; i += stride) {
            const std::size_t px = static_cast<std::size_t>(j) * img.width + i;
            const float depth = img.depth[px];
            const bool masked = img.has_mask() ? img.mask[px] != 0
                                               : (std::isfinite(depth) && depth > 0.0f);
            if (!masked) continue;
            const Eigen::Vector3d d =
                q * dir_from_sph(pix_to_sph({static_cast<double>(i), static_cast<double>(j)},
                                            img.width, img.height));
            const Eigen::Vector3d p = c + static_cast<double>(depth) * d;
            MemPoint mp;
            mp.x = static_cast<float>(p.x());
            mp.y = static_cast<float>(p.y());
            mp.z = static_cast<float>(p.z());
            const float* rgb = img.px(i, j);
            mp.r = rgb[0];
            mp.g = rgb[1];
            mp.b = rgb[2];
            mp.confidence = confidence ? (*confidence)[px] : 1.0f;
            pts.push_back(mp);
        }
    }
    return pts;
}

}  // namespace panomem
