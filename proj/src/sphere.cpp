#include "panomem/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace panomem {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kHalfPi = 0.5 * kPi;

void require_dims(int width, int height) {
    if (width < 2 || height < 1) throw std::invalid_argument("panorama dimensions too small");
}

void require_pano(const EquirectImage& img) {
    if (img.width != 2 * img.height || img.height < 1)
        throw std::invalid_argument("equirectangular image must satisfy W = 2H");
    if (img.rgb.size() != img.pixel_count() * 3)
        throw std::invalid_argument("rgb buffer size mismatch");
}

}  // namespace

double wrap_phi(double phi) {
    double w = phi - kTwoPi * std::floor((phi + kPi) / kTwoPi);
    if (w >= kPi) w -= kTwoPi;  // guards against floor rounding at the seam
    if (w < -kPi) w += kTwoPi;
    return w;
}

double wrap_latitude(double theta) {
    if (theta >= -kHalfPi && theta <= kHalfPi) return theta;
    double t = std::fmod(theta + kHalfPi, kPi);
    if (t < 0) t += kPi;
    return t - kHalfPi;
}

double wrap_pixel_u(double u, int width) {
    double w = std::fmod(u, static_cast<double>(width));
    if (w < 0) w += width;
    if (w >= width) w = 0.0;
    return w;
}

PixCoord sph_to_pix(const SphCoord& s, int width, int height) {
    require_dims(width, height);
    if (!std::isfinite(s.phi) || !std::isfinite(s.theta))
        throw std::invalid_argument("non-finite spherical coordinate");
    const double phi = wrap_phi(s.phi);
    const double theta = std::clamp(s.theta, -kHalfPi, kHalfPi);
    PixCoord p;
    p.u = width * (phi + kPi) / kTwoPi;
    p.v = height * (kHalfPi - theta) / kPi;
    if (p.u >= width) p.u = 0.0;
    return p;
}

SphCoord pix_to_sph(const PixCoord& p, int width, int height) {
    require_dims(width, height);
    if (!std::isfinite(p.u) || !std::isfinite(p.v))
        throw std::invalid_argument("non-finite pixel coordinate");
    const double u = wrap_pixel_u(p.u, width);
    const double v = std::clamp(p.v, 0.0, static_cast<double>(height));
    SphCoord s;
    s.phi = kTwoPi * u / width - kPi;
    s.theta = kHalfPi - kPi * v / height;
    return s;
}

PixCoord sph_rotate(const PixCoord& p, double dphi, double dtheta, int width, int height) {
    SphCoord s = pix_to_sph(p, width, height);
    s.phi = wrap_phi(s.phi + dphi);
    s.theta = wrap_latitude(s.theta + dtheta);
    return sph_to_pix(s, width, height);
}

Eigen::Vector3d dir_from_sph(const SphCoord& s) {
    const double ct = std::cos(s.theta);
    return {ct * std::sin(s.phi), std::sin(s.theta), ct * std::cos(s.phi)};
}

SphCoord sph_from_dir(const Eigen::Vector3d& d) {
    const double n = d.norm();
    if (!(n > 0.0) || !std::isfinite(n))
        throw std::invalid_argument("zero or non-finite direction");
    SphCoord s;
    s.theta = std::asin(std::clamp(d.y() / n, -1.0, 1.0));
    if (std::abs(d.x()) < 1e-300 && std::abs(d.z()) < 1e-300) {
        s.phi = 0.0;  // pole: phi canonicalized
    } else {
        s.phi = std::atan2(d.x(), d.z());
        if (s.phi >= kPi) s.phi = -kPi;
    }
    return s;
}

void sample_pano(const EquirectImage& img, double u, double v, Sampling sampling, float out[3]) {
    const int w = img.width, h = img.height;
    if (sampling == Sampling::Nearest) {
        long iu = std::lround(u);
        long iv = std::lround(v);
        iu = static_cast<long>(wrap_pixel_u(static_cast<double>(iu), w));
        iv = std::clamp(iv, 0L, static_cast<long>(h - 1));
        const float* s = img.px(static_cast<int>(iu), static_cast<int>(iv));
        out[0] = s[0];
        out[1] = s[1];
        out[2] = s[2];
        return;
    }
    const double vc = std::clamp(v, 0.0, static_cast<double>(h - 1));
    const double uw = wrap_pixel_u(u, w);
    const int u0 = static_cast<int>(std::floor(uw));
    const int v0 = static_cast<int>(std::floor(vc));
    const int u1 = (u0 + 1) % w;
    const int v1 = std::min(v0 + 1, h - 1);
    const double fu = uw - u0;
    const double fv = vc - v0;
    const float* p00 = img.px(u0, v0);
    const float* p10 = img.px(u1, v0);
    const float* p01 = img.px(u0, v1);
    const float* p11 = img.px(u1, v1);
    for (int c = 0; c < 3; ++c) {
        const double top = p00[c] * (1.0 - fu) + p10[c] * fu;
        const double bot = p01[c] * (1.0 - fu) + p11[c] * fu;
        out[c] = static_cast<float>(top * (1.0 - fv) + bot * fv);
    }
}

namespace {

void rotate_pano_rows(const EquirectImage& img, EquirectImage& out, double dphi, double dtheta,
                      Sampling sampling, int j0, int j1) {
    const int w = img.width, h = img.height;
    for (int j = j0; j < j1; ++j) {
        for (int i = 0; i < w; ++i) {
            SphCoord s = pix_to_sph({static_cast<double>(i), static_cast<double>(j)}, w, h);
            s.phi = wrap_phi(s.phi - dphi);
            s.theta = wrap_latitude(s.theta - dtheta);
            const PixCoord src = sph_to_pix(s, w, h);
            sample_pano(img, src.u, src.v, sampling, out.px(i, j));
        }
    }
}

}  // namespace

EquirectImage rotate_pano(const EquirectImage& img, double dphi, double dtheta,
                          Sampling sampling) {
    require_pano(img);
    EquirectImage out(img.width, img.height);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < img.height; ++j) rotate_pano_rows(img, out, dphi, dtheta, sampling, j, j + 1);
    return out;
}

EquirectImage rotate_pano_serial(const EquirectImage& img, double dphi, double dtheta,
                                 Sampling sampling) {
    require_pano(img);
    EquirectImage out(img.width, img.height);
    rotate_pano_rows(img, out, dphi, dtheta, sampling, 0, img.height);
    return out;
}

const FaceFrame& face_frame(CubeFace f) {
    static const std::array<FaceFrame, 6> frames = {{
        {{0, 0, 1}, {1, 0, 0}, {0, -1, 0}},    // front
        {{0, 0, -1}, {-1, 0, 0}, {0, -1, 0}},  // back
        {{-1, 0, 0}, {0, 0, 1}, {0, -1, 0}},   // left
        {{1, 0, 0}, {0, 0, -1}, {0, -1, 0}},   // right
        {{0, 1, 0}, {1, 0, 0}, {0, 0, 1}},     // top
        {{0, -1, 0}, {1, 0, 0}, {0, 0, -1}},   // bottom
    }};
    return frames[static_cast<int>(f)];
}

CubeFace face_for_direction(const Eigen::Vector3d& d) {
    const double ax = std::abs(d.x()), ay = std::abs(d.y()), az = std::abs(d.z());
    if (az >= ax && az >= ay) return d.z() >= 0 ? CubeFace::Front : CubeFace::Back;
    if (ax >= ay) return d.x() >= 0 ? CubeFace::Right : CubeFace::Left;
    return d.y() >= 0 ? CubeFace::Top : CubeFace::Bottom;
}

namespace {

void face_rows(const EquirectImage& img, std::vector<float>& face, const FaceFrame& fr,
               int face_size, Sampling sampling, int b0, int b1) {
    const double c = 0.5 * (face_size - 1);
    const double focal = 0.5 * face_size;
    for (int b = b0; b < b1; ++b) {
        for (int a = 0; a < face_size; ++a) {
            const double x = (a - c) / focal;
            const double y = (b - c) / focal;
            const Eigen::Vector3d dir = fr.axis + x * fr.right + y * fr.down;
            const PixCoord p = sph_to_pix(sph_from_dir(dir), img.width, img.height);
            sample_pano(img, p.u, p.v, sampling, &face[(static_cast<std::size_t>(b) * face_size + a) * 3]);
        }
    }
}

void sample_face(const std::vector<float>& face, int face_size, double a, double b,
                 Sampling sampling, float out[3]) {
    if (sampling == Sampling::Nearest) {
        const int ia = std::clamp(static_cast<int>(std::lround(a)), 0, face_size - 1);
        const int ib = std::clamp(static_cast<int>(std::lround(b)), 0, face_size - 1);
        const float* s = &face[(static_cast<std::size_t>(ib) * face_size + ia) * 3];
        out[0] = s[0];
        out[1] = s[1];
        out[2] = s[2];
        return;
    }
    const double ac = std::clamp(a, 0.0, static_cast<double>(face_size - 1));
    const double bc = std::clamp(b, 0.0, static_cast<double>(face_size - 1));
    const int a0 = static_cast<int>(std::floor(ac));
    const int b0 = static_cast<int>(std::floor(bc));
    const int a1 = std::min(a0 + 1, face_size - 1);
    const int b1 = std::min(b0 + 1, face_size - 1);
    const double fa = ac - a0;
    const double fb = bc - b0;
    auto px = [&](int i, int j) { return &face[(static_cast<std::size_t>(j) * face_size + i) * 3]; };
    const float *p00 = px(a0, b0), *p10 = px(a1, b0), *p01 = px(a0, b1), *p11 = px(a1, b1);
    for (int ch = 0; ch < 3; ++ch) {
        const double top = p00[ch] * (1.0 - fa) + p10[ch] * fa;
        const double bot = p01[ch] * (1.0 - fa) + p11[ch] * fa;
        out[ch] = static_cast<float>(top * (1.0 - fb) + bot * fb);
    }
}

void pano_rows_from_cube(const CubeMap& cm, EquirectImage& out, Sampling sampling, int j0, int j1) {
    const int w = out.width, h = out.height;
    const int F = cm.face_size;
    const double c = 0.5 * (F - 1);
    const double focal = 0.5 * F;
    for (int j = j0; j < j1; ++j) {
        for (int i = 0; i < w; ++i) {
            const Eigen::Vector3d d =
                dir_from_sph(pix_to_sph({static_cast<double>(i), static_cast<double>(j)}, w, h));
            const CubeFace f = face_for_direction(d);
            const FaceFrame& fr = face_frame(f);
            const double t = d.dot(fr.axis);
            const double a = c + focal * d.dot(fr.right) / t;
            const double b = c + focal * d.dot(fr.down) / t;
            sample_face(cm.face(f), F, a, b, sampling, out.px(i, j));
        }
    }
}

}  // namespace

CubeMap pano_to_cubemap(const EquirectImage& img, int face_size, Sampling sampling) {
    require_pano(img);
    if (face_size < 2) throw std::invalid_argument("face size too small");
    CubeMap cm;
    cm.face_size = face_size;
    for (auto& f : cm.faces) f.assign(static_cast<std::size_t>(face_size) * face_size * 3, 0.0f);
#pragma omp parallel for schedule(static)
    for (int fb = 0; fb < 6 * face_size; ++fb) {
        const int f = fb / face_size;
        const int b = fb % face_size;
        face_rows(img, cm.faces[f], face_frame(static_cast<CubeFace>(f)), face_size, sampling, b,
                  b + 1);
    }
    return cm;
}

CubeMap pano_to_cubemap_serial(const EquirectImage& img, int face_size, Sampling sampling) {
    require_pano(img);
    if (face_size < 2) throw std::invalid_argument("face size too small");
    CubeMap cm;
    cm.face_size = face_size;
    for (int f = 0; f < 6; ++f) {
        cm.faces[f].assign(static_cast<std::size_t>(face_size) * face_size * 3, 0.0f);
        face_rows(img, cm.faces[f], face_frame(static_cast<CubeFace>(f)), face_size, sampling, 0,
                  face_size);
    }
    return cm;
}

EquirectImage cubemap_to_pano(const CubeMap& cm, int width, int height, Sampling sampling) {
    if (width != 2 * height || height < 1) throw std::invalid_argument("W must equal 2H");
    if (cm.face_size < 2) throw std::invalid_argument("invalid cubemap");
    EquirectImage out(width, height);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < height; ++j) pano_rows_from_cube(cm, out, sampling, j, j + 1);
    return out;
}

EquirectImage cubemap_to_pano_serial(const CubeMap& cm, int width, int height, Sampling sampling) {
    if (width != 2 * height || height < 1) throw std::invalid_argument("W must equal 2H");
    if (cm.face_size < 2) throw std::invalid_argument("invalid cubemap");
    EquirectImage out(width, height);
    pano_rows_from_cube(cm, out, sampling, 0, height);
    return out;
}

std::vector<double> ray_field(const CameraPose& pose, int width, int height) {
    require_dims(width, height);
    std::vector<double> dirs(static_cast<std::size_t>(width) * height * 3);
    const Eigen::Quaterniond q = pose.world_rotation();
#pragma omp parallel for schedule(static)
    for (int j = 0; j < height; ++j) {
        for (int i = 0; i < width; ++i) {
            const Eigen::Vector3d d =
                q * dir_from_sph(pix_to_sph({static_cast<double>(i), static_cast<double>(j)},
                                            width, height));
            double* o = &dirs[(static_cast<std::size_t>(j) * width + i) * 3];
            o[0] = d.x();
            o[1] = d.y();
            o[2] = d.z();
        }
    }
    return dirs;
}

namespace {

void plucker_rows(const CameraPose& pose, PluckerField& pf, int j0, int j1) {
    const Eigen::Quaterniond q = pose.world_rotation();
    const Eigen::Vector3d c = pose.center();
    for (int j = j0; j < j1; ++j) {
        for (int i = 0; i < pf.width; ++i) {
            const Eigen::Vector3d d =
                q * dir_from_sph(pix_to_sph({static_cast<double>(i), static_cast<double>(j)},
                                            pf.width, pf.height));
            const Eigen::Vector3d m = c.cross(d);
            float* o = &pf.channels[(static_cast<std::size_t>(j) * pf.width + i) * 6];
            o[0] = static_cast<float>(d.x());
            o[1] = static_cast<float>(d.y());
            o[2] = static_cast<float>(d.z());
            o[3] = static_cast<float>(m.x());
            o[4] = static_cast<float>(m.y());
            o[5] = static_cast<float>(m.z());
        }
    }
}

}  // namespace

PluckerField plucker_field_one(const CameraPose& pose, int width, int height) {
    require_dims(width, height);
    PluckerField pf;
    pf.width = width;
    pf.height = height;
    pf.channels.assign(static_cast<std::size_t>(width) * height * 6, 0.0f);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < height; ++j) plucker_rows(pose, pf, j, j + 1);
    return pf;
}

PluckerField plucker_field_one_serial(const CameraPose& pose, int width, int height) {
    require_dims(width, height);
    PluckerField pf;
    pf.width = width;
    pf.height = height;
    pf.channels.assign(static_cast<std::size_t>(width) * height * 6, 0.0f);
    plucker_rows(pose, pf, 0, height);
    return pf;
}

std::vector<PluckerField> plucker_field(const std::vector<CameraPose>& poses, int width,
                                        int height) {
    if (poses.empty()) throw std::invalid_argument("plucker_field needs at least one pose");
    std::vector<PluckerField> fields;
    fields.reserve(poses.size());
    for (const auto& p : poses) fields.push_back(plucker_field_one(p, width, height));
    return fields;
}

}  // namespace panomem
