#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "panomem/geometry.hpp"

// Spherical / equirectangular coordinate math.
//
// Conventions used throughout:
//   - World axes: y up, z forward, x right.
//   - Longitude phi in [-pi, pi), measured from +z toward +x.
//   - Latitude theta in [-pi/2, pi/2], positive toward +y.
//   - A continuous pixel coordinate (u, v) addresses the center of pixel
//     (round(u) mod W, clamp(round(v))).  Integer coordinates sit exactly on
//     pixel centers, so sph_to_pix(0, 0) = (W/2, H/2) is the center pixel of
//     the panorama.  u wraps modulo W; v clamps to [0, H].
//   - At the poles (theta = +-pi/2) phi is canonicalized to 0.

namespace panomem {

struct SphCoord {
    double phi = 0.0;    // longitude, radians
    double theta = 0.0;  // latitude, radians
};

struct PixCoord {
    double u = 0.0;
    double v = 0.0;
};

enum class Sampling { Bilinear, Nearest };

struct EquirectImage {
    int width = 0;
    int height = 0;
    std::vector<float> rgb;            // height*width*3, values in [0,1]
    std::vector<float> depth;          // height*width, meters; empty if absent
    std::vector<std::uint8_t> mask;    // height*width, 1 = written; empty if absent

    EquirectImage() = default;
    EquirectImage(int w, int h, float fill = 0.0f)
        : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3, fill) {}

    bool has_depth() const { return !depth.empty(); }
    bool has_mask() const { return !mask.empty(); }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }

    float* px(int i, int j) { return &rgb[(static_cast<std::size_t>(j) * width + i) * 3]; }
    const float* px(int i, int j) const {
        return &rgb[(static_cast<std::size_t>(j) * width + i) * 3];
    }
};

// Face order follows the panorama seam walk: front (+z), back (-z),
// left (-x), right (+x), top (+y), bottom (-y).
enum class CubeFace : int { Front = 0, Back, Left, Right, Top, Bottom };

struct CubeMap {
    int face_size = 0;
    std::array<std::vector<float>, 6> faces;  // each face_size*face_size*3

    std::vector<float>& face(CubeFace f) { return faces[static_cast<int>(f)]; }
    const std::vector<float>& face(CubeFace f) const { return faces[static_cast<int>(f)]; }
};

// Per-pixel 6-channel ray embedding, layout [dx dy dz mx my mz] with
// m = c x d.  Stored float32 (the serialized form), computed in double.
struct PluckerField {
    int width = 0;
    int height = 0;
    std::vector<float> channels;  // height*width*6

    const float* at(int i, int j) const {
        return &channels[(static_cast<std::size_t>(j) * width + i) * 6];
    }
};

// Angle wrapping helpers.
double wrap_phi(double phi);                   // into [-pi, pi)
double wrap_latitude(double theta);            // latitude wrap, (theta mod pi)
double wrap_pixel_u(double u, int width);      // into [0, W)

// Forward / inverse equirectangular mappings.
PixCoord sph_to_pix(const SphCoord& s, int width, int height);
SphCoord pix_to_sph(const PixCoord& p, int width, int height);

// Spherical rotation of a pixel coordinate: phi += dphi (mod 2pi),
// theta += dtheta (mod pi, identity when the sum stays in range).
PixCoord sph_rotate(const PixCoord& p, double dphi, double dtheta, int width, int height);

// Whole-panorama rotation; every output pixel samples the source at the
// inverse-rotated coordinate.  A dphi that is an integer multiple of
// 2pi/W is an exact circular column shift.
EquirectImage rotate_pano(const EquirectImage& img, double dphi, double dtheta,
                          Sampling sampling = Sampling::Bilinear);
EquirectImage rotate_pano_serial(const EquirectImage& img, double dphi, double dtheta,
                                 Sampling sampling = Sampling::Bilinear);

// Direction on the unit sphere: d = (cos(theta)sin(phi), sin(theta), cos(theta)cos(phi)).
Eigen::Vector3d dir_from_sph(const SphCoord& s);
SphCoord sph_from_dir(const Eigen::Vector3d& d);

// Cube face camera frames (90 degree pinhole, focal F/2).  A face pixel
// (a, b) maps to direction axis + x*right + y*down with
// x = (a - (F-1)/2) / (F/2), y likewise; the table below keeps directions
// continuous across the equatorial seam walk front->right->back->left.
struct FaceFrame {
    Eigen::Vector3d axis;
    Eigen::Vector3d right;
    Eigen::Vector3d down;
};
const FaceFrame& face_frame(CubeFace f);
CubeFace face_for_direction(const Eigen::Vector3d& d);

CubeMap pano_to_cubemap(const EquirectImage& img, int face_size,
                        Sampling sampling = Sampling::Bilinear);
EquirectImage cubemap_to_pano(const CubeMap& cm, int width, int height,
                              Sampling sampling = Sampling::Bilinear);
CubeMap pano_to_cubemap_serial(const EquirectImage& img, int face_size,
                               Sampling sampling = Sampling::Bilinear);
EquirectImage cubemap_to_pano_serial(const CubeMap& cm, int width, int height,
                                     Sampling sampling = Sampling::Bilinear);

// Bilinear / nearest sample of an equirect rgb buffer (u wraps, v clamps).
void sample_pano(const EquirectImage& img, double u, double v, Sampling sampling, float out[3]);

// Per-pixel world-frame unit ray directions for a panoramic camera,
// row-major height*width*3 doubles.
std::vector<double> ray_field(const CameraPose& pose, int width, int height);

// Spherical Plucker embedding [d, c x d] per pixel, one field per pose.
std::vector<PluckerField> plucker_field(const std::vector<CameraPose>& poses,
                                        int width, int height);
PluckerField plucker_field_one(const CameraPose& pose, int width, int height);
PluckerField plucker_field_one_serial(const CameraPose& pose, int width, int height);

}  // namespace panomem
