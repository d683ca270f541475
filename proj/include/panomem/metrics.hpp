#pragma once

#include <map>
#include <string>
#include <vector>

#include "panomem/sphere.hpp"

// Classical image metrics (MSE, PSNR, SSIM) and the pixel-space loop
// consistency score, plus framewise aggregation.

namespace panomem {

double mse(const EquirectImage& a, const EquirectImage& b);

// 10 log10(L^2 / MSE), capped (identical images report the cap).
double psnr(const EquirectImage& a, const EquirectImage& b, double peak = 1.0,
            double cap_db = 99.0);

struct SsimConfig {
    int window = 7;        // odd
    double sigma = 1.5;    // Gaussian window weight
    double peak = 1.0;     // L
    // C1 = (0.01 L)^2, C2 = (0.03 L)^2 per convention
};

// Mean local SSIM over the Rec. 601 luma channel with Gaussian-weighted
// windows (truncated and renormalized at borders).
double ssim(const EquirectImage& a, const EquirectImage& b, const SsimConfig& cfg = {});
double ssim_serial(const EquirectImage& a, const EquirectImage& b, const SsimConfig& cfg = {});

// Pixel-space MSE between the trajectory's first ground-truth frame and the
// final generated frame; lower means less drift.
double loop_consistency(const EquirectImage& first_gt, const EquirectImage& final_gen);

struct MetricReport {
    std::vector<std::string> metrics;
    std::vector<int> frame_indices;
    std::map<std::string, std::vector<double>> per_frame;
    std::map<std::string, double> mean;
    std::map<std::string, double> stddev;  // population
};

// Applies each named metric ("mse", "psnr", "ssim") framewise.
MetricReport report(const std::vector<EquirectImage>& frames_a,
                    const std::vector<EquirectImage>& frames_b,
                    const std::vector<std::string>& metrics,
                    double psnr_cap = 99.0, int ssim_window = 7);

std::string report_to_json(const MetricReport& r);
std::string report_to_csv(const MetricReport& r);

}  // namespace panomem
