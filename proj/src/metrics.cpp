#include "panomem/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace panomem {

namespace {

void require_same_shape(const EquirectImage& a, const EquirectImage& b) {
    if (a.width != b.width || a.height != b.height)
        throw std::invalid_argument("image shape mismatch");
    if (a.rgb.size() != b.rgb.size()) throw std::invalid_argument("buffer size mismatch");
}

std::vector<double> luma(const EquirectImage& img) {
    std::vector<double> y(img.pixel_count());
    const std::int64_t n = static_cast<std::int64_t>(y.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const float* p = &img.rgb[i * 3];
        y[i] = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
    }
    return y;
}

std::vector<double> gaussian_kernel(int window, double sigma) {
    std::vector<double> k(window);
    const int h = window / 2;
    for (int i = 0; i < window; ++i) {
        const double d = i - h;
        k[i] = std::exp(-0.5 * d * d / (sigma * sigma));
    }
    return k;
}

// Separable Gaussian filter with border truncation; the per-axis weight
// renormalization matches the 2D truncated kernel exactly because the
// kernel is a product.
void filter_rows(const std::vector<double>& in, std::vector<double>& out, int w, int h,
                 const std::vector<double>& k, bool parallel) {
    const int half = static_cast<int>(k.size()) / 2;
#pragma omp parallel for schedule(static) if (parallel)
    for (int j = 0; j < h; ++j) {
        for (int i = 0; i < w; ++i) {
            double acc = 0.0, wsum = 0.0;
            const int lo = std::max(0, i - half), hi = std::min(w - 1, i + half);
            for (int x = lo; x <= hi; ++x) {
                const double g = k[x - i + half];
                acc += g * in[static_cast<std::size_t>(j) * w + x];
                wsum += g;
            }
            out[static_cast<std::size_t>(j) * w + i] = acc / wsum;
        }
    }
}

void filter_cols(const std::vector<double>& in, std::vector<double>& out, int w, int h,
                 const std::vector<double>& k, bool parallel) {
    const int half = static_cast<int>(k.size()) / 2;
#pragma omp parallel for schedule(static) if (parallel)
    for (int j = 0; j < h; ++j) {
        const int lo = std::max(0, j - half), hi = std::min(h - 1, j + half);
        for (int i = 0; i < w; ++i) {
            double acc = 0.0, wsum = 0.0;
            for (int y = lo; y <= hi; ++y) {
                const double g = k[y - j + half];
                acc += g * in[static_cast<std::size_t>(y) * w + i];
                wsum += g;
            }
            out[static_cast<std::size_t>(j) * w + i] = acc / wsum;
        }
    }
}

std::vector<double> gauss2d(const std::vector<double>& in, int w, int h,
                            const std::vector<double>& k, bool parallel) {
    std::vector<double> tmp(in.size()), out(in.size());
    filter_rows(in, tmp, w, h, k, parallel);
    filter_cols(tmp, out, w, h, k, parallel);
    return out;
}

double ssim_impl(const EquirectImage& a, const EquirectImage& b, const SsimConfig& cfg,
                 bool parallel) {
    require_same_shape(a, b);
    if (cfg.window < 1 || cfg.window % 2 == 0)
        throw std::invalid_argument("ssim window must be odd and positive");

    const int w = a.width, h = a.height;
    const std::vector<double> ka = gaussian_kernel(cfg.window, cfg.sigma);
    const std::vector<double> x = luma(a);
    const std::vector<double> y = luma(b);

    std::vector<double> xx(x.size()), yy(x.size()), xy(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        xx[i] = x[i] * x[i];
        yy[i] = y[i] * y[i];
        xy[i] = x[i] * y[i];
    }

    const std::vector<double> mu_x = gauss2d(x, w, h, ka, parallel);
    const std::vector<double> mu_y = gauss2d(y, w, h, ka, parallel);
    const std::vector<double> m_xx = gauss2d(xx, w, h, ka, parallel);
    const std::vector<double> m_yy = gauss2d(yy, w, h, ka, parallel);
    const std::vector<double> m_xy = gauss2d(xy, w, h, ka, parallel);

    const double c1 = (0.01 * cfg.peak) * (0.01 * cfg.peak);
    const double c2 = (0.03 * cfg.peak) * (0.03 * cfg.peak);

    // Deterministic reduction: per-row partials summed serially.
    std::vector<double> row_sum(h, 0.0);
#pragma omp parallel for schedule(static) if (parallel)
    for (int j = 0; j < h; ++j) {
        double s = 0.0;
        for (int i = 0; i < w; ++i) {
            const std::size_t px = static_cast<std::size_t>(j) * w + i;
            const double vx = m_xx[px] - mu_x[px] * mu_x[px];
            const double vy = m_yy[px] - mu_y[px] * mu_y[px];
            const double cov = m_xy[px] - mu_x[px] * mu_y[px];
            const double num = (2.0 * mu_x[px] * mu_y[px] + c1) * (2.0 * cov + c2);
            const double den =
                (mu_x[px] * mu_x[px] + mu_y[px] * mu_y[px] + c1) * (vx + vy + c2);
            s += num / den;
        }
        row_sum[j] = s;
    }
    double total = 0.0;
    for (int j = 0; j < h; ++j) total += row_sum[j];
    return total / (static_cast<double>(w) * h);
}

}  // namespace

double mse(const EquirectImage& a, const EquirectImage& b) {
    require_same_shape(a, b);
    const int h = a.height;
    const std::size_t row = static_cast<std::size_t>(a.width) * 3;
    std::vector<double> row_sum(h, 0.0);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < h; ++j) {
        double s = 0.0;
        const float* pa = &a.rgb[j * row];
        const float* pb = &b.rgb[j * row];
        for (std::size_t i = 0; i < row; ++i) {
            const double d = static_cast<double>(pa[i]) - pb[i];
            s += d * d;
        }
        row_sum[j] = s;
    }
    double total = 0.0;
    for (int j = 0; j < h; ++j) total += row_sum[j];
    return total / (static_cast<double>(a.rgb.size()));
}

double psnr(const EquirectImage& a, const EquirectImage& b, double peak, double cap_db) {
    const double m = mse(a, b);
    if (m <= 0.0) return cap_db;
    return std::min(cap_db, 10.0 * std::log10(peak * peak / m));
}

double ssim(const EquirectImage& a, const EquirectImage& b, const SsimConfig& cfg) {
    return ssim_impl(a, b, cfg, true);
}

double ssim_serial(const EquirectImage& a, const EquirectImage& b, const SsimConfig& cfg) {
    return ssim_impl(a, b, cfg, false);
}

double loop_consistency(const EquirectImage& first_gt, const EquirectImage& final_gen) {
    return mse(first_gt, final_gen);
}

MetricReport report(const std::vector<EquirectImage>& frames_a,
                    const std::vector<EquirectImage>& frames_b,
                    const std::vector<std::string>& metrics,
                    double psnr_cap, int ssim_window) {
    if (frames_a.size() != frames_b.size())
        throw std::invalid_argument("frame list length mismatch");

    MetricReport r;
    r.metrics = metrics;
    for (std::size_t i = 0; i < frames_a.size(); ++i)
        r.frame_indices.push_back(static_cast<int>(i));

    for (const std::string& name : metrics) {
        std::vector<double> vals;
        vals.reserve(frames_a.size());
        for (std::size_t i = 0; i < frames_a.size(); ++i) {
            if (name == "mse")
                vals.push_back(mse(frames_a[i], frames_b[i]));
            else if (name == "psnr")
                vals.push_back(psnr(frames_a[i], frames_b[i], 1.0, psnr_cap));
            else if (name == "ssim") {
                SsimConfig scfg;
                scfg.window = ssim_window;
                vals.push_back(ssim(frames_a[i], frames_b[i], scfg));
            }
            else
                throw std::invalid_argument("unknown metric: " + name);
        }
        double mu = 0.0;
        for (double v : vals) mu += v;
        mu = vals.empty() ? 0.0 : mu / vals.size();
        double var = 0.0;
        for (double v : vals) var += (v - mu) * (v - mu);
        var = vals.empty() ? 0.0 : var / vals.size();
        r.per_frame[name] = std::move(vals);
        r.mean[name] = mu;
        r.stddev[name] = std::sqrt(var);
    }
    return r;
}

std::string report_to_json(const MetricReport& r) {
    nlohmann::json j;
    for (const std::string& name : r.metrics) {
        j[name] = {{"per_frame", r.per_frame.at(name)},
                   {"mean", r.mean.at(name)},
                   {"std", r.stddev.at(name)}};
    }
    return j.dump(2);
}

std::string report_to_csv(const MetricReport& r) {
    std::ostringstream os;
    os << "frame";
    for (const auto& name : r.metrics) os << "," << name;
    os << "\n";
    for (std::size_t i = 0; i < r.frame_indices.size(); ++i) {
        os << r.frame_indices[i];
        for (const auto& name : r.metrics) os << "," << r.per_frame.at(name)[i];
        os << "\n";
    }
    return os.str();
}

}  // namespace panomem
