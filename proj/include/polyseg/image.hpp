// Image storage, CIELAB conversion, region statistics and synthetic scenes.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "polyseg/raster.hpp"

namespace polyseg {

// Pixel values normalized to [0,1] per channel. CIELAB images store the
// rescaled channels L/100, (a+128)/255, (b+128)/255.
struct ImageField {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<double> values;  // row-major, interleaved channels

    ImageField() = default;
    ImageField(int w, int h, int c, double fill = 0.0)
        : width(w), height(h), channels(c),
          values(static_cast<std::size_t>(w) * h * c, fill) {
        if (w <= 0 || h <= 0 || (c != 1 && c != 3)) {
            throw std::invalid_argument("ImageField: bad dimensions/channels");
        }
    }

    double at(int x, int y, int c = 0) const {
        return values[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    double& at(int x, int y, int c = 0) {
        return values[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
};

// Bilinear sample in the continuous pixel frame (centers at integer + 0.5);
// points outside the image clamp to the nearest pixel.
inline double sample_bilinear(const ImageField& img, double x, double y, int c) {
    const double u = x - 0.5;
    const double v = y - 0.5;
    double fx = std::floor(u);
    double fy = std::floor(v);
    double tx = u - fx;
    double ty = v - fy;
    int x0 = static_cast<int>(fx);
    int y0 = static_cast<int>(fy);
    if (x0 < 0) { x0 = 0; tx = 0.0; }
    if (y0 < 0) { y0 = 0; ty = 0.0; }
    if (x0 >= img.width - 1) { x0 = img.width - 1; tx = 0.0; }
    if (y0 >= img.height - 1) { y0 = img.height - 1; ty = 0.0; }
    const int x1 = std::min(x0 + 1, img.width - 1);
    const int y1 = std::min(y0 + 1, img.height - 1);
    const double v00 = img.at(x0, y0, c);
    const double v10 = img.at(x1, y0, c);
    const double v01 = img.at(x0, y1, c);
    const double v11 = img.at(x1, y1, c);
    return (1 - ty) * ((1 - tx) * v00 + tx * v10) + ty * ((1 - tx) * v01 + tx * v11);
}

struct RegionStats {
    int label = 0;
    double area = 0.0;
    std::vector<double> sum;     // per channel
    std::vector<double> sum_sq;  // per channel

    double mean(int c) const { return sum[c] / area; }
};

// Exact per-label pixel sums; labels with zero pixels are omitted.
inline std::vector<RegionStats> region_statistics(const ImageField& img, const LabelMask& mask) {
    if (img.width != mask.width || img.height != mask.height) {
        throw std::invalid_argument("region_statistics: image/mask dimensions differ");
    }
    std::vector<RegionStats> stats(static_cast<std::size_t>(mask.num_labels) + 1);
    for (int l = 0; l <= mask.num_labels; ++l) {
        stats[l].label = l;
        stats[l].sum.assign(img.channels, 0.0);
        stats[l].sum_sq.assign(img.channels, 0.0);
    }
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            RegionStats& s = stats[mask.at(x, y)];
            s.area += 1.0;
            for (int c = 0; c < img.channels; ++c) {
                const double v = img.at(x, y, c);
                s.sum[c] += v;
                s.sum_sq[c] += v * v;
            }
        }
    }
    std::vector<RegionStats> out;
    for (auto& s : stats) {
        if (s.area > 0.0) out.push_back(std::move(s));
    }
    return out;
}

inline const RegionStats* find_stats(const std::vector<RegionStats>& stats, int label) {
    for (const auto& s : stats) {
        if (s.label == label) return &s;
    }
    return nullptr;
}

namespace detail {
inline double srgb_to_linear(double c) {
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}
inline double lab_f(double t) {
    constexpr double d = 6.0 / 29.0;
    return t > d * d * d ? std::cbrt(t) : t / (3.0 * d * d) + 4.0 / 29.0;
}
}  // namespace detail

// sRGB -> linear RGB -> XYZ (D65) -> L*a*b*, rescaled into [0,1] channels.
// The white point is the matrix row sums, so pure grays map to a*=b*=0.
inline ImageField to_cielab(const ImageField& img) {
    if (img.channels == 1) return img;
    constexpr double M[3][3] = {
        {0.4124564, 0.3575761, 0.1804375},
        {0.2126729, 0.7151522, 0.0721750},
        {0.0193339, 0.1191920, 0.9503041}};
    constexpr double wx = M[0][0] + M[0][1] + M[0][2];
    constexpr double wy = M[1][0] + M[1][1] + M[1][2];
    constexpr double wz = M[2][0] + M[2][1] + M[2][2];

    ImageField out(img.width, img.height, 3);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const double r = detail::srgb_to_linear(img.at(x, y, 0));
            const double g = detail::srgb_to_linear(img.at(x, y, 1));
            const double b = detail::srgb_to_linear(img.at(x, y, 2));
            const double X = M[0][0] * r + M[0][1] * g + M[0][2] * b;
            const double Y = M[1][0] * r + M[1][1] * g + M[1][2] * b;
            const double Z = M[2][0] * r + M[2][1] * g + M[2][2] * b;
            const double fx = detail::lab_f(X / wx);
            const double fy = detail::lab_f(Y / wy);
            const double fz = detail::lab_f(Z / wz);
            const double L = 116.0 * fy - 16.0;
            const double a = 500.0 * (fx - fy);
            const double bb = 200.0 * (fy - fz);
            out.at(x, y, 0) = std::clamp(L / 100.0, 0.0, 1.0);
            out.at(x, y, 1) = std::clamp((a + 128.0) / 255.0, 0.0, 1.0);
            out.at(x, y, 2) = std::clamp((bb + 128.0) / 255.0, 0.0, 1.0);
        }
    }
    return out;
}

enum class SyntheticKind { two_disks, annulus, bars };

struct SyntheticScene {
    ImageField image;        // foreground 1.0, background 0.0, plus noise
    LabelMask ground_truth;  // pre-noise component labels
};

// Deterministic for a given seed. Noise is Gaussian via explicit Box-Muller
// so results do not depend on the standard library's distribution internals.
inline SyntheticScene generate_synthetic(SyntheticKind kind, int width, int height,
                                         double noise_sigma, uint32_t seed) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("generate_synthetic: dimensions must be positive");
    ImageField img(width, height, 1);
    const double w = width, h = height;
    auto inside = [&](double px, double py) {
        switch (kind) {
            case SyntheticKind::two_disks: {
                const double r = 0.16 * std::min(w, h);
                const double d1 = std::hypot(px - 0.32 * w, py - 0.5 * h);
                const double d2 = std::hypot(px - 0.68 * w, py - 0.5 * h);
                return d1 <= r || d2 <= r;
            }
            case SyntheticKind::annulus: {
                const double d = std::hypot(px - 0.5 * w, py - 0.5 * h);
                return d <= 0.32 * std::min(w, h) && d >= 0.16 * std::min(w, h);
            }
            case SyntheticKind::bars: {
                const bool b1 = px >= 0.20 * w && px < 0.35 * w && py >= 0.20 * h && py < 0.80 * h;
                const bool b2 = px >= 0.65 * w && px < 0.80 * w && py >= 0.20 * h && py < 0.80 * h;
                return b1 || b2;
            }
        }
        return false;
    };

    std::vector<uint8_t> fg(static_cast<std::size_t>(width) * height, 0);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            if (inside(x + 0.5, y + 0.5)) {
                fg[static_cast<std::size_t>(y) * width + x] = 1;
                img.at(x, y) = 1.0;
            }
        }
    }

    if (noise_sigma > 0.0) {
        std::mt19937 rng(seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        auto gauss = [&]() {
            double u1 = u(rng);
            while (u1 <= 1e-300) u1 = u(rng);
            const double u2 = u(rng);
            return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
        };
        for (double& v : img.values) {
            v = std::clamp(v + noise_sigma * gauss(), 0.0, 1.0);
        }
    }

    SyntheticScene scene{std::move(img), {}};
    scene.ground_truth.width = width;
    scene.ground_truth.height = height;
    scene.ground_truth.labels.assign(fg.size(), 0);
    // label pre-noise components with the same 4-connected scan used elsewhere
    int next_label = 0;
    std::queue<std::pair<int, int>> q;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const std::size_t idx = static_cast<std::size_t>(y) * width + x;
            if (!fg[idx] || scene.ground_truth.labels[idx] != 0) continue;
            ++next_label;
            scene.ground_truth.labels[idx] = next_label;
            q.push({x, y});
            while (!q.empty()) {
                const auto [cx, cy] = q.front();
                q.pop();
                const int nx[4] = {cx - 1, cx + 1, cx, cx};
                const int ny[4] = {cy, cy, cy - 1, cy + 1};
                for (int k = 0; k < 4; ++k) {
                    if (nx[k] < 0 || nx[k] >= width || ny[k] < 0 || ny[k] >= height) continue;
                    const std::size_t nidx = static_cast<std::size_t>(ny[k]) * width + nx[k];
                    if (fg[nidx] && scene.ground_truth.labels[nidx] == 0) {
                        scene.ground_truth.labels[nidx] = next_label;
                        q.push({nx[k], ny[k]});
                    }
                }
            }
        }
    }
    scene.ground_truth.num_labels = next_label;
    return scene;
}

// Intersection-over-union of the foreground (nonzero labels) of two masks.
inline double jaccard_foreground(const LabelMask& a, const LabelMask& b) {
    if (a.width != b.width || a.height != b.height) {
        throw std::invalid_argument("jaccard_foreground: dimensions differ");
    }
    std::size_t inter = 0, uni = 0;
    for (std::size_t i = 0; i < a.labels.size(); ++i) {
        const bool fa = a.labels[i] != 0;
        const bool fb = b.labels[i] != 0;
        inter += fa && fb;
        uni += fa || fb;
    }
    return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace polyseg
