#include "texseg/features.hpp"

#include <cmath>

#include "texseg/simd.hpp"

namespace texseg {

namespace {

std::vector<double> sample_grid(int s, double sigma, KernelKind kind) {
    const int r = s / 2;
    std::vector<double> taps(static_cast<std::size_t>(s) * s);
    const double inv = 1.0 / (2.0 * sigma * sigma);
    std::size_t i = 0;
    for (int y = -r; y <= r; ++y) {
        for (int x = -r; x <= r; ++x, ++i) {
            const double q = x * x + y * y;
            const double g = std::exp(-q * inv);
            switch (kind) {
                case KernelKind::Gaussian: taps[i] = g; break;
                case KernelKind::LoG: taps[i] = (q - 2.0 * sigma * sigma) * g; break;
                case KernelKind::DoGx: taps[i] = x * g; break;
                case KernelKind::DoGy: taps[i] = y * g; break;
            }
        }
    }
    return taps;
}

void normalize_kernel(std::vector<double>& taps, KernelKind kind) {
    if (kind == KernelKind::Gaussian) {
        double sum = 0.0;
        for (double t : taps) sum += t;
        for (double& t : taps) t /= sum;
        return;
    }
    // zero-mean, then unit L1 mass
    double mean = 0.0;
    for (double t : taps) mean += t;
    mean /= static_cast<double>(taps.size());
    double l1 = 0.0;
    for (double& t : taps) {
        t -= mean;
        l1 += std::fabs(t);
    }
    for (double& t : taps) t /= l1;
}

}  // namespace

FilterBank build_filter_bank(int s) {
    if (s < 5 || s > 15 || s % 2 == 0)
        throw InvalidWindowSize("filter window must be odd and within [5,15], got " +
                                std::to_string(s));
    FilterBank fb;
    fb.size = s;
    fb.kernels.reserve(kTextureDim);
    auto add = [&](KernelKind kind, int channel, double sigma) {
        Kernel k{kind, channel, sigma, s, sample_grid(s, sigma, kind)};
        normalize_kernel(k.taps, kind);
        fb.kernels.push_back(std::move(k));
    };
    for (double sigma : {1.0, 2.0, 4.0})
        for (int ch = 0; ch < 3; ++ch) add(KernelKind::Gaussian, ch, sigma);
    for (double sigma : {1.0, 2.0, 4.0, 8.0}) add(KernelKind::LoG, 0, sigma);
    for (double sigma : {2.0, 4.0}) {
        add(KernelKind::DoGx, 0, sigma);
        add(KernelKind::DoGy, 0, sigma);
    }
    return fb;
}

double normalize_channel(double value, int channel_kind) {
    switch (channel_kind) {
        case 0:
        case 1:
        case 2: return value / 255.0;   // R,G,B
        case 3: return value / 100.0;   // L
        default: return (value + 128.0) / 256.0;  // a,b
    }
}

FeaturePlanes extract_color_features(const RgbImage& rgb, const LabImage& lab) {
    if (rgb.width != lab.width || rgb.height != lab.height)
        throw DimensionMismatch("rgb and lab images differ in size");
    FeaturePlanes out(rgb.width, rgb.height, kColorDim);
    const std::size_t n = rgb.pixel_count();
    for (std::size_t i = 0; i < n; ++i) {
        double* f = &out.data[i * kColorDim];
        f[0] = normalize_channel(rgb.data[i * 3 + 0], 0);
        f[1] = normalize_channel(rgb.data[i * 3 + 1], 1);
        f[2] = normalize_channel(rgb.data[i * 3 + 2], 2);
        f[3] = normalize_channel(lab.data[i * 3 + 0], 3);
        f[4] = normalize_channel(lab.data[i * 3 + 1], 4);
        f[5] = normalize_channel(lab.data[i * 3 + 2], 5);
    }
    return out;
}

FeaturePlanes extract_texture_features(const LabImage& lab, const FilterBank& fb) {
    const int w = lab.width, h = lab.height, s = fb.size;
    // Replicate padding makes the correlation well defined for any nonzero
    // size, which training on small cropped regions relies on.
    if (w < 1 || h < 1)
        throw ImageSmallerThanKernel("cannot filter an empty image with a " + std::to_string(s) +
                                     "x" + std::to_string(s) + " window");
    const int r = s / 2;
    const int pw = w + 2 * r, ph = h + 2 * r;

    // replicate-padded planes of the normalized L,a,b channels
    std::vector<std::vector<double>> planes(3, std::vector<double>(static_cast<std::size_t>(pw) * ph));
    for (int c = 0; c < 3; ++c) {
        for (int y = 0; y < ph; ++y) {
            const int sy = std::min(std::max(y - r, 0), h - 1);
            for (int x = 0; x < pw; ++x) {
                const int sx = std::min(std::max(x - r, 0), w - 1);
                planes[c][static_cast<std::size_t>(y) * pw + x] =
                    normalize_channel(lab.px(sx, sy)[c], 3 + c);
            }
        }
    }

    FeaturePlanes out(w, h, kTextureDim);
    std::vector<double> response(static_cast<std::size_t>(w) * h);
    for (int ki = 0; ki < kTextureDim; ++ki) {
        const Kernel& k = fb.kernels[ki];
        simd::correlate_plane(planes[k.channel].data(), pw, k.taps.data(), s, response.data(), w, h);
        for (std::size_t i = 0; i < response.size(); ++i) out.data[i * kTextureDim + ki] = response[i];
    }
    return out;
}

}  // namespace texseg
