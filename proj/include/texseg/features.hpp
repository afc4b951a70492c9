#pragma once

#include <vector>

#include "texseg/image.hpp"

namespace texseg {

inline constexpr int kColorDim = 6;    // R,G,B,L,a,b
inline constexpr int kTextureDim = 17; // 9 Gaussian + 4 LoG + 4 DoG responses

struct FeatureConfig {
    int filter_size = 7;  // odd, 5..15
};

enum class KernelKind { Gaussian, LoG, DoGx, DoGy };

struct Kernel {
    KernelKind kind;
    int channel;   // 0=L, 1=a, 2=b
    double sigma;
    int size;
    std::vector<double> taps;  // size x size, row-major
};

struct FilterBank {
    int size = 0;
    std::vector<Kernel> kernels;  // exactly 17
};

// Dense per-pixel feature vectors, pixel-major.
struct FeaturePlanes {
    int width = 0;
    int height = 0;
    int dim = 0;
    std::vector<double> data;

    FeaturePlanes() = default;
    FeaturePlanes(int w, int h, int d)
        : width(w), height(h), dim(d), data(static_cast<std::size_t>(w) * h * d, 0.0) {}

    double* at(int x, int y) { return &data[(static_cast<std::size_t>(y) * width + x) * dim]; }
    const double* at(int x, int y) const {
        return &data[(static_cast<std::size_t>(y) * width + x) * dim];
    }
};

// Gaussians at sigma 1,2,4 on L,a,b; LoG at sigma 1,2,4,8 on L; x/y
// derivative-of-Gaussian at sigma 2,4 on L. All sampled on one odd s x s
// window; Gaussians are L1-normalized to sum 1, LoG/DoG shifted to zero sum
// then L1-normalized.
FilterBank build_filter_bank(int s);

// channel scaling shared by both feature kinds: R,G,B /255; L /100; a,b -> (v+128)/256
double normalize_channel(double value, int channel_kind);

FeaturePlanes extract_color_features(const RgbImage& rgb, const LabImage& lab);
FeaturePlanes extract_texture_features(const LabImage& lab, const FilterBank& fb);

}  // namespace texseg
