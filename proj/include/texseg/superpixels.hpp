#pragma once

#include <vector>

#include "texseg/image.hpp"

namespace texseg {

struct SegParams {
    double sigma = 0.5;
    double k = 80.0;
    int min_size = 80;
};

struct SuperpixelMap {
    int width = 0;
    int height = 0;
    std::vector<int> ids;                   // per pixel, dense 0..count-1
    int count = 0;
    std::vector<std::vector<int>> pixels;   // per segment, raster-order pixel indices

    int id_at(int x, int y) const { return ids[static_cast<std::size_t>(y) * width + x]; }
};

// Felzenszwalb-Huttenlocher graph segmentation: per-channel Gaussian
// smoothing, 8-connected grid, Euclidean RGB edge weights, adaptive
// threshold tau = k / |component|, then a pass that merges every component
// below min_size into its nearest neighbor. Fully deterministic.
SuperpixelMap segment_graph_based(const RgbImage& img, const SegParams& p);

// every pixel its own segment; used for pixelwise classification
SuperpixelMap singleton_superpixels(int width, int height);

}  // namespace texseg
