#pragma once

#include <cstdint>
#include <vector>

#include "texseg/features.hpp"
#include "texseg/image.hpp"
#include "texseg/superpixels.hpp"
#include "texseg/textons.hpp"

namespace texseg {

// Per-pixel nearest-texton assignments, stored as a row index into the
// class-major (C*K) texton matrix; class = row / k, texton = row % k.
struct TextonAssignment {
    int width = 0;
    int height = 0;
    int classes = 0;
    int k = 0;
    std::vector<std::int32_t> color;    // per pixel
    std::vector<std::int32_t> texture;

    int class_of(std::int32_t row) const { return row / k; }
    int texton_of(std::int32_t row) const { return row % k; }
};

struct OccurrenceTable {
    int segments = 0;
    int classes = 0;
    int k = 0;
    std::vector<std::uint32_t> color_counts;    // segments x (C*k)
    std::vector<std::uint32_t> texture_counts;  // segments x (C*k)
    std::vector<double> color_class_sums;       // segments x C
    std::vector<double> texture_class_sums;     // segments x C

    std::uint32_t color_count(int seg, int cls, int texton) const {
        return color_counts[(static_cast<std::size_t>(seg) * classes + cls) * k + texton];
    }
    std::uint32_t texture_count(int seg, int cls, int texton) const {
        return texture_counts[(static_cast<std::size_t>(seg) * classes + cls) * k + texton];
    }
    double color_sum(int seg, int cls) const {
        return color_class_sums[static_cast<std::size_t>(seg) * classes + cls];
    }
    double texture_sum(int seg, int cls) const {
        return texture_class_sums[static_cast<std::size_t>(seg) * classes + cls];
    }
};

struct ClassProbabilityVector {
    std::vector<double> p;  // per class, sums to 1 + w
    double w = 0.0;
    int label = 0;
};

struct SegmentationResult {
    LabelMap labels;
    SuperpixelMap superpixels;
    std::vector<ClassProbabilityVector> probabilities;  // per segment
};

// global argmin over all C*k textons per feature kind, first index on ties
TextonAssignment map_to_textons(const FeaturePlanes& color, const FeaturePlanes& texture,
                                const TextonDictionary& d);

OccurrenceTable accumulate(const SuperpixelMap& sp, const TextonAssignment& a);

// A_i = A^c_i + w * A^t_i, p_i = A_i / m, label = argmax (lowest index wins)
ClassProbabilityVector mix_and_vote(const OccurrenceTable& t, int segment, double w, double m);

// shared core: features -> textons -> occurrences -> vote, over a given map
SegmentationResult classify_with_superpixels(const RgbImage& img, const TextonDictionary& d,
                                             SuperpixelMap sp, double w);

SegmentationResult classify_image(const RgbImage& img, const TextonDictionary& d,
                                  const SegParams& p, double w, int resize_w = 320,
                                  int resize_h = 240);

SegmentationResult classify_pixelwise(const RgbImage& img, const TextonDictionary& d, double w,
                                      int resize_w = 320, int resize_h = 240);

// whole region as one superpixel, no resize
ClassProbabilityVector classify_region(const RgbImage& region, const TextonDictionary& d,
                                       double w);

}  // namespace texseg
