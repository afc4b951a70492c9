#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "texseg/errors.hpp"

namespace texseg {

struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // row-major interleaved RGB

    RgbImage() = default;
    RgbImage(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0) {}

    std::uint8_t* px(int x, int y) { return &data[(static_cast<std::size_t>(y) * width + x) * 3]; }
    const std::uint8_t* px(int x, int y) const {
        return &data[(static_cast<std::size_t>(y) * width + x) * 3];
    }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
};

struct LabImage {
    int width = 0;
    int height = 0;
    std::vector<double> data;  // row-major interleaved L,a,b

    LabImage() = default;
    LabImage(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0.0) {}

    double* px(int x, int y) { return &data[(static_cast<std::size_t>(y) * width + x) * 3]; }
    const double* px(int x, int y) const {
        return &data[(static_cast<std::size_t>(y) * width + x) * 3];
    }
};

// label value reserved for pixels outside every class
inline constexpr std::uint8_t kUnknownLabel = 255;

struct LabelMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    LabelMap() = default;
    LabelMap(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

    std::uint8_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
};

struct PaletteEntry {
    std::string name;
    std::array<std::uint8_t, 3> rgb;
};

// Ordered class list plus a mandatory trailing UNKNOWN entry whose color is
// used for unlabeled pixels in rendered output.
struct ClassPalette {
    std::vector<PaletteEntry> entries;

    int class_count() const { return static_cast<int>(entries.size()) - 1; }
    const PaletteEntry& unknown() const { return entries.back(); }
    void validate() const;  // throws BadPalette
};

LabImage rgb_to_lab(const RgbImage& img);

// single-pixel conversion, exposed for tests and feature extraction
std::array<double, 3> srgb_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b);

RgbImage resize_bilinear(const RgbImage& img, int out_w, int out_h);

// nearest-neighbor resize for class-index maps (no interpolation of ids)
LabelMap resize_nearest(const LabelMap& lm, int out_w, int out_h);

RgbImage encode_label_map(const LabelMap& lm, const ClassPalette& palette);
LabelMap decode_label_map(const RgbImage& img, const ClassPalette& palette);

}  // namespace texseg
