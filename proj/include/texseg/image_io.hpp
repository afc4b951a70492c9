#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "texseg/image.hpp"

namespace texseg {

// PNG or JPEG, decided by file magic; always returns 8-bit RGB.
RgbImage read_image(const std::string& path);

void write_png(const std::string& path, const RgbImage& img);

// Indexed PNG whose palette is the class colors followed by UNKNOWN.
void write_label_png(const std::string& path, const LabelMap& lm, const ClassPalette& palette);

// 16-bit grayscale PNG of raw segment ids (superpixel debug output).
void write_gray16_png(const std::string& path, const std::vector<std::uint16_t>& values,
                      int width, int height);

// Ground-truth ingestion: indexed/gray PNGs are read as raw class indices
// (a value equal to the class count, or 255, means UNKNOWN); RGB files are
// matched against the palette exactly.
LabelMap read_label_map(const std::string& path, const ClassPalette& palette);

ClassPalette load_palette(const std::string& path);
ClassPalette parse_palette_json(const std::string& text);

}  // namespace texseg
