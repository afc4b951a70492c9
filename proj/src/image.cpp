#include "texseg/image.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace texseg {

void ClassPalette::validate() const {
    if (entries.size() < 2)
        throw BadPalette("palette needs at least one class plus the UNKNOWN entry");
    if (entries.back().name != "UNKNOWN")
        throw BadPalette("last palette entry must be named UNKNOWN");
    std::set<std::string> names;
    std::set<std::array<std::uint8_t, 3>> colors;
    for (const auto& e : entries) {
        if (!names.insert(e.name).second)
            throw BadPalette("duplicate class name: " + e.name);
        if (!colors.insert(e.rgb).second)
            throw BadPalette("duplicate palette color for class: " + e.name);
    }
    if (class_count() > 254)
        throw BadPalette("too many classes for 8-bit label maps");
}

namespace {

double gamma_decode(double u) {
    return u <= 0.04045 ? u / 12.92 : std::pow((u + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
    constexpr double d = 6.0 / 29.0;
    constexpr double d3 = d * d * d;
    return t > d3 ? std::cbrt(t) : t / (3.0 * d * d) + 4.0 / 29.0;
}

}  // namespace

std::array<double, 3> srgb_to_lab(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
    const double r = gamma_decode(r8 / 255.0);
    const double g = gamma_decode(g8 / 255.0);
    const double b = gamma_decode(b8 / 255.0);

    // sRGB primaries, D65 white
    const double x = (0.4124564 * r + 0.3575761 * g + 0.1804375 * b) / 0.95047;
    const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
    const double z = (0.0193339 * r + 0.1191920 * g + 0.9503041 * b) / 1.08883;

    const double fx = lab_f(x);
    const double fy = lab_f(y);
    const double fz = lab_f(z);
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

LabImage rgb_to_lab(const RgbImage& img) {
    LabImage out(img.width, img.height);
    const std::size_t n = img.pixel_count();
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint8_t* p = &img.data[i * 3];
        const auto lab = srgb_to_lab(p[0], p[1], p[2]);
        double* q = &out.data[i * 3];
        q[0] = lab[0];
        q[1] = lab[1];
        q[2] = lab[2];
    }
    return out;
}

RgbImage resize_bilinear(const RgbImage& img, int out_w, int out_h) {
    if (out_w < 1 || out_h < 1) throw DimensionMismatch("resize target must be at least 1x1");
    if (out_w == img.width && out_h == img.height) return img;

    RgbImage out(out_w, out_h);
    const double sx = static_cast<double>(img.width) / out_w;
    const double sy = static_cast<double>(img.height) / out_h;

    for (int y = 0; y < out_h; ++y) {
        // sample positions align pixel centers of both grids
        double fy = (y + 0.5) * sy - 0.5;
        fy = std::clamp(fy, 0.0, static_cast<double>(img.height - 1));
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, img.height - 1);
        const double wy = fy - y0;
        for (int x = 0; x < out_w; ++x) {
            double fx = (x + 0.5) * sx - 0.5;
            fx = std::clamp(fx, 0.0, static_cast<double>(img.width - 1));
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, img.width - 1);
            const double wx = fx - x0;

            const std::uint8_t* p00 = img.px(x0, y0);
            const std::uint8_t* p10 = img.px(x1, y0);
            const std::uint8_t* p01 = img.px(x0, y1);
            const std::uint8_t* p11 = img.px(x1, y1);
            std::uint8_t* q = out.px(x, y);
            for (int c = 0; c < 3; ++c) {
                const double top = p00[c] + (p10[c] - p00[c]) * wx;
                const double bot = p01[c] + (p11[c] - p01[c]) * wx;
                const double v = top + (bot - top) * wy;
                q[c] = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
            }
        }
    }
    return out;
}

LabelMap resize_nearest(const LabelMap& lm, int out_w, int out_h) {
    if (out_w < 1 || out_h < 1) throw DimensionMismatch("resize target must be at least 1x1");
    if (out_w == lm.width && out_h == lm.height) return lm;
    LabelMap out(out_w, out_h);
    for (int y = 0; y < out_h; ++y) {
        const int sy = std::min(static_cast<int>((y + 0.5) * lm.height / out_h), lm.height - 1);
        for (int x = 0; x < out_w; ++x) {
            const int sx = std::min(static_cast<int>((x + 0.5) * lm.width / out_w), lm.width - 1);
            out.at(x, y) = lm.at(sx, sy);
        }
    }
    return out;
}

RgbImage encode_label_map(const LabelMap& lm, const ClassPalette& palette) {
    RgbImage out(lm.width, lm.height);
    const int c = palette.class_count();
    for (std::size_t i = 0; i < lm.data.size(); ++i) {
        const std::uint8_t v = lm.data[i];
        const PaletteEntry* e;
        if (v == kUnknownLabel) {
            e = &palette.unknown();
        } else if (v < c) {
            e = &palette.entries[v];
        } else {
            throw IndexOutOfPalette("label " + std::to_string(v) + " exceeds palette with " +
                                    std::to_string(c) + " classes");
        }
        out.data[i * 3 + 0] = e->rgb[0];
        out.data[i * 3 + 1] = e->rgb[1];
        out.data[i * 3 + 2] = e->rgb[2];
    }
    return out;
}

LabelMap decode_label_map(const RgbImage& img, const ClassPalette& palette) {
    LabelMap out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const std::uint8_t* p = img.px(x, y);
            const std::array<std::uint8_t, 3> rgb{p[0], p[1], p[2]};
            int match = -1;
            for (std::size_t i = 0; i < palette.entries.size(); ++i) {
                if (palette.entries[i].rgb == rgb) {
                    match = static_cast<int>(i);
                    break;
                }
            }
            if (match < 0) throw UnknownColor(x, y, rgb);
            out.at(x, y) = match == palette.class_count() ? kUnknownLabel
                                                          : static_cast<std::uint8_t>(match);
        }
    }
    return out;
}

}  // namespace texseg
