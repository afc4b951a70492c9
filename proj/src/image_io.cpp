#include "texseg/image_io.hpp"

#include <jpeglib.h>
#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

#include "json.hpp"

namespace texseg {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::string& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) throw IoError("cannot open " + path);
    return f;
}

struct PngRaw {
    int width = 0;
    int height = 0;
    int color_type = 0;
    std::vector<std::uint8_t> rgb;      // always filled, 8-bit RGB
    std::vector<std::uint8_t> indices;  // filled for palette/gray sources
};

PngRaw read_png_raw(const std::string& path) {
    FilePtr f = open_file(path, "rb");
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("failed to decode PNG " + path);
    }
    png_init_io(png, f.get());
    png_read_info(png, info);

    PngRaw out;
    out.width = static_cast<int>(png_get_image_width(png, info));
    out.height = static_cast<int>(png_get_image_height(png, info));
    out.color_type = png_get_color_type(png, info);
    const int bit_depth = png_get_bit_depth(png, info);

    const bool indexed =
        out.color_type == PNG_COLOR_TYPE_PALETTE || out.color_type == PNG_COLOR_TYPE_GRAY;
    if (indexed) {
        // first pass keeps raw index / gray values
        png_set_packing(png);
        if (out.color_type == PNG_COLOR_TYPE_GRAY && bit_depth == 16) png_set_strip_16(png);
        png_read_update_info(png, info);
        out.indices.resize(static_cast<std::size_t>(out.width) * out.height);
        std::vector<png_bytep> rows(out.height);
        for (int y = 0; y < out.height; ++y)
            rows[y] = out.indices.data() + static_cast<std::size_t>(y) * out.width;
        png_read_image(png, rows.data());
        png_read_end(png, nullptr);

        // expand to RGB from the same raw values
        out.rgb.resize(out.indices.size() * 3);
        if (out.color_type == PNG_COLOR_TYPE_PALETTE) {
            png_colorp plte = nullptr;
            int n_plte = 0;
            png_get_PLTE(png, info, &plte, &n_plte);
            for (std::size_t i = 0; i < out.indices.size(); ++i) {
                const int v = out.indices[i] < n_plte ? out.indices[i] : 0;
                out.rgb[i * 3 + 0] = plte[v].red;
                out.rgb[i * 3 + 1] = plte[v].green;
                out.rgb[i * 3 + 2] = plte[v].blue;
            }
        } else {
            for (std::size_t i = 0; i < out.indices.size(); ++i) {
                out.rgb[i * 3 + 0] = out.rgb[i * 3 + 1] = out.rgb[i * 3 + 2] = out.indices[i];
            }
        }
        png_destroy_read_struct(&png, &info, nullptr);
        return out;
    }

    if (bit_depth == 16) png_set_strip_16(png);
    if (out.color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    if (out.color_type == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_gray_to_rgb(png);
    png_read_update_info(png, info);
    out.rgb.resize(static_cast<std::size_t>(out.width) * out.height * 3);
    std::vector<png_bytep> rows(out.height);
    for (int y = 0; y < out.height; ++y)
        rows[y] = out.rgb.data() + static_cast<std::size_t>(y) * out.width * 3;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return out;
}

struct JpegErrorJump {
    jpeg_error_mgr mgr;
    jmp_buf jb;
    char msg[JMSG_LENGTH_MAX];
};

void jpeg_error_trampoline(j_common_ptr ci) {
    auto* e = reinterpret_cast<JpegErrorJump*>(ci->err);
    (*ci->err->format_message)(ci, e->msg);
    longjmp(e->jb, 1);
}

RgbImage read_jpeg(const std::string& path) {
    FilePtr f = open_file(path, "rb");
    jpeg_decompress_struct cinfo;
    JpegErrorJump jerr;
    cinfo.err = jpeg_std_error(&jerr.mgr);
    jerr.mgr.error_exit = jpeg_error_trampoline;
    if (setjmp(jerr.jb)) {
        jpeg_destroy_decompress(&cinfo);
        throw IoError(std::string("JPEG decode error in ") + path + ": " + jerr.msg);
    }
    jpeg_create_decompress(&cinfo);
    jpeg_stdio_src(&cinfo, f.get());
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);
    RgbImage img(static_cast<int>(cinfo.output_width), static_cast<int>(cinfo.output_height));
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row =
            img.data.data() + static_cast<std::size_t>(cinfo.output_scanline) * img.width * 3;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return img;
}

}  // namespace

RgbImage read_image(const std::string& path) {
    FilePtr f = open_file(path, "rb");
    unsigned char magic[2] = {0, 0};
    if (std::fread(magic, 1, 2, f.get()) != 2) throw IoError("cannot read " + path);
    f.reset();
    if (magic[0] == 0x89 && magic[1] == 'P') {
        PngRaw raw = read_png_raw(path);
        RgbImage img(raw.width, raw.height);
        img.data = std::move(raw.rgb);
        return img;
    }
    if (magic[0] == 0xFF && magic[1] == 0xD8) return read_jpeg(path);
    throw IoError(path + " is neither PNG nor JPEG");
}

namespace {

void write_png_impl(const std::string& path, int width, int height, int color_type, int bit_depth,
                    const std::vector<png_bytep>& rows, const ClassPalette* palette) {
    FilePtr f = open_file(path, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("failed to write PNG " + path);
    }
    png_init_io(png, f.get());
    png_set_IHDR(png, info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    std::vector<png_color> plte;
    if (palette) {
        for (const auto& e : palette->entries)
            plte.push_back({e.rgb[0], e.rgb[1], e.rgb[2]});
        png_set_PLTE(png, info, plte.data(), static_cast<int>(plte.size()));
    }
    png_write_info(png, info);
    if (bit_depth == 16) png_set_swap(png);  // rows are little-endian uint16
    png_write_image(png, const_cast<png_bytepp>(rows.data()));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace

void write_png(const std::string& path, const RgbImage& img) {
    std::vector<png_bytep> rows(img.height);
    for (int y = 0; y < img.height; ++y)
        rows[y] = const_cast<png_bytep>(img.data.data()) + static_cast<std::size_t>(y) * img.width * 3;
    write_png_impl(path, img.width, img.height, PNG_COLOR_TYPE_RGB, 8, rows, nullptr);
}

void write_label_png(const std::string& path, const LabelMap& lm, const ClassPalette& palette) {
    const int c = palette.class_count();
    std::vector<std::uint8_t> idx(lm.data.size());
    for (std::size_t i = 0; i < lm.data.size(); ++i) {
        const std::uint8_t v = lm.data[i];
        if (v == kUnknownLabel) {
            idx[i] = static_cast<std::uint8_t>(c);  // UNKNOWN sits after the classes in PLTE
        } else if (v < c) {
            idx[i] = v;
        } else {
            throw IndexOutOfPalette("label " + std::to_string(v) + " exceeds palette");
        }
    }
    std::vector<png_bytep> rows(lm.height);
    for (int y = 0; y < lm.height; ++y)
        rows[y] = idx.data() + static_cast<std::size_t>(y) * lm.width;
    write_png_impl(path, lm.width, lm.height, PNG_COLOR_TYPE_PALETTE, 8, rows, &palette);
}

void write_gray16_png(const std::string& path, const std::vector<std::uint16_t>& values, int width,
                      int height) {
    if (values.size() != static_cast<std::size_t>(width) * height)
        throw DimensionMismatch("gray16 buffer does not match dimensions");
    std::vector<png_bytep> rows(height);
    for (int y = 0; y < height; ++y)
        rows[y] = reinterpret_cast<png_bytep>(const_cast<std::uint16_t*>(values.data()) +
                                              static_cast<std::size_t>(y) * width);
    write_png_impl(path, width, height, PNG_COLOR_TYPE_GRAY, 16, rows, nullptr);
}

LabelMap read_label_map(const std::string& path, const ClassPalette& palette) {
    FilePtr f = open_file(path, "rb");
    unsigned char magic[2] = {0, 0};
    if (std::fread(magic, 1, 2, f.get()) != 2) throw IoError("cannot read " + path);
    f.reset();
    if (!(magic[0] == 0x89 && magic[1] == 'P'))
        throw IoError("label maps must be PNG: " + path);

    PngRaw raw = read_png_raw(path);
    const int c = palette.class_count();
    if (!raw.indices.empty()) {
        LabelMap lm(raw.width, raw.height);
        for (std::size_t i = 0; i < raw.indices.size(); ++i) {
            const std::uint8_t v = raw.indices[i];
            if (v < c) {
                lm.data[i] = v;
            } else if (v == c || v == kUnknownLabel) {
                lm.data[i] = kUnknownLabel;
            } else {
                throw UnknownColor(static_cast<int>(i % raw.width), static_cast<int>(i / raw.width),
                                   {v, v, v});
            }
        }
        return lm;
    }
    RgbImage img(raw.width, raw.height);
    img.data = std::move(raw.rgb);
    return decode_label_map(img, palette);
}

ClassPalette parse_palette_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw BadPalette(std::string("palette JSON parse error: ") + e.what());
    }
    if (!j.is_array()) throw BadPalette("palette JSON must be an array");
    ClassPalette p;
    for (const auto& item : j) {
        if (!item.contains("name") || !item.contains("rgb") || !item["rgb"].is_array() ||
            item["rgb"].size() != 3)
            throw BadPalette("palette entries need {name, rgb:[r,g,b]}");
        PaletteEntry e;
        e.name = item["name"].get<std::string>();
        for (int i = 0; i < 3; ++i) {
            const int v = item["rgb"][i].get<int>();
            if (v < 0 || v > 255) throw BadPalette("palette color out of range");
            e.rgb[i] = static_cast<std::uint8_t>(v);
        }
        p.entries.push_back(std::move(e));
    }
    p.validate();
    return p;
}

ClassPalette load_palette(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_palette_json(ss.str());
}

}  // namespace texseg
