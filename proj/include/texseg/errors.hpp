#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace texseg {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct InvalidWindowSize : Error { using Error::Error; };
struct ImageSmallerThanKernel : Error { using Error::Error; };
struct ImageTooSmall : Error { using Error::Error; };
struct TooFewPoints : Error { using Error::Error; };
struct EmptyRegion : Error { using Error::Error; };
struct FormatVersionMismatch : Error { using Error::Error; };
struct CorruptFile : Error { using Error::Error; };
struct ConfigMismatch : Error { using Error::Error; };
struct IndexOutOfPalette : Error { using Error::Error; };
struct BadPalette : Error { using Error::Error; };
struct ClassTooSmall : Error { using Error::Error; };

struct UnknownColor : Error {
    int x, y;
    std::array<std::uint8_t, 3> rgb;
    UnknownColor(int px, int py, std::array<std::uint8_t, 3> c)
        : Error("label map pixel (" + std::to_string(px) + "," + std::to_string(py) +
                ") has color (" + std::to_string(c[0]) + "," + std::to_string(c[1]) + "," +
                std::to_string(c[2]) + ") not present in the palette"),
          x(px), y(py), rgb(c) {}
};

struct ClassUnderpopulated : Error {
    int class_index;
    explicit ClassUnderpopulated(int i, const std::string& detail)
        : Error("class " + std::to_string(i) + " " + detail), class_index(i) {}
};

}  // namespace texseg
