#pragma once

#include <cstdint>
#include <vector>

#include "ivton/errors.hpp"

namespace ivton {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    friend bool operator==(const Rgb& a, const Rgb& c) {
        return a.r == c.r && a.g == c.g && a.b == c.b;
    }
};

/// Packed 8-bit RGB image, row-major, top-left origin.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb; // 3 bytes per pixel

    Image() = default;
    Image(int w, int h, Rgb fill = {0, 0, 0})
        : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3) {
        if (w <= 0 || h <= 0)
            throw ContractError("Image: dimensions must be positive");
        for (std::size_t i = 0; i < rgb.size(); i += 3) {
            rgb[i] = fill.r;
            rgb[i + 1] = fill.g;
            rgb[i + 2] = fill.b;
        }
    }

    Rgb at(int x, int y) const {
        std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
        return {rgb[i], rgb[i + 1], rgb[i + 2]};
    }
    void set(int x, int y, Rgb c) {
        std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
        rgb[i] = c.r;
        rgb[i + 1] = c.g;
        rgb[i + 2] = c.b;
    }

    friend bool operator==(const Image& a, const Image& b) {
        return a.width == b.width && a.height == b.height && a.rgb == b.rgb;
    }
};

} // namespace ivton
