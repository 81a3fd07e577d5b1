#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "roadsight/errors.hpp"

namespace roadsight {

enum class ColorSpace { RGB, HSV, GRAY };

/// 8-bit raster, row-major, channel-interleaved. 1 or 3 channels.
/// H is stored in [0,179] (degrees/2) when space == HSV.
struct Raster {
    int width = 0;
    int height = 0;
    int channels = 0;
    ColorSpace space = ColorSpace::GRAY;
    std::vector<std::uint8_t> data;

    Raster() = default;
    Raster(int w, int h, int c, ColorSpace sp, std::uint8_t fill = 0);

    std::uint8_t& at(int x, int y, int c) { return data[(static_cast<std::size_t>(y) * width + x) * channels + c]; }
    std::uint8_t at(int x, int y, int c) const { return data[(static_cast<std::size_t>(y) * width + x) * channels + c]; }

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }

    bool operator==(const Raster& o) const = default;
};

/// One boolean per pixel, row-major. Stored as bytes (0/1) for cheap indexing.
struct BitMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    BitMask() = default;
    BitMask(int w, int h, bool fill = false)
        : width(w), height(h), bits(static_cast<std::size_t>(w) * h, fill ? 1 : 0) {}

    bool get(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v = true) { bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }

    std::size_t count() const;

    bool operator==(const BitMask& o) const = default;
};

enum class SEShape { SQUARE, CROSS };

/// Structuring element for morphology. SQUARE r covers Chebyshev distance <= r,
/// CROSS r covers axis-aligned arms of length r.
struct StructElem {
    int radius = 1;
    SEShape shape = SEShape::SQUARE;

    StructElem(int r = 1, SEShape s = SEShape::SQUARE) : radius(r), shape(s) {
        if (r < 1) throw InvalidInput("StructElem: radius must be >= 1");
    }
};

// -- color ------------------------------------------------------------------

/// RGB -> HSV with H in [0,179] (degrees/2), S,V in [0,255].
Raster to_hsv(const Raster& img);

/// RGB -> single-channel luma, round(0.299 R + 0.587 G + 0.114 B).
Raster to_gray(const Raster& img);

// -- filtering --------------------------------------------------------------

/// Normalized 1-D Gaussian taps for half-width ceil(3*sigma); size 2*hw+1, sum 1.
std::vector<double> gaussian_kernel(double sigma);

/// Separable Gaussian blur, edge-clamp borders, float intermediates,
/// quantized once at the end.
Raster gaussian_blur(const Raster& img, double sigma);

/// Bit set iff lo[c] <= pixel[c] <= hi[c] for every channel.
BitMask band_threshold(const Raster& img, const std::vector<std::uint8_t>& lo,
                       const std::vector<std::uint8_t>& hi);

// -- resampling -------------------------------------------------------------

/// Bilinear resize (half-pixel-center mapping, clamped sampling).
Raster resize(const Raster& img, int out_w, int out_h);

/// 2x2 block average, floor-rounded. Dimensions must be even.
Raster downscale2(const Raster& img);

}  // namespace roadsight
