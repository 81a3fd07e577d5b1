#pragma once

#include <filesystem>

#include "roadsight/raster.hpp"

namespace roadsight {

/// Decode by extension: .png, .ppm (P6), .pgm (P5). RGB rasters come back
/// tagged RGB, single-channel ones GRAY.
Raster read_image(const std::filesystem::path& path);

/// Encode by extension: .png, .ppm (3-channel), .pgm (1-channel).
/// PPM/PGM writes are byte-exact round-trips of the pixel data.
void write_image(const std::filesystem::path& path, const Raster& img);

Raster read_pnm(const std::filesystem::path& path);
void write_pnm(const std::filesystem::path& path, const Raster& img);

Raster read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const Raster& img);

}  // namespace roadsight
