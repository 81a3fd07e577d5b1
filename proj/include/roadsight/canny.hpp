#pragma once

#include "roadsight/raster.hpp"

namespace roadsight {

/// Canny edges: Gaussian blur (sigma 1.4) -> Sobel -> non-maximum suppression
/// over 4 quantized directions -> double threshold -> hysteresis by
/// 8-connectivity. Thresholds apply to raw Sobel magnitude.
BitMask canny(const Raster& img, double lo, double hi);

}  // namespace roadsight
