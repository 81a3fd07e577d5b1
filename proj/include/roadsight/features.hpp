#pragma once

#include <Eigen/Dense>

#include "roadsight/raster.hpp"

namespace roadsight {

enum class FeatureKind { PIXELS, HIST };

constexpr int kPixelsW = 64;
constexpr int kPixelsH = 48;
constexpr int kPixelsDim = kPixelsW * kPixelsH * 3;  // 9216
constexpr int kHistBins = 32;
constexpr int kHistDim = 3 * kHistBins;  // 96

std::string feature_kind_name(FeatureKind k);
FeatureKind feature_kind_from_name(const std::string& name);
int feature_dim(FeatureKind k);

struct FeatureVector {
    Eigen::VectorXd values;
    FeatureKind kind = FeatureKind::PIXELS;

    int dim() const { return static_cast<int>(values.size()); }
};

/// Canonical 128x96 resize, 2x2 block average down to 64x48, flattened
/// row-major channel-interleaved, scaled to [0,1].
FeatureVector pixels_feature(const Raster& road);

/// 32 bins per channel over the raster's channels as given (callers convert
/// to HSV first when that is the intended space), concatenated ch0|ch1|ch2,
/// L1-normalized over all 96 entries. An empty mask yields the zero vector.
FeatureVector hist_feature(const Raster& road, const BitMask* mask = nullptr);

}  // namespace roadsight
