#include "roadsight/features.hpp"

namespace roadsight {

std::string feature_kind_name(FeatureKind k) {
    return k == FeatureKind::PIXELS ? "pixels" : "hist";
}

FeatureKind feature_kind_from_name(const std::string& name) {
    if (name == "pixels") return FeatureKind::PIXELS;
    if (name == "hist") return FeatureKind::HIST;
    throw InvalidConfig("unknown feature kind '" + name + "'");
}

int feature_dim(FeatureKind k) { return k == FeatureKind::PIXELS ? kPixelsDim : kHistDim; }

FeatureVector pixels_feature(const Raster& road) {
    if (road.channels != 3) throw InvalidInput("pixels_feature: input must have 3 channels");
    const Raster canonical = resize(road, 2 * kPixelsW, 2 * kPixelsH);
    const Raster small = downscale2(canonical);

    FeatureVector fv;
    fv.kind = FeatureKind::PIXELS;
    fv.values.resize(kPixelsDim);
    for (int i = 0; i < kPixelsDim; ++i) fv.values[i] = small.data[i] / 255.0;
    return fv;
}

FeatureVector hist_feature(const Raster& road, const BitMask* mask) {
    if (road.channels != 3) throw InvalidInput("hist_feature: input must have 3 channels");
    if (mask && (mask->width != road.width || mask->height != road.height))
        throw InvalidInput("hist_feature: mask dimensions mismatch");

    FeatureVector fv;
    fv.kind = FeatureKind::HIST;
    fv.values = Eigen::VectorXd::Zero(kHistDim);

    std::size_t counted = 0;
    for (std::size_t p = 0; p < road.pixel_count(); ++p) {
        if (mask && !mask->bits[p]) continue;
        ++counted;
        for (int c = 0; c < 3; ++c) {
            const int bin = road.data[p * 3 + c] * kHistBins / 256;
            fv.values[c * kHistBins + bin] += 1.0;
        }
    }
    if (counted > 0) fv.values /= static_cast<double>(3 * counted);
    return fv;
}

}  // namespace roadsight
