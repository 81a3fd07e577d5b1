#pragma once

#include <cstdint>
#include <filesystem>

#include "roadsight/dataset.hpp"
#include "roadsight/raster.hpp"

namespace roadsight {

/// Synthetic road-scene generator: a fixed gray road trapezoid with edge and
/// dashed lane lines against sky and grass, per-pixel noise, and (for
/// positive frames) one to three dark ellipses on the road. Deterministic
/// per seed. Writes images/frame_*.png, manifest.csv and ground_truth.json
/// (road polygon and ellipse geometry per frame).
struct SynthConfig {
    int n = 8;
    std::uint64_t seed = 42;
    int width = 256;
    int height = 192;
};

Manifest synth_dataset(const std::filesystem::path& out_root, const SynthConfig& cfg);

/// One frame of the generator, exposed for tests. `label` 1 adds potholes.
Raster synth_frame(const SynthConfig& cfg, int index, int label);

}  // namespace roadsight
