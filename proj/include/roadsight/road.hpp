#pragma once

#include <filesystem>
#include <vector>

#include "roadsight/contours.hpp"
#include "roadsight/raster.hpp"

namespace roadsight {

/// Region of interest as fractions of the frame, the fixed rectangle above
/// the hood assumed to contain road surface.
struct RoiSpec {
    double x0 = 0.30;
    double y0 = 0.55;
    double x1 = 0.70;
    double y1 = 0.75;
};

/// Per-channel population mean and standard deviation.
struct ChannelStats {
    std::vector<double> mean;
    std::vector<double> std;
};

/// All stages of one road isolation, retained for debug dumps.
struct RoadExtraction {
    Raster input;       // original RGB frame
    Raster hsv;         // full-frame HSV
    Raster roi_img;     // HSV crop of the ROI
    int roi_x0 = 0, roi_y0 = 0;  // ROI pixel origin in the frame
    ChannelStats stats;
    BitMask mask;       // k-sigma band mask over the full HSV frame
    Polygon hull;       // convex hull of the largest band contour
    BitMask hull_mask;  // fill_polygon(hull)
    Raster road;        // input with pixels outside hull_mask zeroed
};

/// No contour to pick a road from. When raised by extract_road the offending
/// band mask is attached for diagnostics.
struct NoRoadError : Error {
    BitMask band_mask;
    NoRoadError() : Error("no road found: contour list is empty") {}
    explicit NoRoadError(BitMask m) : Error("no road found: band mask has no contour"),
                                      band_mask(std::move(m)) {}
};

/// Sub-raster [floor(x0 W), floor(x1 W)) x [floor(y0 H), floor(y1 H)).
Raster crop_roi(const Raster& img, const RoiSpec& roi);

/// Population statistics per channel (exact integer accumulation).
ChannelStats roi_stats(const Raster& roi_img);

/// Band mask with lo/hi = clamp(round(mean -+ k*std), 0, 255) per channel;
/// every channel must pass.
BitMask road_band_mask(const Raster& img, const ChannelStats& stats, double k = 3.0);

/// Contour maximizing contour_area; ties break toward the earliest entry.
const Contour& largest_contour(const std::vector<Contour>& contours);

/// Full isolation chain: HSV -> ROI stats -> band mask -> largest contour ->
/// convex hull -> hull mask -> masked road crop.
RoadExtraction extract_road(const Raster& img, const RoiSpec& roi = {}, double k = 3.0);

/// Write stage images 01_input.png .. 06_road.png into `dir`.
void dump_stages(const RoadExtraction& ex, const std::filesystem::path& dir);

}  // namespace roadsight
