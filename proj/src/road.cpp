#include "roadsight/road.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "roadsight/image_io.hpp"

namespace roadsight {

Raster crop_roi(const Raster& img, const RoiSpec& roi) {
    if (!(roi.x0 < roi.x1 && roi.y0 < roi.y1))
        throw InvalidInput("crop_roi: require x0 < x1 and y0 < y1");
    const int px0 = static_cast<int>(std::floor(roi.x0 * img.width));
    const int px1 = static_cast<int>(std::floor(roi.x1 * img.width));
    const int py0 = static_cast<int>(std::floor(roi.y0 * img.height));
    const int py1 = static_cast<int>(std::floor(roi.y1 * img.height));
    if (px1 <= px0 || py1 <= py0) throw InvalidInput("crop_roi: ROI maps to an empty pixel rectangle");

    Raster out(px1 - px0, py1 - py0, img.channels, img.space);
    for (int y = py0; y < py1; ++y)
        for (int x = px0; x < px1; ++x)
            for (int c = 0; c < img.channels; ++c) out.at(x - px0, y - py0, c) = img.at(x, y, c);
    return out;
}

ChannelStats roi_stats(const Raster& roi_img) {
    const std::size_t n = roi_img.pixel_count();
    ChannelStats st;
    st.mean.resize(roi_img.channels);
    st.std.resize(roi_img.channels);
    for (int c = 0; c < roi_img.channels; ++c) {
        std::int64_t sum = 0, sumsq = 0;
        for (std::size_t p = 0; p < n; ++p) {
            const int v = roi_img.data[p * roi_img.channels + c];
            sum += v;
            sumsq += static_cast<std::int64_t>(v) * v;
        }
        const double mean = static_cast<double>(sum) / static_cast<double>(n);
        const double var =
            std::max(0.0, static_cast<double>(sumsq) / static_cast<double>(n) - mean * mean);
        st.mean[c] = mean;
        st.std[c] = std::sqrt(var);
    }
    return st;
}

BitMask road_band_mask(const Raster& img, const ChannelStats& stats, double k) {
    if (!(k > 0)) throw InvalidInput("road_band_mask: k must be > 0");
    if (static_cast<int>(stats.mean.size()) != img.channels)
        throw InvalidInput("road_band_mask: stats channel count mismatch");
    std::vector<std::uint8_t> lo(img.channels), hi(img.channels);
    for (int c = 0; c < img.channels; ++c) {
        lo[c] = static_cast<std::uint8_t>(
            std::clamp(std::lround(stats.mean[c] - k * stats.std[c]), 0L, 255L));
        hi[c] = static_cast<std::uint8_t>(
            std::clamp(std::lround(stats.mean[c] + k * stats.std[c]), 0L, 255L));
    }
    return band_threshold(img, lo, hi);
}

const Contour& largest_contour(const std::vector<Contour>& contours) {
    if (contours.empty()) throw NoRoadError();
    std::size_t best = 0;
    double best_area = contour_area(contours[0]);
    for (std::size_t i = 1; i < contours.size(); ++i) {
        const double a = contour_area(contours[i]);
        if (a > best_area) {
            best = i;
            best_area = a;
        }
    }
    return contours[best];
}

RoadExtraction extract_road(const Raster& img, const RoiSpec& roi, double k) {
    if (img.space != ColorSpace::RGB) throw InvalidInput("extract_road: input must be RGB");

    RoadExtraction ex;
    ex.input = img;
    ex.hsv = to_hsv(img);
    ex.roi_img = crop_roi(ex.hsv, roi);
    ex.roi_x0 = static_cast<int>(std::floor(roi.x0 * img.width));
    ex.roi_y0 = static_cast<int>(std::floor(roi.y0 * img.height));
    ex.stats = roi_stats(ex.roi_img);
    ex.mask = road_band_mask(ex.hsv, ex.stats, k);

    const std::vector<Contour> contours = find_contours(ex.mask);
    if (contours.empty()) throw NoRoadError(ex.mask);

    ex.hull = convex_hull(largest_contour(contours).points);
    ex.hull_mask = fill_polygon(ex.hull, img.width, img.height);

    ex.road = Raster(img.width, img.height, 3, ColorSpace::RGB);
    for (std::size_t p = 0; p < img.pixel_count(); ++p) {
        if (ex.hull_mask.bits[p]) {
            ex.road.data[p * 3 + 0] = img.data[p * 3 + 0];
            ex.road.data[p * 3 + 1] = img.data[p * 3 + 1];
            ex.road.data[p * 3 + 2] = img.data[p * 3 + 2];
        }
    }
    return ex;
}

namespace {

Raster mask_to_gray(const BitMask& m) {
    Raster out(m.width, m.height, 1, ColorSpace::GRAY);
    for (std::size_t i = 0; i < m.bits.size(); ++i) out.data[i] = m.bits[i] ? 255 : 0;
    return out;
}

}  // namespace

void dump_stages(const RoadExtraction& ex, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);

    write_png(dir / "01_input.png", ex.input);

    // HSV bytes rendered as-is (false color)
    Raster hsv_view = ex.hsv;
    hsv_view.space = ColorSpace::RGB;
    write_png(dir / "02_hsv.png", hsv_view);

    Raster roi_view = ex.roi_img;
    roi_view.space = ColorSpace::RGB;
    write_png(dir / "03_roi.png", roi_view);

    write_png(dir / "04_mask.png", mask_to_gray(ex.mask));

    Raster hull_view = ex.input;
    const auto& v = ex.hull.vertices;
    for (std::size_t i = 0; i < v.size(); ++i)
        draw_line(hull_view, v[i], v[(i + 1) % v.size()], 255, 0, 0);
    write_png(dir / "05_hull.png", hull_view);

    write_png(dir / "06_road.png", ex.road);
}

}  // namespace roadsight
