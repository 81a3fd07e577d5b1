#pragma once

#include <cstdint>
#include <vector>

#include "roadsight/raster.hpp"

namespace roadsight {

struct Point {
    int x = 0;
    int y = 0;
    bool operator==(const Point&) const = default;
};

/// Ordered outer-boundary trace of one 8-connected component. Consecutive
/// points are 8-adjacent and the trace closes back onto its first point.
struct Contour {
    std::vector<Point> points;
};

/// Vertex list, counter-clockwise in mathematical axes (y up); rendered in
/// image coordinates (y down) the winding appears clockwise.
struct Polygon {
    std::vector<Point> vertices;
};

/// 8-connected component labels in row-major discovery order.
/// labels[i] == -1 for background, otherwise a component id in [0, count).
struct ComponentMap {
    int width = 0;
    int height = 0;
    int count = 0;
    std::vector<std::int32_t> labels;
    std::vector<Point> anchors;      // topmost-then-leftmost pixel per component
    std::vector<std::size_t> sizes;  // pixel count per component

    std::int32_t label(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }
};

/// Label all 8-connected foreground components.
ComponentMap connected_components(const BitMask& m);

/// Moore boundary following from each component's anchor. One outer contour
/// per component, listed in anchor (topmost-then-leftmost) order. Holes are
/// not reported.
std::vector<Contour> find_contours(const BitMask& m);

/// Absolute shoelace area of the closed vertex polygon of `c`.
double contour_area(const Contour& c);

/// Length of the closed polyline through the contour points.
double contour_perimeter(const Contour& c);

/// Andrew monotone chain. Strictly convex output (collinear boundary points
/// dropped); 1 distinct point -> 1 vertex, all collinear -> the 2 endpoints.
Polygon convex_hull(const std::vector<Point>& points);

/// Convex-polygon scanline fill: a bit is set iff the pixel center lies inside
/// or on the boundary. Exact integer/rational span arithmetic.
BitMask fill_polygon(const Polygon& p, int width, int height);

/// Bresenham segment, RGB color, clipped to the raster.
void draw_line(Raster& img, Point a, Point b, std::uint8_t r, std::uint8_t g, std::uint8_t b_);

}  // namespace roadsight
