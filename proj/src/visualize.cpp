#include "roadsight/visualize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "roadsight/canny.hpp"
#include "roadsight/contours.hpp"
#include "roadsight/morphology.hpp"

namespace roadsight {

namespace {

struct Box {
    int x0, y0, x1, y1;
};

std::vector<Box> component_bboxes(const ComponentMap& cm) {
    std::vector<Box> boxes(cm.count, Box{cm.width, cm.height, -1, -1});
    for (int y = 0; y < cm.height; ++y) {
        for (int x = 0; x < cm.width; ++x) {
            const std::int32_t id = cm.label(x, y);
            if (id < 0) continue;
            Box& b = boxes[id];
            b.x0 = std::min(b.x0, x);
            b.y0 = std::min(b.y0, y);
            b.x1 = std::max(b.x1, x);
            b.y1 = std::max(b.y1, y);
        }
    }
    return boxes;
}

Raster ensure_rgb(const Raster& img) {
    if (img.channels == 3) {
        Raster out = img;
        out.space = ColorSpace::RGB;
        return out;
    }
    Raster out(img.width, img.height, 3, ColorSpace::RGB);
    for (std::size_t p = 0; p < img.pixel_count(); ++p)
        out.data[p * 3 + 0] = out.data[p * 3 + 1] = out.data[p * 3 + 2] = img.data[p];
    return out;
}

Raster gray_of(const Raster& img) {
    if (img.space == ColorSpace::GRAY) return img;
    return to_gray(img);
}

/// per-contour circularity from component size and traced perimeter
double circularity(std::size_t area, double perimeter) {
    const double p = std::max(perimeter, 1.0);
    return std::min(1.0, 4.0 * std::numbers::pi * static_cast<double>(area) / (p * p));
}

}  // namespace

std::string method_name(Method m) {
    switch (m) {
        case Method::MORPH: return "morph";
        case Method::BLOB: return "blob";
        case Method::EDGE: return "edge";
    }
    return "?";
}

std::pair<std::vector<Candidate>, Raster> visualize_morph(const Raster& img,
                                                          const MorphParams& p) {
    const Raster gray = gray_of(img);
    const Raster blurred = gaussian_blur(gray, p.sigma);
    BitMask mask = band_threshold(blurred, {p.band_lo}, {p.band_hi});
    const StructElem se(p.se_radius, SEShape::SQUARE);
    mask = close(open(mask, se), se);

    const std::size_t max_area =
        p.max_area ? p.max_area : static_cast<std::size_t>(img.width) * img.height / 4;
    const double frame_px = static_cast<double>(img.width) * img.height;

    const ComponentMap cm = connected_components(mask);
    const std::vector<Box> boxes = component_bboxes(cm);
    std::vector<Candidate> cands;
    for (int id = 0; id < cm.count; ++id) {
        const std::size_t area = cm.sizes[id];
        if (area < p.min_area || area > max_area) continue;
        const Box& b = boxes[id];
        Candidate c;
        c.x = b.x0;
        c.y = b.y0;
        c.w = b.x1 - b.x0 + 1;
        c.h = b.y1 - b.y0 + 1;
        c.area = area;
        c.score = std::min(1.0, static_cast<double>(area) / frame_px);
        c.method = Method::MORPH;
        cands.push_back(c);
    }
    return {cands, annotate(ensure_rgb(img), cands)};
}

std::vector<Candidate> detect_blobs(const Raster& road, const BlobParams& p,
                                    const BitMask* road_area) {
    if (p.max_area && p.min_area > p.max_area)
        throw InvalidInput("detect_blobs: min_area > max_area");
    if (road_area && (road_area->width != road.width || road_area->height != road.height))
        throw InvalidInput("detect_blobs: road_area dimensions mismatch");

    const Raster gray = gray_of(road);
    BitMask mask = band_threshold(gray, {p.band_lo}, {p.band_hi});
    for (std::size_t i = 0; i < mask.bits.size(); ++i) {
        bool in_road;
        if (road_area) {
            in_road = road_area->bits[i] != 0;
        } else {
            in_road = false;
            for (int c = 0; c < road.channels; ++c)
                in_road = in_road || road.data[i * road.channels + c] != 0;
        }
        if (!in_road) mask.bits[i] = 0;
    }

    const std::size_t max_area =
        p.max_area ? p.max_area : static_cast<std::size_t>(road.width) * road.height / 4;

    const ComponentMap cm = connected_components(mask);
    const std::vector<Contour> contours = find_contours(mask);
    const std::vector<Box> boxes = component_bboxes(cm);
    std::vector<Candidate> cands;
    for (int id = 0; id < cm.count; ++id) {
        const std::size_t area = cm.sizes[id];
        if (area < p.min_area || area > max_area) continue;
        const double circ = circularity(area, contour_perimeter(contours[id]));
        if (circ < p.min_circularity) continue;
        const Box& b = boxes[id];
        Candidate c;
        c.x = b.x0;
        c.y = b.y0;
        c.w = b.x1 - b.x0 + 1;
        c.h = b.y1 - b.y0 + 1;
        c.area = area;
        c.score = circ;
        c.method = Method::BLOB;
        cands.push_back(c);
    }
    return cands;
}

std::pair<std::vector<Candidate>, Raster> visualize_edges(const Raster& road, double lo,
                                                          double hi, int dil_r) {
    const StructElem se(dil_r, SEShape::SQUARE);  // validates dil_r >= 1
    const Raster gray = gray_of(road);
    BitMask edges = dilate(canny(gray, lo, hi), se);

    const ComponentMap cm = connected_components(edges);
    const std::vector<Box> boxes = component_bboxes(cm);
    std::vector<Candidate> cands;
    for (int id = 0; id < cm.count; ++id) {
        const Box& b = boxes[id];
        Candidate c;
        c.x = b.x0;
        c.y = b.y0;
        c.w = b.x1 - b.x0 + 1;
        c.h = b.y1 - b.y0 + 1;
        c.area = cm.sizes[id];
        c.score = 0.5;
        c.method = Method::EDGE;
        cands.push_back(c);
    }
    return {cands, annotate(ensure_rgb(road), cands)};
}

Raster annotate(const Raster& img, const std::vector<Candidate>& cands) {
    Raster out = ensure_rgb(img);
    for (const Candidate& c : cands) {
        for (int t = 0; t < 2; ++t) {  // bbox ring plus one ring outward
            const int x0 = c.x - t, y0 = c.y - t;
            const int x1 = c.x + c.w - 1 + t, y1 = c.y + c.h - 1 + t;
            for (int x = x0; x <= x1; ++x) {
                for (int y : {y0, y1}) {
                    if (x >= 0 && x < out.width && y >= 0 && y < out.height) {
                        out.at(x, y, 0) = 255;
                        out.at(x, y, 1) = 0;
                        out.at(x, y, 2) = 0;
                    }
                }
            }
            for (int y = y0 + 1; y <= y1 - 1; ++y) {
                for (int x : {x0, x1}) {
                    if (x >= 0 && x < out.width && y >= 0 && y < out.height) {
                        out.at(x, y, 0) = 255;
                        out.at(x, y, 1) = 0;
                        out.at(x, y, 2) = 0;
                    }
                }
            }
        }
    }
    return out;
}

std::string candidates_to_json(const std::vector<Candidate>& cands) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const Candidate& c : cands) {
        nlohmann::ordered_json o;
        o["method"] = method_name(c.method);
        o["bbox"] = {c.x, c.y, c.w, c.h};
        o["area"] = c.area;
        o["score"] = c.score;
        arr.push_back(o);
    }
    return arr.dump(2);
}

}  // namespace roadsight
