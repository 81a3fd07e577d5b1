#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "roadsight/raster.hpp"

namespace roadsight {

enum class Method { MORPH, BLOB, EDGE };

std::string method_name(Method m);

/// Axis-aligned candidate region with a method tag and a sort score in [0,1].
struct Candidate {
    int x = 0, y = 0, w = 0, h = 0;  // bbox, within image bounds
    std::size_t area = 0;            // component pixel count
    double score = 0.0;
    Method method = Method::MORPH;
};

/// Dark-region pass: blur, intensity band, opening + closing, contours.
struct MorphParams {
    double sigma = 2.0;
    std::uint8_t band_lo = 0;
    std::uint8_t band_hi = 90;
    int se_radius = 1;
    std::size_t min_area = 50;
    std::size_t max_area = 0;  // 0 -> width*height/4
};

/// Blob filter over intensity band: area window plus circularity floor.
struct BlobParams {
    std::size_t min_area = 40;
    std::size_t max_area = 0;  // 0 -> width*height/4
    double min_circularity = 0.4;
    std::uint8_t band_lo = 0;
    std::uint8_t band_hi = 90;
};

/// Candidates from dark regions after blur + band threshold + open/close.
/// Scores are the candidate's area fraction of the frame.
std::pair<std::vector<Candidate>, Raster> visualize_morph(const Raster& img,
                                                          const MorphParams& p = {});

/// Connected dark blobs inside the road area, filtered by area and
/// circularity (4*pi*A/P^2, clamped to 1); score = circularity. `road_area`
/// limits the search (pass the extraction hull mask); when null, any pixel
/// with a nonzero channel counts as road.
std::vector<Candidate> detect_blobs(const Raster& road, const BlobParams& p = {},
                                    const BitMask* road_area = nullptr);

/// Canny edges dilated by a square element, one candidate per edge component.
/// Score is fixed at 0.5: edge evidence alone carries no magnitude.
std::pair<std::vector<Candidate>, Raster> visualize_edges(const Raster& road, double lo,
                                                          double hi, int dil_r);

/// Copy of `img` with a 2-px red border per candidate, drawn outward from the
/// bbox so the boxed content stays visible. Later candidates draw over earlier.
Raster annotate(const Raster& img, const std::vector<Candidate>& cands);

/// JSON array of {method,bbox,area,score} objects.
std::string candidates_to_json(const std::vector<Candidate>& cands);

}  // namespace roadsight
