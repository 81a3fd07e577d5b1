#include "roadsight/morphology.hpp"

#include <utility>

namespace roadsight {

namespace {

std::vector<std::pair<int, int>> se_offsets(const StructElem& se) {
    std::vector<std::pair<int, int>> offs;
    const int r = se.radius;
    if (se.shape == SEShape::SQUARE) {
        offs.reserve(static_cast<std::size_t>(2 * r + 1) * (2 * r + 1));
        for (int dy = -r; dy <= r; ++dy)
            for (int dx = -r; dx <= r; ++dx) offs.emplace_back(dx, dy);
    } else {  // CROSS: axis-aligned arms
        for (int d = -r; d <= r; ++d) offs.emplace_back(d, 0);
        for (int d = -r; d <= r; ++d)
            if (d != 0) offs.emplace_back(0, d);
    }
    return offs;
}

}  // namespace

BitMask erode(const BitMask& m, const StructElem& se) {
    const auto offs = se_offsets(se);
    BitMask out(m.width, m.height);
    for (int y = 0; y < m.height; ++y) {
        for (int x = 0; x < m.width; ++x) {
            bool all = true;
            for (const auto& [dx, dy] : offs) {
                const int nx = x + dx, ny = y + dy;
                if (nx < 0 || nx >= m.width || ny < 0 || ny >= m.height || !m.get(nx, ny)) {
                    all = false;
                    break;
                }
            }
            if (all) out.set(x, y);
        }
    }
    return out;
}

BitMask dilate(const BitMask& m, const StructElem& se) {
    const auto offs = se_offsets(se);
    BitMask out(m.width, m.height);
    for (int y = 0; y < m.height; ++y) {
        for (int x = 0; x < m.width; ++x) {
            bool any = false;
            for (const auto& [dx, dy] : offs) {
                const int nx = x + dx, ny = y + dy;
                if (nx >= 0 && nx < m.width && ny >= 0 && ny < m.height && m.get(nx, ny)) {
                    any = true;
                    break;
                }
            }
            if (any) out.set(x, y);
        }
    }
    return out;
}

BitMask open(const BitMask& m, const StructElem& se) { return dilate(erode(m, se), se); }

BitMask close(const BitMask& m, const StructElem& se) { return erode(dilate(m, se), se); }

}  // namespace roadsight
