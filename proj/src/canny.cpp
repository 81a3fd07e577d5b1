#include "roadsight/canny.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace roadsight {

namespace {

constexpr double kCannySigma = 1.4;

int clamp_idx(int i, int n) { return std::clamp(i, 0, n - 1); }

}  // namespace

BitMask canny(const Raster& img, double lo, double hi) {
    if (img.space != ColorSpace::GRAY) throw InvalidInput("canny: input must be GRAY");
    if (lo < 0 || lo > hi) throw InvalidInput("canny: require 0 <= lo <= hi");

    const Raster sm = gaussian_blur(img, kCannySigma);
    const int w = sm.width, h = sm.height;

    // Sobel with clamped borders
    std::vector<double> gx(sm.data.size()), gy(sm.data.size()), mag(sm.data.size());
    auto px = [&](int x, int y) { return static_cast<double>(sm.at(clamp_idx(x, w), clamp_idx(y, h), 0)); };
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double sx = (px(x + 1, y - 1) + 2 * px(x + 1, y) + px(x + 1, y + 1)) -
                              (px(x - 1, y - 1) + 2 * px(x - 1, y) + px(x - 1, y + 1));
            const double sy = (px(x - 1, y + 1) + 2 * px(x, y + 1) + px(x + 1, y + 1)) -
                              (px(x - 1, y - 1) + 2 * px(x, y - 1) + px(x + 1, y - 1));
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            gx[i] = sx;
            gy[i] = sy;
            mag[i] = std::hypot(sx, sy);
        }
    }

    // Non-maximum suppression. Direction quantized to 0/45/90/135 degrees; a
    // pixel survives when strictly greater than the neighbor on the negative
    // side and >= the neighbor on the positive side, so plateaus of width two
    // (exact ties across a symmetric edge) keep a single response.
    std::vector<std::uint8_t> cls(sm.data.size(), 0);  // 0 none, 1 weak, 2 strong
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            if (mag[i] <= 0.0 || mag[i] < lo) continue;
            double angle = std::atan2(gy[i], gx[i]) * 180.0 / std::numbers::pi;
            if (angle < 0) angle += 180.0;
            int dx, dy;
            if (angle < 22.5 || angle >= 157.5) {
                dx = 1;
                dy = 0;
            } else if (angle < 67.5) {
                dx = 1;
                dy = 1;
            } else if (angle < 112.5) {
                dx = 0;
                dy = 1;
            } else {
                dx = -1;
                dy = 1;
            }
            auto mag_at = [&](int xx, int yy) {
                if (xx < 0 || xx >= w || yy < 0 || yy >= h) return 0.0;
                return mag[static_cast<std::size_t>(yy) * w + xx];
            };
            if (mag[i] > mag_at(x - dx, y - dy) && mag[i] >= mag_at(x + dx, y + dy))
                cls[i] = mag[i] >= hi ? 2 : 1;
        }
    }

    // hysteresis: keep strong pixels and weak pixels 8-connected to them
    BitMask out(w, h);
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < cls.size(); ++i) {
        if (cls[i] == 2 && !out.bits[i]) {
            out.bits[i] = 1;
            stack.push_back(i);
            while (!stack.empty()) {
                const std::size_t j = stack.back();
                stack.pop_back();
                const int jx = static_cast<int>(j % w), jy = static_cast<int>(j / w);
                for (int oy = -1; oy <= 1; ++oy) {
                    for (int ox = -1; ox <= 1; ++ox) {
                        const int nx = jx + ox, ny = jy + oy;
                        if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                        const std::size_t nj = static_cast<std::size_t>(ny) * w + nx;
                        if (cls[nj] != 0 && !out.bits[nj]) {
                            out.bits[nj] = 1;
                            stack.push_back(nj);
                        }
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace roadsight
