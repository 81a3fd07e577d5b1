#include "roadsight/contours.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace roadsight {

namespace {

// clockwise 8-neighborhood in screen coordinates (y down), starting west
constexpr int kDx[8] = {-1, -1, 0, 1, 1, 1, 0, -1};
constexpr int kDy[8] = {0, -1, -1, -1, 0, 1, 1, 1};

std::int64_t cross(Point o, Point a, Point b) {
    return static_cast<std::int64_t>(a.x - o.x) * (b.y - o.y) -
           static_cast<std::int64_t>(a.y - o.y) * (b.x - o.x);
}

std::int64_t floor_div(std::int64_t n, std::int64_t d) {
    // d > 0
    return n >= 0 ? n / d : -((-n + d - 1) / d);
}

std::int64_t ceil_div(std::int64_t n, std::int64_t d) {
    // d > 0
    return n >= 0 ? (n + d - 1) / d : -((-n) / d);
}

// rational x = num/den with den > 0
struct Rat {
    std::int64_t num = 0;
    std::int64_t den = 1;
};

bool rat_less(const Rat& a, const Rat& b) { return a.num * b.den < b.num * a.den; }

}  // namespace

ComponentMap connected_components(const BitMask& m) {
    ComponentMap cm;
    cm.width = m.width;
    cm.height = m.height;
    cm.labels.assign(m.bits.size(), -1);

    std::vector<Point> stack;
    for (int y = 0; y < m.height; ++y) {
        for (int x = 0; x < m.width; ++x) {
            const std::size_t idx = static_cast<std::size_t>(y) * m.width + x;
            if (!m.bits[idx] || cm.labels[idx] != -1) continue;

            const std::int32_t id = cm.count++;
            cm.anchors.push_back({x, y});
            std::size_t size = 0;
            stack.push_back({x, y});
            cm.labels[idx] = id;
            while (!stack.empty()) {
                const Point p = stack.back();
                stack.pop_back();
                ++size;
                for (int k = 0; k < 8; ++k) {
                    const int nx = p.x + kDx[k], ny = p.y + kDy[k];
                    if (nx < 0 || nx >= m.width || ny < 0 || ny >= m.height) continue;
                    const std::size_t nidx = static_cast<std::size_t>(ny) * m.width + nx;
                    if (m.bits[nidx] && cm.labels[nidx] == -1) {
                        cm.labels[nidx] = id;
                        stack.push_back({nx, ny});
                    }
                }
            }
            cm.sizes.push_back(size);
        }
    }
    return cm;
}

namespace {

// ring index of the offset (dx,dy), dx,dy in {-1,0,1}, not both 0
int dir_index(int dx, int dy) {
    for (int k = 0; k < 8; ++k)
        if (kDx[k] == dx && kDy[k] == dy) return k;
    return -1;
}

}  // namespace

std::vector<Contour> find_contours(const BitMask& m) {
    const ComponentMap cm = connected_components(m);
    std::vector<Contour> contours;
    contours.reserve(cm.count);

    auto fg = [&](int x, int y) {
        return x >= 0 && x < m.width && y >= 0 && y < m.height && m.get(x, y);
    };

    for (int id = 0; id < cm.count; ++id) {
        const Point start = cm.anchors[id];
        Contour c;
        c.points.push_back(start);

        // Scan clockwise around the anchor starting after its west neighbor;
        // W, NW, N, NE of an anchor are background by row-major minimality.
        int first_dir = -1;
        for (int k = 1; k <= 8; ++k) {
            const int kk = k % 8;
            if (fg(start.x + kDx[kk], start.y + kDy[kk])) {
                first_dir = kk;
                break;
            }
        }
        if (first_dir < 0) {  // isolated pixel
            contours.push_back(std::move(c));
            continue;
        }

        const Point second{start.x + kDx[first_dir], start.y + kDy[first_dir]};
        Point cur = second;
        // backtrack = last background position scanned before entering cur
        Point back{start.x + kDx[(first_dir + 7) % 8], start.y + kDy[(first_dir + 7) % 8]};
        c.points.push_back(cur);

        const std::size_t step_cap = 8 * m.bits.size() + 16;
        for (std::size_t steps = 0; steps < step_cap; ++steps) {
            const int bdir = dir_index(back.x - cur.x, back.y - cur.y);
            int found = -1;
            for (int k = 1; k <= 8; ++k) {
                const int kk = (bdir + k) % 8;
                if (fg(cur.x + kDx[kk], cur.y + kDy[kk])) {
                    found = kk;
                    break;
                }
            }
            const Point nxt{cur.x + kDx[found], cur.y + kDy[found]};
            // the walk is a function of (cur, back); repeating the first
            // directed move means the cycle is complete
            if (cur == start && nxt == second) {
                c.points.pop_back();  // drop the terminal revisit of start
                break;
            }
            back = {cur.x + kDx[(found + 7) % 8], cur.y + kDy[(found + 7) % 8]};
            cur = nxt;
            // start is re-appended on mid-walk passes (pinched components)
            // and dropped again above when the walk finally closes
            c.points.push_back(cur);
        }
        contours.push_back(std::move(c));
    }
    return contours;
}

double contour_area(const Contour& c) {
    const auto& pts = c.points;
    if (pts.empty()) throw InvalidInput("contour_area: empty contour");
    std::int64_t twice = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Point& a = pts[i];
        const Point& b = pts[(i + 1) % pts.size()];
        twice += static_cast<std::int64_t>(a.x) * b.y - static_cast<std::int64_t>(b.x) * a.y;
    }
    return std::abs(static_cast<double>(twice)) / 2.0;
}

double contour_perimeter(const Contour& c) {
    const auto& pts = c.points;
    if (pts.empty()) throw InvalidInput("contour_perimeter: empty contour");
    if (pts.size() == 1) return 0.0;
    double len = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Point& a = pts[i];
        const Point& b = pts[(i + 1) % pts.size()];
        len += std::hypot(a.x - b.x, a.y - b.y);
    }
    return len;
}

Polygon convex_hull(const std::vector<Point>& points) {
    if (points.empty()) throw InvalidInput("convex_hull: empty point set");

    std::vector<Point> pts = points;
    std::sort(pts.begin(), pts.end(),
              [](Point a, Point b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    const std::size_t n = pts.size();
    if (n == 1) return Polygon{{pts[0]}};

    std::vector<Point> h(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {  // lower hull
        while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = n - 1, lo = k + 1; i-- > 0;) {  // upper hull
        while (k >= lo && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);  // last point repeats the first
    return Polygon{std::move(h)};
}

BitMask fill_polygon(const Polygon& p, int width, int height) {
    if (width < 1 || height < 1) throw InvalidInput("fill_polygon: dimensions must be >= 1");
    if (p.vertices.empty()) throw InvalidInput("fill_polygon: empty polygon");

    BitMask out(width, height);
    const auto& v = p.vertices;
    const std::size_t n = v.size();

    for (int y = 0; y < height; ++y) {
        bool have = false;
        Rat xmin, xmax;
        auto update = [&](Rat r) {
            if (!have) {
                xmin = xmax = r;
                have = true;
            } else {
                if (rat_less(r, xmin)) xmin = r;
                if (rat_less(xmax, r)) xmax = r;
            }
        };

        for (std::size_t i = 0; i < n; ++i) {
            const Point a = v[i];
            const Point b = v[n == 1 ? i : (i + 1) % n];
            const int ylo = std::min(a.y, b.y), yhi = std::max(a.y, b.y);
            if (y < ylo || y > yhi) continue;
            if (a.y == b.y) {
                update({a.x, 1});
                update({b.x, 1});
            } else {
                std::int64_t den = b.y - a.y;
                std::int64_t num = static_cast<std::int64_t>(a.x) * den +
                                   static_cast<std::int64_t>(y - a.y) * (b.x - a.x);
                if (den < 0) {
                    den = -den;
                    num = -num;
                }
                update({num, den});
            }
        }
        if (!have) continue;

        int x0 = static_cast<int>(std::max<std::int64_t>(ceil_div(xmin.num, xmin.den), 0));
        int x1 = static_cast<int>(std::min<std::int64_t>(floor_div(xmax.num, xmax.den), width - 1));
        for (int x = x0; x <= x1; ++x) out.set(x, y);
    }
    return out;
}

void draw_line(Raster& img, Point a, Point b, std::uint8_t r, std::uint8_t g, std::uint8_t b_) {
    if (img.channels != 3) throw InvalidInput("draw_line: raster must have 3 channels");
    const int dx = std::abs(b.x - a.x), sx = a.x < b.x ? 1 : -1;
    const int dy = -std::abs(b.y - a.y), sy = a.y < b.y ? 1 : -1;
    int err = dx + dy;
    int x = a.x, y = a.y;
    while (true) {
        if (x >= 0 && x < img.width && y >= 0 && y < img.height) {
            img.at(x, y, 0) = r;
            img.at(x, y, 1) = g;
            img.at(x, y, 2) = b_;
        }
        if (x == b.x && y == b.y) break;
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y += sy;
        }
    }
}

}  // namespace roadsight
