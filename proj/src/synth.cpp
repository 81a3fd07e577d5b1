#include "roadsight/synth.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "roadsight/image_io.hpp"
#include "roadsight/rng.hpp"

namespace roadsight {

namespace {

using json = nlohmann::ordered_json;

struct Ellipse {
    int cx, cy, rx, ry;
    int intensity;
};

struct RoadGeometry {
    int top_y;
    double left_top, right_top;    // road edge x at top_y
    double left_bot, right_bot;    // road edge x at height-1
    static constexpr int kLineWidth = 3;

    explicit RoadGeometry(int w, int h)
        : top_y(static_cast<int>(0.35 * h)),
          left_top(std::floor(0.36 * w)),
          right_top(std::floor(0.64 * w)),
          left_bot(std::floor(0.08 * w)),
          right_bot(std::floor(0.92 * w)) {}

    double left(int y, int h) const {
        const double t = static_cast<double>(y - top_y) / (h - 1 - top_y);
        return left_top + t * (left_bot - left_top);
    }
    double right(int y, int h) const {
        const double t = static_cast<double>(y - top_y) / (h - 1 - top_y);
        return right_top + t * (right_bot - right_top);
    }
};

int noise(std::mt19937_64& rng, int amp) {
    return static_cast<int>(rng_below(rng, 2 * static_cast<std::uint64_t>(amp) + 1)) - amp;
}

std::uint8_t u8(int v) { return static_cast<std::uint8_t>(std::clamp(v, 0, 255)); }

struct FramePlan {
    int road_base;
    std::vector<Ellipse> ellipses;
};

FramePlan plan_frame(const SynthConfig& cfg, const RoadGeometry& geo, int index, int label) {
    std::mt19937_64 rng = make_rng(cfg.seed, 2 * static_cast<std::uint64_t>(index));
    FramePlan plan;
    plan.road_base = 112 + static_cast<int>(rng_below(rng, 24));
    if (label == 1) {
        const int n_e = 1 + static_cast<int>(rng_below(rng, 3));
        for (int e = 0; e < n_e; ++e) {
            const double t = 0.25 + 0.55 * rng_unit(rng);
            const int cy = geo.top_y + static_cast<int>(t * (cfg.height - 1 - geo.top_y));
            int rx = 10 + static_cast<int>(rng_below(rng, 12));
            const double lo = geo.left(cy, cfg.height) + RoadGeometry::kLineWidth;
            const double hi = geo.right(cy, cfg.height) - RoadGeometry::kLineWidth;
            const int max_rx = static_cast<int>((hi - lo) / 2.0) - 3;
            rx = std::min(rx, std::max(6, max_rx));
            const int ry = 4 + static_cast<int>(rng_below(rng, static_cast<std::uint64_t>(rx - 3)));
            const int span = static_cast<int>(hi - rx - 2) - static_cast<int>(lo + rx + 2) + 1;
            const int cx = static_cast<int>(lo + rx + 2) +
                           (span > 1 ? static_cast<int>(rng_below(rng, span)) : 0);
            const int depth = 55 + static_cast<int>(rng_below(rng, 26));
            plan.ellipses.push_back({cx, cy, rx, ry, std::max(10, plan.road_base - depth)});
        }
    }
    return plan;
}

Raster render_frame(const SynthConfig& cfg, const RoadGeometry& geo, const FramePlan& plan,
                    int index) {
    std::mt19937_64 rng = make_rng(cfg.seed, 2 * static_cast<std::uint64_t>(index) + 1);
    Raster img(cfg.width, cfg.height, 3, ColorSpace::RGB);

    for (int y = 0; y < cfg.height; ++y) {
        const double l = geo.left(y, cfg.height);
        const double r = geo.right(y, cfg.height);
        const double cx_lane = (l + r) / 2.0;
        for (int x = 0; x < cfg.width; ++x) {
            const int n0 = noise(rng, 6), n1 = noise(rng, 6), n2 = noise(rng, 6);
            int rr, gg, bb;
            if (y < geo.top_y) {  // sky
                rr = 135 + n0;
                gg = 206 + n1;
                bb = 235 + n2;
            } else if (x < l || x > r) {  // grass shoulders
                rr = 62 + n0;
                gg = 158 + n1;
                bb = 62 + n2;
            } else if (x < l + RoadGeometry::kLineWidth || x > r - RoadGeometry::kLineWidth) {
                rr = 235 + n0;  // solid white edge lines
                gg = 235 + n1;
                bb = 235 + n2;
            } else if ((y / 10) % 2 == 0 && std::abs(x - cx_lane) <= 1.5) {
                rr = 230 + n0;  // dashed center lane line
                gg = 222 + n1;
                bb = 170 + n2;
            } else {
                int base = plan.road_base;
                for (const Ellipse& e : plan.ellipses) {
                    const double dx = (x - e.cx) / static_cast<double>(e.rx);
                    const double dy = (y - e.cy) / static_cast<double>(e.ry);
                    if (dx * dx + dy * dy <= 1.0) {
                        base = e.intensity;
                        break;
                    }
                }
                rr = base + n0;
                gg = base + n1;
                bb = base + n2;
            }
            img.at(x, y, 0) = u8(rr);
            img.at(x, y, 1) = u8(gg);
            img.at(x, y, 2) = u8(bb);
        }
    }
    return img;
}

}  // namespace

Raster synth_frame(const SynthConfig& cfg, int index, int label) {
    const RoadGeometry geo(cfg.width, cfg.height);
    return render_frame(cfg, geo, plan_frame(cfg, geo, index, label), index);
}

Manifest synth_dataset(const std::filesystem::path& out_root, const SynthConfig& cfg) {
    if (cfg.n < 4) throw InvalidConfig("synth: need n >= 4");
    if (cfg.width < 64 || cfg.height < 64) throw InvalidConfig("synth: frame too small");

    std::error_code ec;
    std::filesystem::create_directories(out_root / "images", ec);
    if (ec) throw DataError(out_root.string() + ": cannot create output directories");

    const RoadGeometry geo(cfg.width, cfg.height);
    const int lw = RoadGeometry::kLineWidth;
    const json road_polygon = {
        {static_cast<int>(geo.left_top) + lw, geo.top_y},
        {static_cast<int>(geo.right_top) - lw, geo.top_y},
        {static_cast<int>(geo.right_bot) - lw, cfg.height - 1},
        {static_cast<int>(geo.left_bot) + lw, cfg.height - 1},
    };

    Manifest m;
    m.root = out_root;
    json frames = json::array();
    std::ofstream csv(out_root / "manifest.csv", std::ios::trunc);
    if (!csv) throw DataError((out_root / "manifest.csv").string() + ": cannot open for writing");
    csv << "path,label\n";

    for (int i = 0; i < cfg.n; ++i) {
        const int label = i % 2;
        const FramePlan plan = plan_frame(cfg, geo, i, label);
        const Raster img = render_frame(cfg, geo, plan, i);

        char name[32];
        std::snprintf(name, sizeof(name), "frame_%04d.png", i);
        const std::string rel = std::string("images/") + name;
        write_png(out_root / rel, img);
        csv << rel << "," << label << "\n";
        m.entries.push_back({rel, label});

        json ellipses = json::array();
        for (const Ellipse& e : plan.ellipses)
            ellipses.push_back({{"cx", e.cx},
                                {"cy", e.cy},
                                {"rx", e.rx},
                                {"ry", e.ry},
                                {"intensity", e.intensity}});
        frames.push_back({{"file", rel},
                          {"label", label},
                          {"road_base", plan.road_base},
                          {"ellipses", ellipses}});
    }
    csv.close();

    json gt;
    gt["width"] = cfg.width;
    gt["height"] = cfg.height;
    gt["n"] = cfg.n;
    gt["seed"] = cfg.seed;
    gt["road_polygon"] = road_polygon;
    gt["frames"] = frames;
    std::ofstream gtf(out_root / "ground_truth.json", std::ios::trunc);
    if (!gtf) throw DataError((out_root / "ground_truth.json").string() + ": cannot open for writing");
    gtf << gt.dump(2) << "\n";

    std::sort(m.entries.begin(), m.entries.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) { return a.path < b.path; });
    return m;
}

}  // namespace roadsight
