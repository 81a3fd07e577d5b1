// Acceptance suite: one line per criterion, [PASS]/[FAIL], nonzero exit on
// any failure. Ships its own independent oracles (brute-force hull, flood
// fill, finite differences, hand-simulated boosting trace).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "roadsight/benchmark.hpp"
#include "roadsight/canny.hpp"
#include "roadsight/contours.hpp"
#include "roadsight/image_io.hpp"
#include "roadsight/morphology.hpp"
#include "roadsight/synth.hpp"

using namespace roadsight;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void criterion(const std::string& name, const std::function<std::string()>& body) {
    const auto t0 = Clock::now();
    std::string detail;
    bool ok = true;
    try {
        detail = body();
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (!ok) ++g_failures;
    std::printf("[%s] %s: %s (%.1fs)\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str(), secs);
    std::fflush(stdout);
}

struct CheckFailed : std::runtime_error {
    explicit CheckFailed(const std::string& m) : std::runtime_error(m) {}
};

void require(bool cond, const std::string& what) {
    if (!cond) throw CheckFailed(what);
}

void require_runtime(const Clock::time_point& t0, double limit, const std::string& what) {
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    require(secs < limit, what + " exceeded runtime limit: " + std::to_string(secs) + "s >= " +
                              std::to_string(limit) + "s");
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    require(in.good(), "cannot read " + p.string());
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

fs::path fresh_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::int64_t cross3(Point o, Point a, Point b) {
    return static_cast<std::int64_t>(a.x - o.x) * (b.y - o.y) -
           static_cast<std::int64_t>(a.y - o.y) * (b.x - o.x);
}

// O(n^3) hull oracle (see tests for the derivation): a point is a strict hull
// vertex iff some line through it and another point keeps all others weakly on
// one side and no collinear point puts it in a segment interior.
std::set<std::pair<int, int>> brute_hull_vertices(std::vector<Point> pts) {
    std::sort(pts.begin(), pts.end(),
              [](Point a, Point b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
    pts.erase(std::unique(pts.begin(), pts.end(), [](Point a, Point b) { return a == b; }),
              pts.end());
    std::set<std::pair<int, int>> verts;
    const std::size_t n = pts.size();
    if (n == 1) return {{pts[0].x, pts[0].y}};
    for (std::size_t i = 0; i < n; ++i) {
        bool corner = false;
        for (std::size_t j = 0; j < n && !corner; ++j) {
            if (j == i) continue;
            bool left = true, right = true, strict = true;
            for (std::size_t k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                const std::int64_t c = cross3(pts[i], pts[j], pts[k]);
                if (c < 0) left = false;
                if (c > 0) right = false;
                if (c == 0) {
                    const std::int64_t d =
                        static_cast<std::int64_t>(pts[j].x - pts[i].x) * (pts[k].x - pts[i].x) +
                        static_cast<std::int64_t>(pts[j].y - pts[i].y) * (pts[k].y - pts[i].y);
                    if (d < 0) strict = false;
                }
            }
            if ((left || right) && strict) corner = true;
        }
        if (corner) verts.insert({pts[i].x, pts[i].y});
    }
    return verts;
}

int flood_count(const BitMask& m) {
    std::vector<char> seen(m.bits.size(), 0);
    int count = 0;
    std::vector<std::pair<int, int>> q;
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * m.width + x;
            if (!m.bits[i] || seen[i]) continue;
            ++count;
            seen[i] = 1;
            q.push_back({x, y});
            while (!q.empty()) {
                auto [cx, cy] = q.back();
                q.pop_back();
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = cx + dx, ny = cy + dy;
                        if (nx < 0 || nx >= m.width || ny < 0 || ny >= m.height) continue;
                        const std::size_t jj = static_cast<std::size_t>(ny) * m.width + nx;
                        if (m.bits[jj] && !seen[jj]) {
                            seen[jj] = 1;
                            q.push_back({nx, ny});
                        }
                    }
            }
        }
    return count;
}

BitMask random_mask(int w, int h, double density, std::mt19937_64& rng) {
    BitMask m(w, h);
    for (auto& b : m.bits) b = (rng() % 1000) < density * 1000 ? 1 : 0;
    return m;
}

Dataset random_dataset(int n, int dim, int classes, std::mt19937_64& rng) {
    Dataset d;
    d.n_classes = classes;
    d.x.resize(n, dim);
    for (int i = 0; i < n; ++i) {
        d.y.push_back(static_cast<int>(rng() % classes));
        for (int j = 0; j < dim; ++j)
            d.x(i, j) = (static_cast<double>(rng() % 2000) / 1000.0 - 1.0) + 0.3 * d.y.back();
    }
    return d;
}

double row_accuracy(const EvalReport& r, const std::string& learner) {
    for (const EvalRow& row : r.rows)
        if (row.learner == learner) return row.accuracy;
    throw CheckFailed("report row missing: " + learner);
}

}  // namespace

int main(int argc, char** argv) {
    const fs::path golden_dir = argc > 1 ? fs::path(argv[1]) : fs::path("tests/golden");

    criterion("paper-number-honesty", [] {
        return std::string(
            "published Table 1-2 accuracies depend on a private dataset and are not "
            "reproduced; property and synthetic-oracle criteria below substitute");
    });

    criterion("geometry-oracle-suite", [] {
        const auto t0 = Clock::now();
        std::mt19937_64 rng(424242);
        for (int trial = 0; trial < 200; ++trial) {
            const int n = 1 + static_cast<int>(rng() % 50);
            const int range = 2 + static_cast<int>(rng() % 60);
            std::vector<Point> pts;
            for (int i = 0; i < n; ++i)
                pts.push_back({static_cast<int>(rng() % range), static_cast<int>(rng() % range)});
            const Polygon hull = convex_hull(pts);
            std::set<std::pair<int, int>> got;
            for (Point p : hull.vertices) got.insert({p.x, p.y});
            require(got == brute_hull_vertices(pts),
                    "hull vertex set mismatch at trial " + std::to_string(trial));
        }
        require_runtime(t0, 5.0, "geometry suite");
        return std::string("200/200 random point sets match the O(n^3) hull oracle exactly");
    });

    criterion("raster-property-suite", [] {
        const auto t0 = Clock::now();
        std::mt19937_64 rng(777);
        const StructElem se(1, SEShape::SQUARE);
        for (int trial = 0; trial < 100; ++trial) {
            const BitMask m = random_mask(64, 64, 0.3 + 0.4 * (trial % 10) / 10.0, rng);
            const BitMask o = open(m, se), c = close(m, se);
            require(open(o, se) == o, "opening not idempotent");
            require(close(c, se) == c, "closing not idempotent");
            const BitMask e = erode(m, se), d = dilate(m, se);
            for (std::size_t i = 0; i < m.bits.size(); ++i) {
                require(!e.bits[i] || m.bits[i], "erode not a subset of id");
                require(!m.bits[i] || d.bits[i], "id not a subset of dilate");
            }
        }
        for (double sigma : {0.8, 1.4, 2.5}) {
            const Raster flat(33, 21, 3, ColorSpace::RGB, 201);
            require(gaussian_blur(flat, sigma) == flat, "blur of constant raster not identity");
        }
        for (int trial = 0; trial < 50; ++trial) {
            const int w = 12 + static_cast<int>(rng() % 40), h = 12 + static_cast<int>(rng() % 40);
            const BitMask m = random_mask(w, h, 0.2 + 0.6 * (trial % 5) / 5.0, rng);
            require(static_cast<int>(find_contours(m).size()) == flood_count(m),
                    "contour count != flood-fill component count");
        }
        require_runtime(t0, 10.0, "raster property suite");
        return std::string(
            "open/close idempotent on 100 masks; erode<=id<=dilate; blur-of-constant exact; "
            "contour count matches flood fill on 50 masks");
    });

    criterion("learner-oracle-suite", [] {
        const auto t0 = Clock::now();
        std::mt19937_64 rng(90210);

        // KNN vs exhaustive scan
        {
            const Dataset d = random_dataset(60, 4, 3, rng);
            TrainConfig cfg;
            cfg.knn_k = 5;
            const Model m = fit_knn(d, cfg);
            for (int q = 0; q < 100; ++q) {
                Eigen::VectorXd x(4);
                for (int j = 0; j < 4; ++j) x[j] = static_cast<double>(rng() % 2000) / 1000.0 - 1.0;
                std::vector<std::pair<double, int>> dist;
                for (int i = 0; i < d.n(); ++i)
                    dist.push_back({(d.x.row(i).transpose() - x).squaredNorm(), i});
                std::sort(dist.begin(), dist.end());
                int votes[3] = {};
                for (int i = 0; i < 5; ++i) ++votes[d.y[dist[i].second]];
                int want = 0;
                for (int c = 1; c < 3; ++c)
                    if (votes[c] > votes[want]) want = c;
                require(m.predict(x) == want, "knn disagrees with the exhaustive scan");
            }
        }

        // logistic and softmax gradients vs central finite differences
        {
            const Dataset d = random_dataset(5, 4, 2, rng);
            Eigen::VectorXd w(4);
            for (int j = 0; j < 4; ++j) w[j] = static_cast<double>(rng() % 1000) / 1000.0 - 0.5;
            const double b = 0.25, lambda = 1e-2, eps = 1e-6;
            Eigen::VectorXd gw;
            double gb;
            logreg_grad(w, b, d.x, d.y, lambda, gw, gb);
            for (int j = 0; j < 4; ++j) {
                Eigen::VectorXd wp = w, wm = w;
                wp[j] += eps;
                wm[j] -= eps;
                const double fd = (logreg_loss(wp, b, d.x, d.y, lambda) -
                                   logreg_loss(wm, b, d.x, d.y, lambda)) /
                                  (2 * eps);
                require(std::abs(gw[j] - fd) / std::max(1.0, std::abs(fd)) <= 1e-5,
                        "logreg gradient vs finite differences");
            }

            const Dataset d3 = random_dataset(5, 4, 3, rng);
            Eigen::MatrixXd W(3, 4);
            for (int c = 0; c < 3; ++c)
                for (int j = 0; j < 4; ++j) W(c, j) = static_cast<double>(rng() % 1000) / 1000.0 - 0.5;
            Eigen::VectorXd bb(3);
            bb << 0.1, -0.2, 0.05;
            Eigen::MatrixXd gW;
            Eigen::VectorXd gB;
            softmax_grad(W, bb, d3.x, d3.y, lambda, gW, gB);
            for (int c = 0; c < 3; ++c)
                for (int j = 0; j < 4; ++j) {
                    Eigen::MatrixXd wp = W, wm = W;
                    wp(c, j) += eps;
                    wm(c, j) -= eps;
                    const double fd = (softmax_loss(wp, bb, d3.x, d3.y, lambda) -
                                       softmax_loss(wm, bb, d3.x, d3.y, lambda)) /
                                      (2 * eps);
                    require(std::abs(gW(c, j) - fd) / std::max(1.0, std::abs(fd)) <= 1e-5,
                            "softmax gradient vs finite differences");
                }
        }

        // GNB log-posteriors vs the direct density formula
        {
            const Dataset d = random_dataset(80, 5, 3, rng);
            const Model m = fit_gnb(d);
            const auto& st = std::get<GnbState>(m.state);
            for (int q = 0; q < 50; ++q) {
                Eigen::VectorXd x(5);
                for (int j = 0; j < 5; ++j) x[j] = static_cast<double>(rng() % 4000) / 1000.0 - 2.0;
                const Eigen::VectorXd lp = gnb_log_posteriors(st, x);
                for (int c = 0; c < 3; ++c) {
                    double want = st.log_prior[c];
                    for (int j = 0; j < 5; ++j) {
                        const double var = st.var(c, j);
                        const double diff = x[j] - st.mean(c, j);
                        want += -0.5 * std::log(2.0 * M_PI * var) - diff * diff / (2.0 * var);
                    }
                    require(std::abs(lp[c] - want) <= 1e-9, "gnb log-posterior vs density formula");
                }
            }
        }

        // SAMME trace vs the hand simulation on the fixed 8-point dataset
        {
            Dataset d;
            d.n_classes = 2;
            d.x.resize(8, 1);
            for (int i = 0; i < 8; ++i) d.x(i, 0) = i;
            d.y = {0, 0, 0, 1, 1, 1, 0, 1};
            TrainConfig cfg;
            cfg.ada_rounds = 3;
            cfg.ada_base_depth = 1;
            AdaTrace trace;
            const Model m = fit_adaboost(d, cfg, &trace);
            const double want_err[3] = {1.0 / 8, 3.0 / 14, 2.0 / 11};
            const double want_alpha[3] = {std::log(7.0), std::log(11.0 / 3), std::log(4.5)};
            const double want_w[3][8] = {
                {1.0 / 14, 1.0 / 14, 1.0 / 14, 1.0 / 14, 1.0 / 14, 1.0 / 14, 1.0 / 2, 1.0 / 14},
                {1.0 / 22, 1.0 / 22, 1.0 / 22, 1.0 / 6, 1.0 / 6, 1.0 / 6, 7.0 / 22, 1.0 / 22},
                {1.0 / 8, 1.0 / 8, 1.0 / 8, 11.0 / 108, 11.0 / 108, 11.0 / 108, 7.0 / 36,
                 1.0 / 8}};
            require(trace.errs.size() == 3, "SAMME did not run 3 rounds");
            for (int r = 0; r < 3; ++r) {
                require(std::abs(trace.errs[r] - want_err[r]) <= 1e-12, "SAMME weighted error");
                require(std::abs(trace.alphas[r] - want_alpha[r]) <= 1e-12, "SAMME alpha");
                for (int i = 0; i < 8; ++i)
                    require(std::abs(trace.weights_after[r][i] - want_w[r][i]) <= 1e-10,
                            "SAMME weight update");
            }
            for (int i = 0; i < 8; ++i)
                require(m.predict(d.x.row(i).transpose()) == d.y[i], "SAMME final ensemble");
        }

        // degenerate forest == tree
        {
            const Dataset d = random_dataset(50, 5, 2, rng);
            TrainConfig cfg;
            cfg.forest_trees = 1;
            cfg.forest_bootstrap = false;
            cfg.forest_feature_frac = 1.0;
            const Model forest = fit_forest(d, cfg);
            const Model tree = fit_tree(d, cfg);
            for (int q = 0; q < 300; ++q) {
                Eigen::VectorXd x(5);
                for (int j = 0; j < 5; ++j) x[j] = static_cast<double>(rng() % 3000) / 1000.0 - 1.5;
                require(forest.predict(x) == tree.predict(x), "1-tree forest != tree");
            }
        }

        require_runtime(t0, 30.0, "learner oracle suite");
        return std::string(
            "knn==scan on 100 queries; logreg/softmax grads within 1e-5 of finite differences; "
            "gnb posteriors within 1e-9; SAMME 3-round trace exact; 1-tree forest == tree");
    });

    const fs::path e2e_root = fresh_dir("roadsight_acceptance_synth");
    EvalReport hist_report, pixels_report;

    criterion("synthetic-end-to-end", [&] {
        const auto t0 = Clock::now();
        SynthConfig scfg;
        scfg.n = 200;
        scfg.seed = 42;
        synth_dataset(e2e_root, scfg);
        const Manifest m = load_manifest(e2e_root);

        BenchConfig cfg;  // seed 42, test_frac 0.3, forest_trees 25
        hist_report = run_benchmark(m, FeatureKind::HIST, cfg);
        const double rf = row_accuracy(hist_report, "Random Forest");
        const double gnb = row_accuracy(hist_report, "GaussianNB");
        require(rf >= 90.0, "hist Random Forest accuracy " + std::to_string(rf) + " < 90");
        require(rf >= gnb, "hist Random Forest " + std::to_string(rf) + " below GaussianNB " +
                               std::to_string(gnb));

        pixels_report = run_benchmark(m, FeatureKind::PIXELS, cfg);
        const double dt_test = row_accuracy(pixels_report, "Decision Tree");
        require(dt_test >= 70.0, "pixels Decision Tree test accuracy " + std::to_string(dt_test) +
                                     " < 70");

        // unconstrained tree train accuracy on the same split
        const FeatureTable table = featurize_manifest(m, FeatureKind::PIXELS, cfg);
        Manifest usable;
        usable.root = m.root;
        for (std::size_t i = 0; i < table.paths.size(); ++i)
            usable.entries.push_back({table.paths[i], table.labels[i]});
        const auto [train_m, test_m] = split(usable, cfg.test_frac, cfg.seed);
        Dataset train;
        train.n_classes = 2;
        train.x.resize(static_cast<int>(train_m.entries.size()), table.x.cols());
        std::map<std::string, int> row_of;
        for (std::size_t i = 0; i < table.paths.size(); ++i)
            row_of[table.paths[i]] = static_cast<int>(i);
        for (std::size_t i = 0; i < train_m.entries.size(); ++i) {
            train.x.row(static_cast<int>(i)) = table.x.row(row_of.at(train_m.entries[i].path));
            train.y.push_back(train_m.entries[i].label);
        }
        TrainConfig tc = cfg.train;
        tc.seed = cfg.seed;
        const Model tree = fit_tree(train, tc);
        const double dt_train = accuracy(tree, train);
        require(dt_train == 100.0, "pixels Decision Tree train accuracy " +
                                       std::to_string(dt_train) + " != 100");

        require_runtime(t0, 120.0, "synthetic end-to-end");
        std::ostringstream os;
        os << "hist: RF=" << row_accuracy(hist_report, "Random Forest")
           << "% >= 90 and >= GNB=" << gnb << "%; pixels: DT train=100%, test=" << dt_test << "%";
        return os.str();
    });

    criterion("road-extraction-fidelity", [&] {
        const auto gt = nlohmann::json::parse(slurp(e2e_root / "ground_truth.json"));
        const auto& poly = gt.at("road_polygon");
        auto inside_road = [&](int x, int y) {
            const std::size_t n = poly.size();
            for (std::size_t i = 0; i < n; ++i) {
                const long x1 = poly[i][0].get<long>(), y1 = poly[i][1].get<long>();
                const long x2 = poly[(i + 1) % n][0].get<long>(),
                           y2 = poly[(i + 1) % n][1].get<long>();
                if ((x2 - x1) * (y - y1) - (y2 - y1) * (x - x1) < 0) return false;
            }
            return true;
        };

        double worst_coverage = 1.0;
        for (int f = 0; f < 5; ++f) {
            const auto t0 = Clock::now();
            char name[40];
            std::snprintf(name, sizeof(name), "images/frame_%04d.png", f);
            const Raster img = read_image(e2e_root / name);
            const RoadExtraction ex = extract_road(img);

            std::size_t road_px = 0, covered = 0;
            for (int y = 0; y < img.height; ++y)
                for (int x = 0; x < img.width; ++x)
                    if (inside_road(x, y)) {
                        ++road_px;
                        if (ex.hull_mask.get(x, y)) ++covered;
                    }
            const double coverage = static_cast<double>(covered) / road_px;
            worst_coverage = std::min(worst_coverage, coverage);
            require(coverage >= 0.99, std::string(name) + " hull coverage " +
                                          std::to_string(coverage) + " < 0.99");

            const RoadExtraction again = extract_road(img);
            require(again.mask == ex.mask && again.hull_mask == ex.hull_mask &&
                        again.road == ex.road && again.hsv == ex.hsv,
                    "extraction not bit-identical across runs");
            require_runtime(t0, 5.0, std::string(name) + " extraction");
        }

        const fs::path stage_dir = fresh_dir("roadsight_acceptance_stages");
        const Raster img = read_image(e2e_root / "images/frame_0000.png");
        dump_stages(extract_road(img), stage_dir);
        for (const char* n : {"01_input.png", "02_hsv.png", "03_roi.png", "04_mask.png",
                              "05_hull.png", "06_road.png"})
            require(fs::exists(stage_dir / n), std::string("missing stage dump ") + n);

        std::ostringstream os;
        os << "hull covers >= " << worst_coverage * 100.0
           << "% of ground-truth road pixels on 5 frames; reruns bit-identical; stages 01-06 "
              "dumped";
        return os.str();
    });

    criterion("report-format-golden", [&] {
        require(pixels_report.rows.size() == 8, "PIXELS report must have 8 rows");
        require(hist_report.rows.size() == 7, "HIST report must have 7 rows");
        const char* pixels_order[8] = {"Logistic Regression", "Multinomial Logistic Regression",
                                       "Decision Tree",       "AdaBoost using Decision Tree",
                                       "GaussianNB",          "KNN",
                                       "SVM",                 "Random Forest"};
        for (int i = 0; i < 8; ++i)
            require(pixels_report.rows[i].learner == pixels_order[i],
                    "PIXELS row order mismatch at row " + std::to_string(i));
        const char* hist_order[7] = {"Logistic Regression", "Decision Tree",
                                     "AdaBoost using Decision Tree", "GaussianNB", "KNN", "SVM",
                                     "Random Forest"};
        for (int i = 0; i < 7; ++i)
            require(hist_report.rows[i].learner == hist_order[i],
                    "HIST row order mismatch at row " + std::to_string(i));

        // byte-exact markdown on the pinned small dataset
        const fs::path root = fresh_dir("roadsight_acceptance_golden");
        SynthConfig scfg;
        scfg.n = 16;
        scfg.seed = 7;
        synth_dataset(root, scfg);
        const Manifest m = load_manifest(root);
        BenchConfig cfg;
        const std::string hist_md = report_to_markdown(run_benchmark(m, FeatureKind::HIST, cfg));
        const std::string pixels_md =
            report_to_markdown(run_benchmark(m, FeatureKind::PIXELS, cfg));
        require(hist_md == slurp(golden_dir / "report_hist.md"),
                "hist markdown differs from golden");
        require(pixels_md == slurp(golden_dir / "report_pixels.md"),
                "pixels markdown differs from golden");
        return std::string(
            "8 PIXELS rows / 7 HIST rows in published order; markdown reports match golden files "
            "byte-for-byte");
    });

    if (g_failures == 0)
        std::printf("acceptance: all criteria passed\n");
    else
        std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
