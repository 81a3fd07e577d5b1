#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "roadsight/benchmark.hpp"
#include "roadsight/image_io.hpp"
#include "roadsight/synth.hpp"
#include "roadsight/visualize.hpp"

namespace fs = std::filesystem;
using namespace roadsight;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

RoiSpec parse_roi(const std::vector<double>& v) {
    RoiSpec roi;
    if (!v.empty()) {
        roi.x0 = v[0];
        roi.y0 = v[1];
        roi.x1 = v[2];
        roi.y1 = v[3];
    }
    return roi;
}

Raster read_rgb(const fs::path& path) {
    Raster img = read_image(path);
    if (img.channels == 3) return img;
    Raster rgb(img.width, img.height, 3, ColorSpace::RGB);
    for (std::size_t p = 0; p < img.pixel_count(); ++p)
        rgb.data[p * 3] = rgb.data[p * 3 + 1] = rgb.data[p * 3 + 2] = img.data[p];
    return rgb;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError(path.string() + ": cannot open for writing");
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"road isolation, pothole visualization and classical-learner benchmarks"};
    app.require_subcommand(1);

    // extract-road
    std::string er_img, er_out_dir;
    std::vector<double> er_roi;
    double er_k = 3.0;
    auto* er = app.add_subcommand("extract-road", "isolate the road and dump stage images");
    er->add_option("image", er_img, "input image")->required();
    er->add_option("--out-dir", er_out_dir, "directory for stage dumps 01..06")->required();
    er->add_option("--roi", er_roi, "ROI fractions x0 y0 x1 y1")->expected(4);
    er->add_option("--k", er_k, "band width in standard deviations (default 3)");

    // visualize
    std::string vz_img, vz_method, vz_out, vz_json;
    std::vector<double> vz_roi;
    double vz_k = 3.0, vz_lo = 50.0, vz_hi = 150.0;
    int vz_dil = 1;
    auto* vz = app.add_subcommand("visualize", "highlight pothole candidates");
    vz->add_option("image", vz_img, "input image")->required();
    vz->add_option("--method", vz_method, "morph|blob|edge")
        ->required()
        ->check(CLI::IsMember({"morph", "blob", "edge"}));
    vz->add_option("--out", vz_out, "annotated PNG path")->required();
    vz->add_option("--json", vz_json, "candidate JSON path (default: --out with .json)");
    vz->add_option("--roi", vz_roi, "ROI fractions x0 y0 x1 y1")->expected(4);
    vz->add_option("--k", vz_k, "band width for road extraction");
    vz->add_option("--canny-lo", vz_lo, "edge method: low threshold");
    vz->add_option("--canny-hi", vz_hi, "edge method: high threshold");
    vz->add_option("--dilate", vz_dil, "edge method: dilation radius");

    // featurize
    std::string ft_root, ft_kind, ft_out;
    std::vector<double> ft_roi;
    double ft_k = 3.0;
    auto* ft = app.add_subcommand("featurize", "dump feature vectors for a dataset");
    ft->add_option("root", ft_root, "dataset root")->required();
    ft->add_option("--kind", ft_kind, "pixels|hist")
        ->required()
        ->check(CLI::IsMember({"pixels", "hist"}));
    ft->add_option("--out", ft_out, "output CSV path")->required();
    ft->add_option("--roi", ft_roi, "ROI fractions x0 y0 x1 y1")->expected(4);
    ft->add_option("--k", ft_k, "band width for road extraction");

    // benchmark
    std::string bm_root, bm_kind, bm_report = "md", bm_out, bm_models;
    std::vector<double> bm_roi;
    double bm_k = 3.0, bm_test_frac = 0.3;
    std::uint64_t bm_seed = 42;
    auto* bm = app.add_subcommand("benchmark", "train and score every learner");
    bm->add_option("root", bm_root, "dataset root")->required();
    bm->add_option("--kind", bm_kind, "pixels|hist")
        ->required()
        ->check(CLI::IsMember({"pixels", "hist"}));
    bm->add_option("--seed", bm_seed, "split and training seed (default 42)");
    bm->add_option("--test-frac", bm_test_frac, "test fraction (default 0.3)");
    bm->add_option("--report", bm_report, "json|md (default md)")
        ->check(CLI::IsMember({"json", "md"}));
    bm->add_option("--out", bm_out, "report path (default: stdout)");
    bm->add_option("--save-models", bm_models, "directory to save fitted models");
    bm->add_option("--roi", bm_roi, "ROI fractions x0 y0 x1 y1")->expected(4);
    bm->add_option("--k", bm_k, "band width for road extraction");

    // predict
    std::string pd_img, pd_model, pd_kind;
    std::vector<double> pd_roi;
    double pd_k = 3.0;
    auto* pd = app.add_subcommand("predict", "classify one image with a saved model");
    pd->add_option("image", pd_img, "input image")->required();
    pd->add_option("--model", pd_model, "model JSON file")->required();
    pd->add_option("--kind", pd_kind, "feature kind override (pixels|hist)")
        ->check(CLI::IsMember({"pixels", "hist"}));
    pd->add_option("--roi", pd_roi, "ROI fractions x0 y0 x1 y1")->expected(4);
    pd->add_option("--k", pd_k, "band width for road extraction");

    // synth
    std::string sy_root;
    int sy_n = 8;
    std::uint64_t sy_seed = 42;
    auto* sy = app.add_subcommand("synth", "generate a synthetic labeled dataset");
    sy->add_option("out-root", sy_root, "output dataset root")->required();
    sy->add_option("--n", sy_n, "number of frames (>= 4)")->check(CLI::Range(4, 1000000));
    sy->add_option("--seed", sy_seed, "generator seed (default 42)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*er) {
            const Raster img = read_rgb(er_img);
            try {
                const RoadExtraction ex = extract_road(img, parse_roi(er_roi), er_k);
                dump_stages(ex, er_out_dir);
                std::cout << "wrote stages 01..06 to " << er_out_dir << "\n";
            } catch (const NoRoadError& e) {
                // dump what exists so the failure can be inspected
                fs::create_directories(er_out_dir);
                write_png(fs::path(er_out_dir) / "01_input.png", img);
                Raster mask(e.band_mask.width, e.band_mask.height, 1, ColorSpace::GRAY);
                for (std::size_t i = 0; i < mask.data.size(); ++i)
                    mask.data[i] = e.band_mask.bits[i] ? 255 : 0;
                write_png(fs::path(er_out_dir) / "04_mask.png", mask);
                std::cerr << "error: " << e.what() << "\n";
                return kExitData;
            }
        } else if (*vz) {
            const Raster img = read_rgb(vz_img);
            std::vector<Candidate> cands;
            Raster annotated(1, 1, 1, ColorSpace::GRAY);
            if (vz_method == "morph") {
                auto [c, a] = visualize_morph(img);
                cands = std::move(c);
                annotated = std::move(a);
            } else {
                const RoadExtraction ex = extract_road(img, parse_roi(vz_roi), vz_k);
                if (vz_method == "blob") {
                    cands = detect_blobs(ex.road, {}, &ex.hull_mask);
                    annotated = annotate(img, cands);
                } else {
                    auto [c, a] = visualize_edges(ex.road, vz_lo, vz_hi, vz_dil);
                    cands = std::move(c);
                    annotated = annotate(img, cands);
                }
            }
            write_png(vz_out, annotated);
            const fs::path jpath =
                vz_json.empty() ? fs::path(vz_out).replace_extension(".json") : fs::path(vz_json);
            write_text(jpath, candidates_to_json(cands) + "\n");
            std::cout << cands.size() << " candidate(s); wrote " << vz_out << " and "
                      << jpath.string() << "\n";
        } else if (*ft) {
            BenchConfig cfg;
            cfg.roi = parse_roi(ft_roi);
            cfg.band_k = ft_k;
            const Manifest m = load_manifest(ft_root);
            const FeatureKind kind = feature_kind_from_name(ft_kind);
            const FeatureTable t = featurize_manifest(m, kind, cfg);
            write_feature_csv(ft_out, t, kind);
            std::cout << "wrote " << t.paths.size() << " rows to " << ft_out << " (excluded "
                      << t.excluded << ")\n";
        } else if (*bm) {
            BenchConfig cfg;
            cfg.roi = parse_roi(bm_roi);
            cfg.band_k = bm_k;
            cfg.seed = bm_seed;
            cfg.test_frac = bm_test_frac;
            cfg.train.seed = bm_seed;
            const Manifest m = load_manifest(bm_root);
            const FeatureKind kind = feature_kind_from_name(bm_kind);
            std::optional<fs::path> models_dir;
            if (!bm_models.empty()) models_dir = bm_models;
            const EvalReport report = run_benchmark(m, kind, cfg, models_dir);
            const std::string text =
                bm_report == "json" ? report_to_json(report) + "\n" : report_to_markdown(report);
            if (bm_out.empty())
                std::cout << text;
            else {
                write_text(bm_out, text);
                std::cout << "wrote report to " << bm_out << "\n";
            }
        } else if (*pd) {
            const LoadedModel lm = load_model(pd_model);
            FeatureKind kind;
            if (!pd_kind.empty())
                kind = feature_kind_from_name(pd_kind);
            else if (lm.feature_kind)
                kind = *lm.feature_kind;
            else
                throw DataError("model file does not record a feature kind; pass --kind");

            const Raster img = read_rgb(pd_img);
            const RoadExtraction ex = extract_road(img, parse_roi(pd_roi), pd_k);
            const FeatureVector fv = kind == FeatureKind::PIXELS
                                         ? pixels_feature(ex.road)
                                         : hist_feature(to_hsv(ex.road), &ex.hull_mask);
            const int label = lm.model.predict(fv.values);
            std::cout << "label=" << label << " (" << (label == 1 ? "pothole" : "no pothole")
                      << ")\n";
        } else if (*sy) {
            SynthConfig cfg;
            cfg.n = sy_n;
            cfg.seed = sy_seed;
            const Manifest m = synth_dataset(sy_root, cfg);
            std::cout << "wrote " << m.entries.size() << " frames to " << sy_root << "\n";
        }
    } catch (const InvalidConfig& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitOk;
}
