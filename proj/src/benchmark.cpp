#include "roadsight/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "roadsight/image_io.hpp"

namespace roadsight {

namespace {

using json = nlohmann::ordered_json;

int thread_budget() {
    const char* env = std::getenv("ROADSIGHT_THREADS");
    if (!env) return 1;
    const int v = std::atoi(env);
    return v > 0 ? v : 1;
}

/// run fn(i) for i in [0, n) on up to thread_budget() threads; the first
/// captured exception is rethrown after all workers join
void parallel_for(int n, const std::function<void(int)>& fn) {
    const int threads = std::min(thread_budget(), n);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            try {
                for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (std::thread& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

std::string format_accuracy(double pct) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", pct);
    return buf;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> report_learners(FeatureKind kind) {
    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("Logistic Regression", "logreg");
    if (kind == FeatureKind::PIXELS) rows.emplace_back("Multinomial Logistic Regression", "softmax");
    rows.emplace_back("Decision Tree", "tree");
    rows.emplace_back("AdaBoost using Decision Tree", "adaboost");
    rows.emplace_back("GaussianNB", "gnb");
    rows.emplace_back("KNN", "knn");
    rows.emplace_back("SVM", "svm");
    rows.emplace_back("Random Forest", "forest");
    return rows;
}

double accuracy(const Model& m, const Dataset& test) {
    if (test.n() < 1) throw InvalidInput("accuracy: empty test set");
    int correct = 0;
    for (int i = 0; i < test.n(); ++i)
        if (m.predict(test.x.row(i).transpose()) == test.y[i]) ++correct;
    return 100.0 * correct / test.n();
}

FeatureTable featurize_manifest(const Manifest& m, FeatureKind kind, const BenchConfig& cfg) {
    FeatureTable t;
    std::vector<Eigen::VectorXd> rows;
    for (std::size_t i = 0; i < m.entries.size(); ++i) {
        Raster img = read_image(m.resolve(i));
        if (img.channels == 1) {  // promote grayscale inputs
            Raster rgb(img.width, img.height, 3, ColorSpace::RGB);
            for (std::size_t p = 0; p < img.pixel_count(); ++p)
                rgb.data[p * 3] = rgb.data[p * 3 + 1] = rgb.data[p * 3 + 2] = img.data[p];
            img = std::move(rgb);
        }
        FeatureVector fv;
        try {
            const RoadExtraction ex = extract_road(img, cfg.roi, cfg.band_k);
            fv = kind == FeatureKind::PIXELS ? pixels_feature(ex.road)
                                             : hist_feature(to_hsv(ex.road), &ex.hull_mask);
        } catch (const NoRoadError&) {
            ++t.excluded;
            continue;
        } catch (const InvalidInput&) {
            // e.g. a frame too small for the ROI rectangle
            ++t.excluded;
            continue;
        }
        t.paths.push_back(m.entries[i].path);
        t.labels.push_back(m.entries[i].label);
        rows.push_back(std::move(fv.values));
    }
    t.x.resize(static_cast<int>(rows.size()), feature_dim(kind));
    for (std::size_t i = 0; i < rows.size(); ++i) t.x.row(static_cast<int>(i)) = rows[i];
    return t;
}

void write_feature_csv(const std::filesystem::path& path, const FeatureTable& t, FeatureKind kind) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError(path.string() + ": cannot open for writing");
    const int dim = static_cast<int>(t.x.cols());
    out << "path,label,kind";
    for (int j = 0; j < dim; ++j) out << ",v" << j;
    out << "\n";
    char buf[32];
    for (std::size_t i = 0; i < t.paths.size(); ++i) {
        out << t.paths[i] << "," << t.labels[i] << "," << feature_kind_name(kind);
        for (int j = 0; j < dim; ++j) {
            std::snprintf(buf, sizeof(buf), "%.9g", t.x(static_cast<int>(i), j));
            out << "," << buf;
        }
        out << "\n";
    }
}

EvalReport run_benchmark(const Manifest& m, FeatureKind kind, const BenchConfig& cfg,
                         const std::optional<std::filesystem::path>& save_models_dir) {
    // featurize every usable sample once, then split by manifest entry
    const FeatureTable table = featurize_manifest(m, kind, cfg);

    Manifest usable;
    usable.root = m.root;
    for (std::size_t i = 0; i < table.paths.size(); ++i)
        usable.entries.push_back({table.paths[i], table.labels[i]});

    for (int label = 0; label <= 1; ++label) {
        const auto n = std::count(table.labels.begin(), table.labels.end(), label);
        if (n < 2)
            throw DataError("benchmark: need at least 2 usable samples of label " +
                            std::to_string(label) + " after road extraction, have " +
                            std::to_string(n));
    }

    const auto [train_m, test_m] = split(usable, cfg.test_frac, cfg.seed);

    std::map<std::string, std::size_t> row_of_path;
    for (std::size_t i = 0; i < table.paths.size(); ++i) row_of_path[table.paths[i]] = i;

    auto build = [&](const Manifest& part) {
        Dataset d;
        d.n_classes = 2;
        d.x.resize(static_cast<int>(part.entries.size()), table.x.cols());
        for (std::size_t i = 0; i < part.entries.size(); ++i) {
            const std::size_t src = row_of_path.at(part.entries[i].path);
            d.x.row(static_cast<int>(i)) = table.x.row(static_cast<int>(src));
            d.y.push_back(part.entries[i].label);
        }
        return d;
    };
    const Dataset train = build(train_m);
    const Dataset test = build(test_m);

    EvalReport report;
    report.feature_kind = kind;
    report.train_n = train.n();
    report.test_n = test.n();
    report.seed = cfg.seed;
    report.excluded = table.excluded;
    report.config = cfg;

    const auto learners = report_learners(kind);
    report.rows.resize(learners.size());
    TrainConfig tc = cfg.train;
    tc.seed = cfg.seed;

    if (save_models_dir) std::filesystem::create_directories(*save_models_dir);

    // fits are independent and internally seeded, so per-learner parallelism
    // cannot change the report
    parallel_for(static_cast<int>(learners.size()), [&](int i) {
        const auto& [name, id] = learners[i];
        const Model model = fit(id, train, tc);
        report.rows[i] = {name, id, accuracy(model, test)};
        if (save_models_dir) save_model(*save_models_dir / (id + ".json"), model, kind);
    });
    return report;
}

std::string report_to_json(const EvalReport& r) {
    json j;
    j["feature_kind"] = feature_kind_name(r.feature_kind);
    j["split"] = {{"train_n", r.train_n}, {"test_n", r.test_n}, {"seed", r.seed}};
    j["excluded"] = r.excluded;
    json rows = json::array();
    for (const EvalRow& row : r.rows) {
        // accuracy reported to 2 decimals, as a number
        rows.push_back({{"learner", row.learner},
                        {"accuracy", std::stod(format_accuracy(row.accuracy))}});
    }
    j["rows"] = rows;
    return j.dump(2);
}

std::string report_to_markdown(const EvalReport& r) {
    std::string out;
    out += "# roadsight benchmark report\n\n";
    out += "- feature_kind: " + feature_kind_name(r.feature_kind) + "\n";
    out += "- split: train_n=" + std::to_string(r.train_n) + ", test_n=" + std::to_string(r.test_n) +
           ", seed=" + std::to_string(r.seed) + "\n";
    out += "- excluded: " + std::to_string(r.excluded) + "\n\n";
    out += "| Methods | Accuracy(%) |\n";
    out += "|---|---|\n";
    for (const EvalRow& row : r.rows)
        out += "| " + row.learner + " | " + format_accuracy(row.accuracy) + " |\n";
    return out;
}

}  // namespace roadsight
