#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "roadsight/dataset.hpp"
#include "roadsight/features.hpp"
#include "roadsight/learners.hpp"
#include "roadsight/road.hpp"

namespace roadsight {

/// Everything a benchmark run depends on. `seed` drives both the split and
/// every learner.
struct BenchConfig {
    double test_frac = 0.3;
    std::uint64_t seed = 42;
    RoiSpec roi;
    double band_k = 3.0;
    TrainConfig train;
};

struct EvalRow {
    std::string learner;  // display name, e.g. "Random Forest"
    std::string learner_id;
    double accuracy = 0.0;  // percent
};

struct EvalReport {
    FeatureKind feature_kind = FeatureKind::HIST;
    std::vector<EvalRow> rows;
    int train_n = 0;
    int test_n = 0;
    std::uint64_t seed = 0;
    int excluded = 0;  // manifest entries dropped by failed road extraction
    BenchConfig config;
};

/// Display names in report row order. PIXELS carries 8 learners (the
/// multinomial variant included), HIST 7.
std::vector<std::pair<std::string, std::string>> report_learners(FeatureKind kind);

/// 100 * correct / N over a labeled feature dataset.
double accuracy(const Model& m, const Dataset& test);

/// Featurized samples of a manifest; entries whose road extraction fails are
/// skipped and reported in `excluded`.
struct FeatureTable {
    std::vector<std::string> paths;
    std::vector<int> labels;
    Eigen::MatrixXd x;
    int excluded = 0;
};

FeatureTable featurize_manifest(const Manifest& m, FeatureKind kind, const BenchConfig& cfg = {});

/// Write `path,label,kind,v0..v{dim-1}` CSV rows (with header).
void write_feature_csv(const std::filesystem::path& path, const FeatureTable& t, FeatureKind kind);

/// Train every learner of the feature kind's report on the train split and
/// score on the test split. Set `save_models_dir` to persist each fitted
/// model. Honors ROADSIGHT_THREADS for per-learner parallelism.
EvalReport run_benchmark(const Manifest& m, FeatureKind kind, const BenchConfig& cfg = {},
                         const std::optional<std::filesystem::path>& save_models_dir = {});

std::string report_to_json(const EvalReport& r);
std::string report_to_markdown(const EvalReport& r);

}  // namespace roadsight
