#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "roadsight/errors.hpp"
#include "roadsight/features.hpp"

namespace roadsight {

struct Dataset {
    Eigen::MatrixXd x;   // N x D, one row per sample
    std::vector<int> y;  // labels in [0, n_classes)
    int n_classes = 2;

    int n() const { return static_cast<int>(x.rows()); }
    int dim() const { return static_cast<int>(x.cols()); }
    void validate() const;
};

constexpr int kUnlimitedDepth = std::numeric_limits<int>::max();

struct TrainConfig {
    std::uint64_t seed = 42;

    int knn_k = 5;

    double lr_rate = 0.1;  // logistic / softmax gradient descent
    int lr_epochs = 500;
    double lr_lambda = 1e-4;

    double svm_lambda = 1e-3;
    int svm_epochs = 1000;

    int tree_max_depth = kUnlimitedDepth;
    int tree_min_split = 2;

    int forest_trees = 25;
    double forest_feature_frac = 0.0;  // 0 -> ceil(sqrt(D)) features per node
    bool forest_bootstrap = true;

    int ada_rounds = 50;
    int ada_base_depth = 1;
};

// ---- trained states ---------------------------------------------------------

struct KnnState {
    int k = 1;
    Eigen::MatrixXd x;
    std::vector<int> y;
    int n_classes = 2;
};

struct GnbState {
    Eigen::VectorXd log_prior;  // C
    Eigen::MatrixXd mean;       // C x D
    Eigen::MatrixXd var;        // C x D, smoothing already added
    int n_classes = 2;
};

struct LogRegState {
    Eigen::VectorXd w;
    double b = 0.0;
};

struct SoftmaxState {
    Eigen::MatrixXd w;  // C x D
    Eigen::VectorXd b;  // C
};

struct SvmState {
    Eigen::VectorXd w;
    double b = 0.0;
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int label = 0;  // majority label; valid for every node
};

struct TreeState {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    int n_classes = 2;
    int dim = 0;
};

struct ForestState {
    std::vector<TreeState> trees;
    int n_classes = 2;
    int dim = 0;
};

struct AdaRound {
    TreeState tree;
    double alpha = 0.0;
    double err = 0.0;
};

struct AdaState {
    std::vector<AdaRound> rounds;
    int n_classes = 2;
    int dim = 0;
    int fallback_label = 0;  // used when no round was kept
};

using LearnerState = std::variant<KnnState, GnbState, LogRegState, SoftmaxState, SvmState,
                                  TreeState, ForestState, AdaState>;

struct Model {
    std::string learner_id;
    TrainConfig cfg;
    LearnerState state;

    int predict(const Eigen::VectorXd& x) const;
    int expected_dim() const;
};

// ---- fitting ----------------------------------------------------------------

Model fit_knn(const Dataset& d, const TrainConfig& cfg = {});
Model fit_gnb(const Dataset& d, const TrainConfig& cfg = {});
Model fit_logreg(const Dataset& d, const TrainConfig& cfg = {});
Model fit_softmax(const Dataset& d, const TrainConfig& cfg = {});
Model fit_svm(const Dataset& d, const TrainConfig& cfg = {});
Model fit_tree(const Dataset& d, const TrainConfig& cfg = {});
Model fit_forest(const Dataset& d, const TrainConfig& cfg = {});

/// Per-round diagnostics for boosting (weighted errors, round weights, and
/// the sample-weight vector after each update).
struct AdaTrace {
    std::vector<double> errs;
    std::vector<double> alphas;
    std::vector<Eigen::VectorXd> weights_after;
};

Model fit_adaboost(const Dataset& d, const TrainConfig& cfg = {}, AdaTrace* trace = nullptr);

/// Uniform dispatch over the 8 learner ids: knn, gnb, logreg, softmax, svm,
/// tree, forest, adaboost.
Model fit(const std::string& learner_id, const Dataset& d, const TrainConfig& cfg = {});

// ---- inspection hooks (used by oracles and reports) --------------------------

/// 1 - sum_c p_c^2 over nonnegative class weight sums.
double gini_impurity(const std::vector<double>& class_weights);

/// ln((1-err)/err) + ln(C-1), err clamped to [1e-10, 1-1e-10].
double samme_alpha(double err, int n_classes);

/// Mean cross-entropy + (lambda/2)|w|^2 (bias unregularized) and its gradient.
double logreg_loss(const Eigen::VectorXd& w, double b, const Eigen::MatrixXd& x,
                   const std::vector<int>& y, double lambda);
void logreg_grad(const Eigen::VectorXd& w, double b, const Eigen::MatrixXd& x,
                 const std::vector<int>& y, double lambda, Eigen::VectorXd& gw, double& gb);
double logreg_proba(const LogRegState& m, const Eigen::VectorXd& x);

double softmax_loss(const Eigen::MatrixXd& w, const Eigen::VectorXd& b, const Eigen::MatrixXd& x,
                    const std::vector<int>& y, double lambda);
void softmax_grad(const Eigen::MatrixXd& w, const Eigen::VectorXd& b, const Eigen::MatrixXd& x,
                  const std::vector<int>& y, double lambda, Eigen::MatrixXd& gw,
                  Eigen::VectorXd& gb);

/// (lambda/2)|w,b|^2 + mean hinge loss; bias folded into the regularized
/// weight vector, labels in {0,1}.
double svm_objective(const Eigen::VectorXd& w, double b, const Eigen::MatrixXd& x,
                     const std::vector<int>& y, double lambda);

Eigen::VectorXd gnb_log_posteriors(const GnbState& m, const Eigen::VectorXd& x);

// ---- serialization ----------------------------------------------------------

/// Versioned JSON. `feature_kind`, when given, records which extractor the
/// model expects so `predict` runs can featurize without a flag.
std::string model_to_json(const Model& m, std::optional<FeatureKind> feature_kind = {});
void save_model(const std::filesystem::path& path, const Model& m,
                std::optional<FeatureKind> feature_kind = {});

struct LoadedModel {
    Model model;
    std::optional<FeatureKind> feature_kind;
};

LoadedModel model_from_json(const std::string& text);
LoadedModel load_model(const std::filesystem::path& path);

}  // namespace roadsight
