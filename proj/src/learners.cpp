#include "roadsight/learners.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "roadsight/rng.hpp"

namespace roadsight {

using json = nlohmann::ordered_json;

void Dataset::validate() const {
    if (x.rows() < 1) throw InvalidInput("Dataset: need at least one sample");
    if (static_cast<int>(y.size()) != n()) throw InvalidInput("Dataset: label count mismatch");
    if (n_classes < 2) throw InvalidInput("Dataset: need at least two classes");
    for (int label : y)
        if (label < 0 || label >= n_classes) throw InvalidInput("Dataset: label out of range");
}

// ---- shared helpers ---------------------------------------------------------

namespace {

int argmax_label(const Eigen::VectorXd& scores) {
    int best = 0;
    for (int c = 1; c < scores.size(); ++c)
        if (scores[c] > scores[best]) best = c;  // ties keep the smallest label
    return best;
}

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow
double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

}  // namespace

double gini_impurity(const std::vector<double>& class_weights) {
    const double total = std::accumulate(class_weights.begin(), class_weights.end(), 0.0);
    if (total <= 0) return 0.0;
    double sq = 0.0;
    for (double w : class_weights) {
        const double p = w / total;
        sq += p * p;
    }
    return 1.0 - sq;
}

double samme_alpha(double err, int n_classes) {
    const double e = std::clamp(err, 1e-10, 1.0 - 1e-10);
    return std::log((1.0 - e) / e) + std::log(static_cast<double>(n_classes - 1));
}

// ---- CART -------------------------------------------------------------------

namespace {

struct CartParams {
    int n_classes;
    int max_depth;
    int min_split;
    int features_per_node;  // <= 0 -> all features
    std::mt19937_64* rng = nullptr;
};

int tree_predict_index(const TreeState& t, const Eigen::VectorXd& x) {
    int i = 0;
    while (t.nodes[i].feature >= 0)
        i = x[t.nodes[i].feature] <= t.nodes[i].threshold ? t.nodes[i].left : t.nodes[i].right;
    return i;
}

int majority_label(const std::vector<double>& class_w) {
    int best = 0;
    for (std::size_t c = 1; c < class_w.size(); ++c)
        if (class_w[c] > class_w[best]) best = static_cast<int>(c);
    return best;
}

// distinct feature indices for one node, ascending so that equal-impurity
// ties resolve toward the lowest feature index
std::vector<int> pick_features(int dim, const CartParams& p) {
    if (p.features_per_node <= 0 || p.features_per_node >= dim) {
        std::vector<int> all(dim);
        std::iota(all.begin(), all.end(), 0);
        return all;
    }
    std::vector<int> pool(dim);
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<int> chosen(p.features_per_node);
    for (int i = 0; i < p.features_per_node; ++i) {
        const std::size_t j = i + rng_below(*p.rng, dim - i);
        std::swap(pool[i], pool[j]);
        chosen[i] = pool[i];
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

struct BestSplit {
    int feature = -1;
    double threshold = 0.0;
    double weighted_gini = std::numeric_limits<double>::infinity();
};

int build_node(TreeState& tree, const Eigen::MatrixXd& x, const std::vector<int>& y,
               const std::vector<double>& w, std::vector<int>& idx, int lo, int hi, int depth,
               const CartParams& p) {
    std::vector<double> class_w(p.n_classes, 0.0);
    for (int i = lo; i < hi; ++i) class_w[y[idx[i]]] += w[idx[i]];
    const double node_gini = gini_impurity(class_w);
    const double node_weight = std::accumulate(class_w.begin(), class_w.end(), 0.0);

    const int node_id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back({});
    tree.nodes[node_id].label = majority_label(class_w);

    const int count = hi - lo;
    if (node_gini <= 0.0 || depth >= p.max_depth || count < p.min_split) return node_id;

    const std::vector<int> features = pick_features(tree.dim, p);

    BestSplit best;
    std::vector<int> order(idx.begin() + lo, idx.begin() + hi);
    std::vector<double> left_w(p.n_classes);
    for (int f : features) {
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            const double va = x(a, f), vb = x(b, f);
            return va != vb ? va < vb : a < b;
        });
        std::fill(left_w.begin(), left_w.end(), 0.0);
        double left_total = 0.0;
        for (int i = 0; i + 1 < count; ++i) {
            const int s = order[i];
            left_w[y[s]] += w[s];
            left_total += w[s];
            const double v = x(s, f), vn = x(order[i + 1], f);
            if (v == vn) continue;  // thresholds only between distinct values
            const double thr = v + (vn - v) / 2.0;

            double left_sq = 0.0;
            for (double cw : left_w) left_sq += cw * cw;
            const double gl = left_total > 0 ? 1.0 - left_sq / (left_total * left_total) : 0.0;

            const double right_total = node_weight - left_total;
            double right_sq = 0.0;
            for (int c = 0; c < p.n_classes; ++c) {
                const double cw = class_w[c] - left_w[c];
                right_sq += cw * cw;
            }
            const double gr = right_total > 0 ? 1.0 - right_sq / (right_total * right_total) : 0.0;

            const double wg = (left_total * gl + right_total * gr) / node_weight;
            if (wg < best.weighted_gini) best = {f, thr, wg};
        }
    }

    // A node is unsplittable only when every candidate feature is constant.
    // Zero-gain splits are taken (XOR-style nodes need them); recursion still
    // terminates because both children are strictly smaller.
    if (best.feature < 0) return node_id;

    const auto mid = std::stable_partition(idx.begin() + lo, idx.begin() + hi, [&](int s) {
        return x(s, best.feature) <= best.threshold;
    });
    const int split_at = static_cast<int>(mid - idx.begin());

    tree.nodes[node_id].feature = best.feature;
    tree.nodes[node_id].threshold = best.threshold;
    const int left = build_node(tree, x, y, w, idx, lo, split_at, depth + 1, p);
    tree.nodes[node_id].left = left;
    const int right = build_node(tree, x, y, w, idx, split_at, hi, depth + 1, p);
    tree.nodes[node_id].right = right;
    return node_id;
}

TreeState fit_cart(const Eigen::MatrixXd& x, const std::vector<int>& y,
                   const std::vector<double>& w, const std::vector<int>& samples,
                   const CartParams& p) {
    TreeState tree;
    tree.n_classes = p.n_classes;
    tree.dim = static_cast<int>(x.cols());
    std::vector<int> idx = samples;
    build_node(tree, x, y, w, idx, 0, static_cast<int>(idx.size()), 0, p);
    return tree;
}

}  // namespace

// ---- KNN --------------------------------------------------------------------

Model fit_knn(const Dataset& d, const TrainConfig& cfg) {
    d.validate();
    if (cfg.knn_k < 1 || cfg.knn_k > d.n())
        throw InvalidConfig("knn: require 1 <= k <= number of samples");
    KnnState st{cfg.knn_k, d.x, d.y, d.n_classes};
    return Model{"knn", cfg, std::move(st)};
}

namespace {

int predict_state(const KnnState& m, const Eigen::VectorXd& x) {
    const int n = static_cast<int>(m.x.rows());
    std::vector<std::pair<double, int>> dist(n);
    for (int i = 0; i < n; ++i) dist[i] = {(m.x.row(i).transpose() - x).squaredNorm(), i};
    std::sort(dist.begin(), dist.end());  // distance ties resolve to the lower index
    std::vector<int> votes(m.n_classes, 0);
    for (int i = 0; i < m.k; ++i) ++votes[m.y[dist[i].second]];
    int best = 0;
    for (int c = 1; c < m.n_classes; ++c)
        if (votes[c] > votes[best]) best = c;
    return best;
}

}  // namespace

// ---- Gaussian naive Bayes ----------------------------------------------------

Model fit_gnb(const Dataset& d, const TrainConfig& cfg) {
    d.validate();
    const int C = d.n_classes, D = d.dim(), N = d.n();

    std::vector<int> counts(C, 0);
    for (int label : d.y) ++counts[label];
    for (int c = 0; c < C; ++c)
        if (counts[c] == 0)
            throw InvalidInput("gnb: class " + std::to_string(c) + " has no training samples");

    GnbState st;
    st.n_classes = C;
    st.log_prior.resize(C);
    st.mean = Eigen::MatrixXd::Zero(C, D);
    st.var = Eigen::MatrixXd::Zero(C, D);

    for (int i = 0; i < N; ++i) st.mean.row(d.y[i]) += d.x.row(i);
    for (int c = 0; c < C; ++c) st.mean.row(c) /= counts[c];
    for (int i = 0; i < N; ++i)
        st.var.row(d.y[i]) += (d.x.row(i) - st.mean.row(d.y[i])).array().square().matrix();
    for (int c = 0; c < C; ++c) st.var.row(c) /= counts[c];

    // smoothing proportional to the largest global feature variance
    const Eigen::RowVectorXd global_mean = d.x.colwise().mean();
    const Eigen::RowVectorXd global_var =
        (d.x.rowwise() - global_mean).array().square().colwise().mean();
    const double eps = 1e-9 * (D > 0 ? global_var.maxCoeff() : 0.0);
    st.var.array() += eps;

    for (int c = 0; c < C; ++c)
        st.log_prior[c] = std::log(static_cast<double>(counts[c]) / N);
    return Model{"gnb", cfg, std::move(st)};
}

Eigen::VectorXd gnb_log_posteriors(const GnbState& m, const Eigen::VectorXd& x) {
    Eigen::VectorXd lp(m.n_classes);
    constexpr double kLog2Pi = 1.8378770664093454836;
    for (int c = 0; c < m.n_classes; ++c) {
        double acc = m.log_prior[c];
        for (int j = 0; j < x.size(); ++j) {
            const double var = std::max(m.var(c, j), 1e-300);
            const double diff = x[j] - m.mean(c, j);
            acc += -0.5 * (kLog2Pi + std::log(var)) - diff * diff / (2.0 * var);
        }
        lp[c] = acc;
    }
    return lp;
}

namespace {

int predict_state(const GnbState& m, const Eigen::VectorXd& x) {
    return argmax_label(gnb_log_posteriors(m, x));
}

}  // namespace

// ---- logistic regression (binary and multinomial) -----------------------------

double logreg_loss(const Eigen::VectorXd& w, double b, const Eigen::MatrixXd& x,
                   const std::vector<int>& y, double lambda) {
    const int n = static_cast<int>(x.rows());
    const Eigen::VectorXd z = x * w + Eigen::VectorXd::Constant(n, b);
    double ce = 0.0;
    for (int i = 0; i < n; ++i) ce += softplus(z[i]) - (y[i] == 1 ? z[i] : 0.0);
    return ce / n + 0.5 * lambda * w.squaredNorm();
}

void logreg_grad(const Eigen::VectorXd& w, double b, const Eigen::MatrixXd& x,
                 const std::vector<int>& y, double lambda, Eigen::VectorXd& gw, double& gb) {
    const int n = static_cast<int>(x.rows());
    Eigen::VectorXd r = x * w + Eigen::VectorXd::Constant(n, b);
    for (int i = 0; i < n; ++i) r[i] = sigmoid(r[i]) - (y[i] == 1 ? 1.0 : 0.0);
    gw = x.transpose() * r / n + lambda * w;
    gb = r.mean();
}

double logreg_proba(const LogRegState& m, const Eigen::VectorXd& x) {
    return sigmoid(m.w.dot(x) + m.b);
}

Model fit_logreg(const Dataset& d, const TrainConfig& cfg) {
    d.validate();
    if (d.n_classes != 2) throw InvalidConfig("logreg: binary variant requires exactly 2 classes");
    LogRegState st;
    st.w = Eigen::VectorXd::Zero(d.dim());
    st.b = 0.0;
    Eigen::VectorXd gw;
    double gb;
    for (int epoch = 0; epoch < cfg.lr_epochs; ++epoch) {
        logreg_grad(st.w, st.b, d.x, d.y, cfg.lr_lambda, gw, gb);
        st.w -= cfg.lr_rate * gw;
        st.b -= cfg.lr_rate * gb;
    }
    return Model{"logreg", cfg, std::move(st)};
}

namespace {

int predict_state(const LogRegState& m, const Eigen::VectorXd& x) {
    return logreg_proba(m, x) >= 0.5 ? 1 : 0;
}

Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits) {
    Eigen::MatrixXd p = logits;
    for (int i = 0; i < p.rows(); ++i) {
        const double mx = p.row(i).maxCoeff();
        p.row(i) = (p.row(i).array() - mx).exp();
        p.row(i) /= p.row(i).sum();
    }
    return p;
}

}  // namespace

double softmax_loss(const Eigen::MatrixXd& w, const Eigen::VectorXd& b, const Eigen::MatrixXd& x,
                    const std::vector<int>& y, double lambda) {
    const int n = static_cast<int>(x.rows());
    Eigen::MatrixXd logits = x * w.transpose();
    logits.rowwise() += b.transpose();
    double ce = 0.0;
    for (int i = 0; i < n; ++i) {
        const double mx = logits.row(i).maxCoeff();
        const double lse = mx + std::log((logits.row(i).array() - mx).exp().sum());
        ce += lse - logits(i, y[i]);
    }
    return ce / n + 0.5 * lambda * w.squaredNorm();
}

void softmax_grad(const Eigen::MatrixXd& w, const Eigen::VectorXd& b, const Eigen::MatrixXd& x,
                  const std::vector<int>& y, double lambda, Eigen::MatrixXd& gw,
                  Eigen::VectorXd& gb) {
    const int n = static_cast<int>(x.rows());
    Eigen::MatrixXd logits = x * w.transpose();
    logits.rowwise() += b.transpose();
    Eigen::MatrixXd p = softmax_rows(logits);
    for (int i = 0; i < n; ++i) p(i, y[i]) -= 1.0;
    gw = p.transpose() * x / n + lambda * w;
    gb = p.colwise().mean().transpose();
}

Model fit_softmax(const Dataset& d, const TrainConfig& cfg) {
    d.validate();
    SoftmaxState st;
    st.w = Eigen::MatrixXd::Zero(d.n_classes, d.dim());
    st.b = Eigen::VectorXd::Zero(d.n_classes);
    Eigen::MatrixXd gw;
    Eigen::VectorXd gb;
    for (int epoch = 0; epoch < cfg.lr_epochs; ++epoch) {
        softmax_grad(st.w, st.b, d.x, d.y, cfg.lr_lambda, gw, gb);
        st.w -= cfg.lr_rate * gw;
        st.b -= cfg.lr_rate * gb;
    }
    return Model{"softmax", cfg, std::move(st)};
}

namespace {

int predict_state(const SoftmaxState& m, const Eigen::VectorXd& x) {
    return argmax_label(m.w * x + m.b);
}

}  // namespace

// ---- linear SVM (Pegasos subgradient) -----------------------------------------

double svm_objective(const Eigen::VectorXd& w, double b, const Eigen::MatrixXd& x,
                     const std::vector<int>& y, double lambda) {
    const int n = static_cast<int>(x.rows());
    double hinge = 0.0;
    for (int i = 0; i < n; ++i) {
        const double yi = y[i] == 1 ? 1.0 : -1.0;
        hinge += std::max(0.0, 1.0 - yi * (w.dot(x.row(i).transpose()) + b));
    }
    return 0.5 * lambda * (w.squaredNorm() + b * b) + hinge / n;
}

Model fit_svm(const Dataset& d, const TrainConfig& cfg) {
    d.validate();
    if (d.n_classes != 2) throw InvalidConfig("svm: requires exactly 2 classes");
    const int n = d.n(), D = d.dim();

    // bias folded in as a constant-1 feature; averaged iterates returned
    Eigen::VectorXd wa = Eigen::VectorXd::Zero(D + 1);
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(D + 1);
    std::mt19937_64 rng = make_rng(cfg.seed, 0x5f3759df);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);

    const double lambda = cfg.svm_lambda;
    std::int64_t t = 0;
    for (int epoch = 0; epoch < cfg.svm_epochs; ++epoch) {
        rng_shuffle(rng, order);
        for (int i : order) {
            ++t;
            const double eta = 1.0 / (lambda * static_cast<double>(t));
            const double yi = d.y[i] == 1 ? 1.0 : -1.0;
            const double margin = yi * (wa.head(D).dot(d.x.row(i).transpose()) + wa[D]);
            wa *= (1.0 - eta * lambda);
            if (margin < 1.0) {
                wa.head(D) += eta * yi * d.x.row(i).transpose();
                wa[D] += eta * yi;
            }
            sum += wa;
        }
    }
    SvmState st;
    const Eigen::VectorXd avg = sum / static_cast<double>(t);
    st.w = avg.head(D);
    st.b = avg[D];
    return Model{"svm", cfg, std::move(st)};
}

namespace {

int predict_state(const SvmState& m, const Eigen::VectorXd& x) {
    return m.w.dot(x) + m.b >= 0.0 ? 1 : 0;
}

}  // namespace

// ---- decision tree / random forest / AdaBoost ---------------------------------

Model fit_tree(const Dataset& d, const TrainConfig& cfg) {
    d.validate();
    if (cfg.tree_max_depth < 0) throw InvalidConfig("tree: max_depth must be >= 0");
    std::vector<double> w(d.n(), 1.0 / d.n());
    std::vector<int> samples(d.n());
    std::iota(samples.begin(), samples.end(), 0);
    CartParams p{d.n_classes, cfg.tree_max_depth, cfg.tree_min_split, 0, nullptr};
    return Model{"tree", cfg, fit_cart(d.x, d.y, w, samples, p)};
}

namespace {

int predict_state(const TreeState& m, const Eigen::VectorXd& x) {
    return m.nodes[tree_predict_index(m, x)].label;
}

}  // namespace

Model fit_forest(const Dataset& d, const TrainConfig& cfg) {
    d.validate();
    if (cfg.forest_trees < 1) throw InvalidConfig("forest: n_trees must be >= 1");
    const int n = d.n(), D = d.dim();

    int per_node;
    if (cfg.forest_feature_frac > 0.0)
        per_node = std::min(D, std::max(1, static_cast<int>(std::ceil(cfg.forest_feature_frac * D))));
    else
        per_node = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(D))));

    ForestState st;
    st.n_classes = d.n_classes;
    st.dim = D;
    const std::vector<double> w(n, 1.0 / n);
    for (int tidx = 0; tidx < cfg.forest_trees; ++tidx) {
        std::mt19937_64 rng = make_rng(cfg.seed, static_cast<std::uint64_t>(tidx));
        std::vector<int> samples(n);
        if (cfg.forest_bootstrap)
            for (int i = 0; i < n; ++i) samples[i] = static_cast<int>(rng_below(rng, n));
        else
            std::iota(samples.begin(), samples.end(), 0);
        CartParams p{d.n_classes, cfg.tree_max_depth, cfg.tree_min_split,
                     per_node >= D ? 0 : per_node, &rng};
        st.trees.push_back(fit_cart(d.x, d.y, w, samples, p));
    }
    return Model{"forest", cfg, std::move(st)};
}

namespace {

int predict_state(const ForestState& m, const Eigen::VectorXd& x) {
    std::vector<int> votes(m.n_classes, 0);
    for (const TreeState& t : m.trees) ++votes[t.nodes[tree_predict_index(t, x)].label];
    int best = 0;
    for (int c = 1; c < m.n_classes; ++c)
        if (votes[c] > votes[best]) best = c;
    return best;
}

}  // namespace

Model fit_adaboost(const Dataset& d, const TrainConfig& cfg, AdaTrace* trace) {
    d.validate();
    if (cfg.ada_rounds < 1) throw InvalidConfig("adaboost: n_rounds must be >= 1");
    if (cfg.ada_base_depth < 1) throw InvalidConfig("adaboost: base_depth must be >= 1");
    const int n = d.n(), C = d.n_classes;

    AdaState st;
    st.n_classes = C;
    st.dim = d.dim();
    {
        std::vector<double> counts(C, 0.0);
        for (int label : d.y) counts[label] += 1.0;
        st.fallback_label = majority_label(counts);
    }

    Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / n);
    std::vector<int> samples(n);
    std::iota(samples.begin(), samples.end(), 0);

    for (int round = 0; round < cfg.ada_rounds; ++round) {
        std::vector<double> wv(w.data(), w.data() + n);
        CartParams p{C, cfg.ada_base_depth, cfg.tree_min_split, 0, nullptr};
        TreeState tree = fit_cart(d.x, d.y, wv, samples, p);

        std::vector<int> pred(n);
        double err = 0.0;
        for (int i = 0; i < n; ++i) {
            pred[i] = tree.nodes[tree_predict_index(tree, d.x.row(i).transpose())].label;
            if (pred[i] != d.y[i]) err += w[i];
        }

        if (err >= 1.0 - 1.0 / C) break;  // no better than chance: discard round, stop

        const double alpha = samme_alpha(err, C);
        st.rounds.push_back({std::move(tree), alpha, err});

        for (int i = 0; i < n; ++i)
            if (pred[i] != d.y[i]) w[i] *= std::exp(alpha);
        w /= w.sum();

        if (trace) {
            trace->errs.push_back(err);
            trace->alphas.push_back(alpha);
            trace->weights_after.push_back(w);
        }
        if (err == 0.0) break;  // perfect learner: keep round, stop
    }
    return Model{"adaboost", cfg, std::move(st)};
}

namespace {

int predict_state(const AdaState& m, const Eigen::VectorXd& x) {
    if (m.rounds.empty()) return m.fallback_label;
    Eigen::VectorXd votes = Eigen::VectorXd::Zero(m.n_classes);
    for (const AdaRound& r : m.rounds)
        votes[r.tree.nodes[tree_predict_index(r.tree, x)].label] += r.alpha;
    return argmax_label(votes);
}

}  // namespace

// ---- dispatch ----------------------------------------------------------------

Model fit(const std::string& learner_id, const Dataset& d, const TrainConfig& cfg) {
    if (learner_id == "knn") return fit_knn(d, cfg);
    if (learner_id == "gnb") return fit_gnb(d, cfg);
    if (learner_id == "logreg") return fit_logreg(d, cfg);
    if (learner_id == "softmax") return fit_softmax(d, cfg);
    if (learner_id == "svm") return fit_svm(d, cfg);
    if (learner_id == "tree") return fit_tree(d, cfg);
    if (learner_id == "forest") return fit_forest(d, cfg);
    if (learner_id == "adaboost") return fit_adaboost(d, cfg);
    throw InvalidConfig("unknown learner id '" + learner_id + "'");
}

int Model::expected_dim() const {
    return std::visit(
        [](const auto& st) -> int {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, KnnState>) return static_cast<int>(st.x.cols());
            if constexpr (std::is_same_v<T, GnbState>) return static_cast<int>(st.mean.cols());
            if constexpr (std::is_same_v<T, LogRegState>) return static_cast<int>(st.w.size());
            if constexpr (std::is_same_v<T, SoftmaxState>) return static_cast<int>(st.w.cols());
            if constexpr (std::is_same_v<T, SvmState>) return static_cast<int>(st.w.size());
            if constexpr (std::is_same_v<T, TreeState>) return st.dim;
            if constexpr (std::is_same_v<T, ForestState>) return st.dim;
            if constexpr (std::is_same_v<T, AdaState>) return st.dim;
        },
        state);
}

int Model::predict(const Eigen::VectorXd& x) const {
    if (static_cast<int>(x.size()) != expected_dim())
        throw InvalidInput("predict: feature dimension mismatch: model expects " +
                           std::to_string(expected_dim()) + ", got " + std::to_string(x.size()));
    return std::visit([&](const auto& st) { return predict_state(st, x); }, state);
}

// ---- serialization -------------------------------------------------------------

namespace {

json vec_to_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

json mat_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

Eigen::VectorXd vec_from_json(const json& a) {
    Eigen::VectorXd v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<int>(i)] = a[i].get<double>();
    return v;
}

Eigen::MatrixXd mat_from_json(const json& rows) {
    const int r = static_cast<int>(rows.size());
    const int c = r > 0 ? static_cast<int>(rows[0].size()) : 0;
    Eigen::MatrixXd m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = rows[i][j].get<double>();
    return m;
}

json tree_to_json(const TreeState& t) {
    json nodes = json::array();
    for (const TreeNode& n : t.nodes)
        nodes.push_back({{"feature", n.feature},
                         {"threshold", n.threshold},
                         {"left", n.left},
                         {"right", n.right},
                         {"label", n.label}});
    return {{"n_classes", t.n_classes}, {"dim", t.dim}, {"nodes", nodes}};
}

TreeState tree_from_json(const json& j) {
    TreeState t;
    t.n_classes = j.at("n_classes").get<int>();
    t.dim = j.at("dim").get<int>();
    for (const auto& n : j.at("nodes"))
        t.nodes.push_back({n.at("feature").get<int>(), n.at("threshold").get<double>(),
                           n.at("left").get<int>(), n.at("right").get<int>(),
                           n.at("label").get<int>()});
    return t;
}

json config_to_json(const TrainConfig& c) {
    return {{"seed", c.seed},
            {"knn_k", c.knn_k},
            {"lr_rate", c.lr_rate},
            {"lr_epochs", c.lr_epochs},
            {"lr_lambda", c.lr_lambda},
            {"svm_lambda", c.svm_lambda},
            {"svm_epochs", c.svm_epochs},
            {"tree_max_depth", c.tree_max_depth},
            {"tree_min_split", c.tree_min_split},
            {"forest_trees", c.forest_trees},
            {"forest_feature_frac", c.forest_feature_frac},
            {"forest_bootstrap", c.forest_bootstrap},
            {"ada_rounds", c.ada_rounds},
            {"ada_base_depth", c.ada_base_depth}};
}

TrainConfig config_from_json(const json& j) {
    TrainConfig c;
    c.seed = j.at("seed").get<std::uint64_t>();
    c.knn_k = j.at("knn_k").get<int>();
    c.lr_rate = j.at("lr_rate").get<double>();
    c.lr_epochs = j.at("lr_epochs").get<int>();
    c.lr_lambda = j.at("lr_lambda").get<double>();
    c.svm_lambda = j.at("svm_lambda").get<double>();
    c.svm_epochs = j.at("svm_epochs").get<int>();
    c.tree_max_depth = j.at("tree_max_depth").get<int>();
    c.tree_min_split = j.at("tree_min_split").get<int>();
    c.forest_trees = j.at("forest_trees").get<int>();
    c.forest_feature_frac = j.at("forest_feature_frac").get<double>();
    c.forest_bootstrap = j.at("forest_bootstrap").get<bool>();
    c.ada_rounds = j.at("ada_rounds").get<int>();
    c.ada_base_depth = j.at("ada_base_depth").get<int>();
    return c;
}

constexpr int kModelFormatVersion = 1;

}  // namespace

std::string model_to_json(const Model& m, std::optional<FeatureKind> feature_kind) {
    json j;
    j["format_version"] = kModelFormatVersion;
    j["learner"] = m.learner_id;
    if (feature_kind) j["feature_kind"] = feature_kind_name(*feature_kind);
    j["config"] = config_to_json(m.cfg);

    json p;
    std::visit(
        [&](const auto& st) {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, KnnState>) {
                p = {{"k", st.k}, {"n_classes", st.n_classes}, {"x", mat_to_json(st.x)}, {"y", st.y}};
            } else if constexpr (std::is_same_v<T, GnbState>) {
                p = {{"n_classes", st.n_classes},
                     {"log_prior", vec_to_json(st.log_prior)},
                     {"mean", mat_to_json(st.mean)},
                     {"var", mat_to_json(st.var)}};
            } else if constexpr (std::is_same_v<T, LogRegState>) {
                p = {{"w", vec_to_json(st.w)}, {"b", st.b}};
            } else if constexpr (std::is_same_v<T, SoftmaxState>) {
                p = {{"w", mat_to_json(st.w)}, {"b", vec_to_json(st.b)}};
            } else if constexpr (std::is_same_v<T, SvmState>) {
                p = {{"w", vec_to_json(st.w)}, {"b", st.b}};
            } else if constexpr (std::is_same_v<T, TreeState>) {
                p = tree_to_json(st);
            } else if constexpr (std::is_same_v<T, ForestState>) {
                json trees = json::array();
                for (const TreeState& t : st.trees) trees.push_back(tree_to_json(t));
                p = {{"n_classes", st.n_classes}, {"dim", st.dim}, {"trees", trees}};
            } else if constexpr (std::is_same_v<T, AdaState>) {
                json rounds = json::array();
                for (const AdaRound& r : st.rounds)
                    rounds.push_back(
                        {{"alpha", r.alpha}, {"err", r.err}, {"tree", tree_to_json(r.tree)}});
                p = {{"n_classes", st.n_classes},
                     {"dim", st.dim},
                     {"fallback_label", st.fallback_label},
                     {"rounds", rounds}};
            }
        },
        m.state);
    j["params"] = p;
    return j.dump(2);
}

void save_model(const std::filesystem::path& path, const Model& m,
                std::optional<FeatureKind> feature_kind) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError(path.string() + ": cannot open for writing");
    out << model_to_json(m, feature_kind) << "\n";
}

LoadedModel model_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DataError(std::string("model JSON parse error: ") + e.what());
    }
    if (!j.contains("format_version") || j["format_version"].get<int>() != kModelFormatVersion)
        throw DataError("unsupported model format version");

    LoadedModel lm;
    lm.model.learner_id = j.at("learner").get<std::string>();
    lm.model.cfg = config_from_json(j.at("config"));
    if (j.contains("feature_kind"))
        lm.feature_kind = feature_kind_from_name(j["feature_kind"].get<std::string>());

    const json& p = j.at("params");
    const std::string& id = lm.model.learner_id;
    if (id == "knn") {
        KnnState st;
        st.k = p.at("k").get<int>();
        st.n_classes = p.at("n_classes").get<int>();
        st.x = mat_from_json(p.at("x"));
        st.y = p.at("y").get<std::vector<int>>();
        lm.model.state = std::move(st);
    } else if (id == "gnb") {
        GnbState st;
        st.n_classes = p.at("n_classes").get<int>();
        st.log_prior = vec_from_json(p.at("log_prior"));
        st.mean = mat_from_json(p.at("mean"));
        st.var = mat_from_json(p.at("var"));
        lm.model.state = std::move(st);
    } else if (id == "logreg") {
        lm.model.state = LogRegState{vec_from_json(p.at("w")), p.at("b").get<double>()};
    } else if (id == "softmax") {
        lm.model.state = SoftmaxState{mat_from_json(p.at("w")), vec_from_json(p.at("b"))};
    } else if (id == "svm") {
        lm.model.state = SvmState{vec_from_json(p.at("w")), p.at("b").get<double>()};
    } else if (id == "tree") {
        lm.model.state = tree_from_json(p);
    } else if (id == "forest") {
        ForestState st;
        st.n_classes = p.at("n_classes").get<int>();
        st.dim = p.at("dim").get<int>();
        for (const auto& t : p.at("trees")) st.trees.push_back(tree_from_json(t));
        lm.model.state = std::move(st);
    } else if (id == "adaboost") {
        AdaState st;
        st.n_classes = p.at("n_classes").get<int>();
        st.dim = p.at("dim").get<int>();
        st.fallback_label = p.at("fallback_label").get<int>();
        for (const auto& r : p.at("rounds"))
            st.rounds.push_back({tree_from_json(r.at("tree")), r.at("alpha").get<double>(),
                                 r.at("err").get<double>()});
        lm.model.state = std::move(st);
    } else {
        throw DataError("unknown learner id in model file: '" + id + "'");
    }
    return lm;
}

LoadedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError(path.string() + ": cannot open");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return model_from_json(text);
}

}  // namespace roadsight
