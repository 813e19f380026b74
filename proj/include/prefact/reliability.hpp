#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "prefact/error.hpp"
#include "prefact/sourcefeat.hpp"
#include "prefact/textfeat.hpp"
#include "prefact/util.hpp"

namespace prefact {

// ---------------------------------------------------------------------------
// Heuristic combiner: weighted mean of the available channels' group scores,
// weights renormalized over whatever is available.

inline double heuristic_site_reliability(const std::vector<FeatureGroupReport>& reports,
                                         const std::map<Channel, double>& group_weights) {
    double num = 0.0, denom = 0.0;
    for (const auto& r : reports) {
        if (!r.available) continue;
        auto it = group_weights.find(r.channel);
        double w = it == group_weights.end() ? 1.0 : it->second;
        if (w < 0.0) throw ValidationError("group weight for '" + to_string(r.channel) +
                                           "' must be non-negative");
        num += w * r.group_score;
        denom += w;
    }
    if (denom <= 0.0) {
        throw InsufficientEvidenceError("no available evidence channel with positive weight");
    }
    return num / denom;
}

// ---------------------------------------------------------------------------
// Language-side reliability: clean, neutral, polite text scores high.

struct LanguageMixWeights {
    double propaganda = 0.4;
    double subjectivity = 0.3;
    double offensive = 0.2;
    double sentiment = 0.1;
};

inline double language_reliability(const StyleFeatureVector& vec,
                                   const LanguageMixWeights& mix = {}) {
    double sum = mix.propaganda + mix.subjectivity + mix.offensive + mix.sentiment;
    if (mix.propaganda < 0 || mix.subjectivity < 0 || mix.offensive < 0 || mix.sentiment < 0 ||
        sum <= 0.0) {
        throw ValidationError("language mix weights must be non-negative with positive sum");
    }
    double penalty = (mix.propaganda * vec.propaganda_cue_density +
                      mix.subjectivity * vec.subjectivity_density +
                      mix.offensive * vec.offensive_density +
                      mix.sentiment * std::abs(vec.sentiment_polarity)) /
                     sum;
    return 1.0 - penalty;
}

// ---------------------------------------------------------------------------
// Trained mode: linear-logistic model over the eight channel scores.

struct LabeledDataset {
    std::vector<std::vector<double>> rows;  // NaN marks an unavailable feature
    std::vector<int> labels;                // 0 or 1
    std::vector<std::string> feature_order;
};

struct Standardization {
    std::vector<double> mean;
    std::vector<double> scale;
    std::vector<std::string> warnings;
};

// Per-feature mean and population standard deviation, skipping NaN entries.
// Zero-variance (or all-missing) features get scale 1 and a recorded warning.
inline Standardization standardize_fit(const LabeledDataset& dataset) {
    if (dataset.rows.size() < 2) {
        throw ValidationError("standardization needs at least 2 rows, got " +
                              std::to_string(dataset.rows.size()));
    }
    std::size_t dim = dataset.feature_order.size();
    Standardization st;
    st.mean.assign(dim, 0.0);
    st.scale.assign(dim, 1.0);
    for (std::size_t f = 0; f < dim; ++f) {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& row : dataset.rows) {
            if (row.size() != dim) throw ValidationError("dataset row dimension mismatch");
            if (std::isfinite(row[f])) {
                sum += row[f];
                ++n;
            }
        }
        if (n == 0) {
            st.warnings.push_back("feature '" + dataset.feature_order[f] +
                                  "' has no observed values; using mean 0, scale 1");
            continue;
        }
        double mean = sum / static_cast<double>(n);
        double sq = 0.0;
        for (const auto& row : dataset.rows) {
            if (std::isfinite(row[f])) {
                double d = row[f] - mean;
                sq += d * d;
            }
        }
        double sigma = std::sqrt(sq / static_cast<double>(n));
        st.mean[f] = mean;
        if (sigma > 0.0) {
            st.scale[f] = sigma;
        } else {
            st.warnings.push_back("feature '" + dataset.feature_order[f] +
                                  "' has zero variance; using scale 1");
        }
    }
    return st;
}

// Missing values standardize to 0, i.e. the feature mean.
inline std::vector<double> standardize_apply(const Standardization& st,
                                             const std::vector<double>& row) {
    if (row.size() != st.mean.size()) throw ValidationError("feature vector dimension mismatch");
    std::vector<double> out(row.size());
    for (std::size_t f = 0; f < row.size(); ++f) {
        out[f] = std::isfinite(row[f]) ? (row[f] - st.mean[f]) / st.scale[f] : 0.0;
    }
    return out;
}

struct ReliabilityModel {
    enum class Mode { heuristic, trained };
    Mode mode = Mode::heuristic;
    std::map<Channel, double> group_weights;  // heuristic mode
    std::vector<double> weights;              // trained mode
    double bias = 0.0;
    std::vector<std::string> feature_order;
    Standardization standardization;
};

inline std::map<Channel, double> equal_group_weights() {
    std::map<Channel, double> w;
    for (Channel c : kAllChannels) w[c] = 1.0;
    return w;
}

inline double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

struct LossGrad {
    double loss = 0.0;
    std::vector<double> grad_w;
    double grad_b = 0.0;
};

// Mean negative log-likelihood plus l2 * ||w||^2 (bias unpenalized), with the
// exact gradient. Rows must already be standardized.
inline LossGrad logistic_loss_grad(const std::vector<double>& weights, double bias,
                                   const std::vector<std::vector<double>>& rows,
                                   const std::vector<int>& labels, double l2) {
    if (rows.empty()) throw ValidationError("logistic loss needs a non-empty batch");
    if (rows.size() != labels.size()) throw ValidationError("rows/labels size mismatch");
    std::size_t dim = weights.size();
    LossGrad out;
    out.grad_w.assign(dim, 0.0);
    double n = static_cast<double>(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& x = rows[i];
        if (x.size() != dim) throw ValidationError("batch row dimension mismatch");
        double z = bias;
        for (std::size_t f = 0; f < dim; ++f) z += weights[f] * x[f];
        double y = static_cast<double>(labels[i]);
        // softplus(z) - y*z, computed without overflow
        double softplus = z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
        out.loss += softplus - y * z;
        double residual = sigmoid(z) - y;
        for (std::size_t f = 0; f < dim; ++f) out.grad_w[f] += residual * x[f];
        out.grad_b += residual;
    }
    out.loss /= n;
    out.grad_b /= n;
    double penalty = 0.0;
    for (std::size_t f = 0; f < dim; ++f) {
        out.grad_w[f] = out.grad_w[f] / n + 2.0 * l2 * weights[f];
        penalty += weights[f] * weights[f];
    }
    out.loss += l2 * penalty;
    return out;
}

struct TrainHyper {
    double lr = 0.1;
    int epochs = 500;
    double l2 = 1e-3;
    std::uint64_t seed = 0;  // consumed by dataset generation/splitting, not the descent
};

struct TrainResult {
    ReliabilityModel model;
    double initial_loss = 0.0;
    double final_loss = 0.0;
};

// Full-batch gradient descent from zero initialization on standardized
// features. Deterministic given (dataset, hyper).
inline TrainResult train_logistic(const LabeledDataset& dataset, const TrainHyper& hyper = {}) {
    bool has0 = false, has1 = false;
    for (int y : dataset.labels) {
        if (y == 0) has0 = true;
        if (y == 1) has1 = true;
    }
    if (!has0 || !has1) {
        throw ValidationError("training needs at least one row of each label class");
    }
    Standardization st = standardize_fit(dataset);
    std::vector<std::vector<double>> rows;
    rows.reserve(dataset.rows.size());
    for (const auto& r : dataset.rows) rows.push_back(standardize_apply(st, r));

    std::size_t dim = dataset.feature_order.size();
    std::vector<double> w(dim, 0.0);
    double b = 0.0;
    TrainResult result;
    for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
        LossGrad lg = logistic_loss_grad(w, b, rows, dataset.labels, hyper.l2);
        if (!std::isfinite(lg.loss)) throw DivergenceError("non-finite training loss", epoch);
        if (epoch == 0) result.initial_loss = lg.loss;
        result.final_loss = lg.loss;
        for (std::size_t f = 0; f < dim; ++f) w[f] -= hyper.lr * lg.grad_w[f];
        b -= hyper.lr * lg.grad_b;
    }
    ReliabilityModel m;
    m.mode = ReliabilityModel::Mode::trained;
    m.weights = std::move(w);
    m.bias = b;
    m.feature_order = dataset.feature_order;
    m.standardization = std::move(st);
    result.model = std::move(m);
    return result;
}

// ---------------------------------------------------------------------------
// Prediction

// Raw (unstandardized) feature vector; NaN marks an unavailable feature.
inline double predict_vector(const ReliabilityModel& model, const std::vector<double>& raw) {
    if (model.mode != ReliabilityModel::Mode::trained) {
        throw ValidationError("predict_vector requires a trained model");
    }
    std::vector<double> x = standardize_apply(model.standardization, raw);
    double z = model.bias;
    for (std::size_t f = 0; f < x.size(); ++f) z += model.weights[f] * x[f];
    return sigmoid(z);
}

inline std::vector<double> reports_to_vector(const std::vector<std::string>& feature_order,
                                             const std::vector<FeatureGroupReport>& reports) {
    std::vector<double> raw(feature_order.size(), std::numeric_limits<double>::quiet_NaN());
    for (const auto& r : reports) {
        if (!r.available) continue;
        for (std::size_t f = 0; f < feature_order.size(); ++f) {
            if (feature_order[f] == to_string(r.channel)) raw[f] = r.group_score;
        }
    }
    return raw;
}

inline double predict(const ReliabilityModel& model,
                      const std::vector<FeatureGroupReport>& reports) {
    if (model.mode == ReliabilityModel::Mode::heuristic) {
        return heuristic_site_reliability(reports, model.group_weights);
    }
    return predict_vector(model, reports_to_vector(model.feature_order, reports));
}

// ---------------------------------------------------------------------------
// Model file: versioned, canonical (sorted keys) so files are diffable.

inline json to_json(const ReliabilityModel& m) {
    json j{{"format", "prefact-model"}, {"version", 1}};
    if (m.mode == ReliabilityModel::Mode::heuristic) {
        j["mode"] = "heuristic";
        json w;
        for (const auto& [c, v] : m.group_weights) w[to_string(c)] = v;
        j["group_weights"] = std::move(w);
    } else {
        j["mode"] = "trained";
        j["weights"] = m.weights;
        j["bias"] = m.bias;
        j["feature_order"] = m.feature_order;
        j["standardization"] =
            json{{"mean", m.standardization.mean}, {"scale", m.standardization.scale}};
    }
    return j;
}

inline ReliabilityModel model_from_json(const json& j) {
    if (!j.is_object() || j.value("format", "") != "prefact-model") {
        throw ValidationError("not a prefact model file");
    }
    if (j.value("version", 0) != 1) {
        throw ValidationError("unsupported model file version");
    }
    ReliabilityModel m;
    std::string mode = j.at("mode").get<std::string>();
    if (mode == "heuristic") {
        m.mode = ReliabilityModel::Mode::heuristic;
        double sum = 0.0;
        for (const auto& item : j.at("group_weights").items()) {
            double v = item.value().get<double>();
            if (v < 0.0) throw ValidationError("group weight must be non-negative");
            m.group_weights[channel_from_string(item.key())] = v;
            sum += v;
        }
        if (sum <= 0.0) throw ValidationError("heuristic group weights must sum > 0");
    } else if (mode == "trained") {
        m.mode = ReliabilityModel::Mode::trained;
        m.weights = j.at("weights").get<std::vector<double>>();
        m.bias = j.at("bias").get<double>();
        m.feature_order = j.at("feature_order").get<std::vector<std::string>>();
        m.standardization.mean = j.at("standardization").at("mean").get<std::vector<double>>();
        m.standardization.scale = j.at("standardization").at("scale").get<std::vector<double>>();
        if (m.weights.size() != m.feature_order.size() ||
            m.standardization.mean.size() != m.feature_order.size() ||
            m.standardization.scale.size() != m.feature_order.size()) {
            throw ValidationError("model weight/feature dimensions disagree");
        }
        for (double s : m.standardization.scale) {
            if (!(s > 0.0)) throw ValidationError("standardization scales must be positive");
        }
    } else {
        throw ValidationError("unknown model mode '" + mode + "'");
    }
    return m;
}

// Seeded single held-out split; deterministic across platforms.
inline std::pair<LabeledDataset, LabeledDataset> split_dataset(const LabeledDataset& dataset,
                                                               double train_fraction,
                                                               std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw ValidationError("train_fraction must be in (0,1)");
    }
    std::vector<std::size_t> order(dataset.rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);
    std::size_t n_train = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(order.size())));
    n_train = std::min(std::max<std::size_t>(1, n_train), order.size() - 1);
    LabeledDataset train, test;
    train.feature_order = test.feature_order = dataset.feature_order;
    for (std::size_t i = 0; i < order.size(); ++i) {
        auto& dst = i < n_train ? train : test;
        dst.rows.push_back(dataset.rows[order[i]]);
        dst.labels.push_back(dataset.labels[order[i]]);
    }
    return {std::move(train), std::move(test)};
}

}  // namespace prefact
