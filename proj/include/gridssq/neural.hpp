#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "gridssq/errors.hpp"
#include "gridssq/rng.hpp"

namespace gridssq {

struct NetShape {
    std::size_t inputs = 0;
    std::size_t hidden = 0;
    std::size_t outputs = 0;

    std::size_t gene_count() const {
        return hidden * inputs + outputs * hidden + hidden + outputs;
    }

    bool operator==(const NetShape&) const = default;
};

// Min-max ranges observed on the training data. Features and labels are
// mapped to [0, 1]; a constant dimension (min == max) maps to 0.5.
struct NormalizationMeta {
    std::vector<double> x_min, x_max;
    std::vector<double> y_min, y_max;

    bool operator==(const NormalizationMeta&) const = default;
};

// One hidden sigmoid layer, linear output layer. Thresholds are subtracted:
// H_j = sigmoid(sum_i w_ih[j][i] x_i - a_j), O_k = sum_j H_j w_ho[k][j] - b_k.
struct MlpParams {
    std::size_t inputs = 0;
    std::size_t hidden = 0;
    std::size_t outputs = 0;
    std::vector<double> w_ih;  // hidden x inputs, row-major
    std::vector<double> w_ho;  // outputs x hidden, row-major
    std::vector<double> a;     // hidden thresholds
    std::vector<double> b;     // output thresholds
    NormalizationMeta norm;

    NetShape shape() const { return {inputs, hidden, outputs}; }

    static MlpParams zeros(NetShape s) {
        MlpParams p;
        p.inputs = s.inputs;
        p.hidden = s.hidden;
        p.outputs = s.outputs;
        p.w_ih.assign(s.hidden * s.inputs, 0.0);
        p.w_ho.assign(s.outputs * s.hidden, 0.0);
        p.a.assign(s.hidden, 0.0);
        p.b.assign(s.outputs, 0.0);
        return p;
    }

    bool operator==(const MlpParams&) const = default;
};

struct Sample {
    std::vector<double> x;
    std::vector<double> y;

    bool operator==(const Sample&) const = default;
};

inline void validate_params(const MlpParams& p) {
    if (p.inputs < 1 || p.hidden < 1 || p.outputs < 1)
        throw Error(ErrorKind::DimensionMismatch, "all layer sizes must be at least 1");
    if (p.w_ih.size() != p.hidden * p.inputs || p.w_ho.size() != p.outputs * p.hidden ||
        p.a.size() != p.hidden || p.b.size() != p.outputs)
        throw Error(ErrorKind::DimensionMismatch, "parameter shapes inconsistent with layer sizes");
    auto finite = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
    };
    if (!finite(p.w_ih) || !finite(p.w_ho) || !finite(p.a) || !finite(p.b))
        throw Error(ErrorKind::DimensionMismatch, "parameters must be finite");
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct Activation {
    std::vector<double> hidden;
    std::vector<double> output;
};

namespace detail {

// Allocation-free core used by the training and fitness hot loops.
inline void forward_into(const MlpParams& p, const double* x, double* hidden, double* output) {
    for (std::size_t j = 0; j < p.hidden; ++j) {
        const double* row = &p.w_ih[j * p.inputs];
        double net = -p.a[j];
        for (std::size_t i = 0; i < p.inputs; ++i) net += row[i] * x[i];
        hidden[j] = sigmoid(net);
    }
    for (std::size_t k = 0; k < p.outputs; ++k) {
        const double* row = &p.w_ho[k * p.hidden];
        double net = -p.b[k];
        for (std::size_t j = 0; j < p.hidden; ++j) net += row[j] * hidden[j];
        output[k] = net;
    }
}

}  // namespace detail

inline Activation forward(const MlpParams& p, const std::vector<double>& x) {
    validate_params(p);
    if (x.size() != p.inputs)
        throw Error(ErrorKind::DimensionMismatch,
                    "input has " + std::to_string(x.size()) + " entries, network expects " +
                        std::to_string(p.inputs));
    Activation act;
    act.hidden.resize(p.hidden);
    act.output.resize(p.outputs);
    detail::forward_into(p, x.data(), act.hidden.data(), act.output.data());
    return act;
}

namespace detail {

inline void check_sample(const MlpParams& p, const Sample& s) {
    if (s.x.size() != p.inputs || s.y.size() != p.outputs)
        throw Error(ErrorKind::DimensionMismatch, "sample dimensions do not match the network");
}

}  // namespace detail

// Mean over samples of the summed absolute output error. This is the
// fitness measure used by the evolutionary trainer; lower is better.
inline double loss_abs(const MlpParams& p, const std::vector<Sample>& samples) {
    validate_params(p);
    if (samples.empty()) throw Error(ErrorKind::EmptyDataset, "loss over an empty dataset");
    std::vector<double> hidden(p.hidden), output(p.outputs);
    double total = 0.0;
    for (const auto& s : samples) {
        detail::check_sample(p, s);
        detail::forward_into(p, s.x.data(), hidden.data(), output.data());
        for (std::size_t k = 0; k < p.outputs; ++k) total += std::abs(s.y[k] - output[k]);
    }
    return total / static_cast<double>(samples.size());
}

struct MlpGradient {
    std::vector<double> w_ih, w_ho, a, b;

    static MlpGradient zeros(NetShape s) {
        MlpGradient g;
        g.w_ih.assign(s.hidden * s.inputs, 0.0);
        g.w_ho.assign(s.outputs * s.hidden, 0.0);
        g.a.assign(s.hidden, 0.0);
        g.b.assign(s.outputs, 0.0);
        return g;
    }
};

namespace detail {

// Adds the gradient of 0.5 * sum_k (y_k - O_k)^2 for one sample into `g`.
// With e_k = O_k - y_k: dL/dw_ho[k][j] = e_k H_j, dL/db_k = -e_k,
// dL/dw_ih[j][i] = s_j x_i and dL/da_j = -s_j where
// s_j = H_j (1 - H_j) sum_k e_k w_ho[k][j].
inline void accumulate_gradient(const MlpParams& p, const Sample& s, MlpGradient& g,
                                std::vector<double>& hidden, std::vector<double>& output,
                                std::vector<double>& delta_hidden) {
    check_sample(p, s);
    forward_into(p, s.x.data(), hidden.data(), output.data());
    std::fill(delta_hidden.begin(), delta_hidden.end(), 0.0);
    for (std::size_t k = 0; k < p.outputs; ++k) {
        const double e = output[k] - s.y[k];
        double* grow = &g.w_ho[k * p.hidden];
        const double* row = &p.w_ho[k * p.hidden];
        for (std::size_t j = 0; j < p.hidden; ++j) {
            grow[j] += e * hidden[j];
            delta_hidden[j] += e * row[j];
        }
        g.b[k] -= e;
    }
    for (std::size_t j = 0; j < p.hidden; ++j) {
        const double sj = delta_hidden[j] * hidden[j] * (1.0 - hidden[j]);
        double* grow = &g.w_ih[j * p.inputs];
        for (std::size_t i = 0; i < p.inputs; ++i) grow[i] += sj * s.x[i];
        g.a[j] -= sj;
    }
}

}  // namespace detail

// Exact gradient of the per-sample squared error 0.5 * sum_k (y_k - O_k)^2.
inline MlpGradient gradient(const MlpParams& p, const Sample& s) {
    validate_params(p);
    MlpGradient g = MlpGradient::zeros(p.shape());
    std::vector<double> hidden(p.hidden), output(p.outputs), delta_hidden(p.hidden);
    detail::accumulate_gradient(p, s, g, hidden, output, delta_hidden);
    return g;
}

struct BpConfig {
    double learning_rate = 0.05;
    std::size_t epochs = 200;
    std::size_t batch_size = 32;
    std::uint64_t seed = 0;
};

// Mini-batch gradient descent on squared error. Each epoch shuffles the
// sample order from its own derived stream, walks the batches (last one
// ragged) and applies the batch-mean gradient. epochs = 0 is a no-op.
inline MlpParams train_bp(MlpParams params, const std::vector<Sample>& samples,
                          const BpConfig& cfg) {
    validate_params(params);
    if (samples.empty()) throw Error(ErrorKind::EmptyDataset, "training set is empty");
    if (!(cfg.learning_rate > 0.0))
        throw Error(ErrorKind::ConfigInvalid, "learning rate must be positive");
    if (cfg.batch_size < 1) throw Error(ErrorKind::ConfigInvalid, "batch size must be at least 1");

    const NetShape shape = params.shape();
    std::vector<std::size_t> order(samples.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    MlpGradient grad = MlpGradient::zeros(shape);
    std::vector<double> hidden(shape.hidden), output(shape.outputs), delta_hidden(shape.hidden);

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        Rng rng(derive_seed(cfg.seed, stream::bp_shuffle, epoch));
        shuffle(order, rng);
        for (std::size_t begin = 0; begin < order.size(); begin += cfg.batch_size) {
            const std::size_t end = std::min(begin + cfg.batch_size, order.size());
            std::fill(grad.w_ih.begin(), grad.w_ih.end(), 0.0);
            std::fill(grad.w_ho.begin(), grad.w_ho.end(), 0.0);
            std::fill(grad.a.begin(), grad.a.end(), 0.0);
            std::fill(grad.b.begin(), grad.b.end(), 0.0);
            for (std::size_t i = begin; i < end; ++i)
                detail::accumulate_gradient(params, samples[order[i]], grad, hidden, output,
                                            delta_hidden);
            const double step = cfg.learning_rate / static_cast<double>(end - begin);
            for (std::size_t i = 0; i < params.w_ih.size(); ++i) params.w_ih[i] -= step * grad.w_ih[i];
            for (std::size_t i = 0; i < params.w_ho.size(); ++i) params.w_ho[i] -= step * grad.w_ho[i];
            for (std::size_t i = 0; i < params.a.size(); ++i) params.a[i] -= step * grad.a[i];
            for (std::size_t i = 0; i < params.b.size(); ++i) params.b[i] -= step * grad.b[i];
        }
    }
    return params;
}

namespace detail {

inline void check_meta_dim(std::size_t got, std::size_t want, const char* what) {
    if (got != want)
        throw Error(ErrorKind::DimensionMismatch,
                    std::string(what) + ": vector length does not match normalization metadata");
}

inline double to_unit(double v, double lo, double hi) {
    return hi > lo ? (v - lo) / (hi - lo) : 0.5;
}

inline double from_unit(double v, double lo, double hi) { return lo + v * (hi - lo); }

}  // namespace detail

// Fits min-max ranges over both features and labels of a dataset.
inline NormalizationMeta fit_normalization(const std::vector<Sample>& samples) {
    if (samples.empty()) throw Error(ErrorKind::EmptyDataset, "cannot fit normalization on no data");
    const std::size_t n = samples.front().x.size();
    const std::size_t m = samples.front().y.size();
    NormalizationMeta meta;
    meta.x_min.assign(n, std::numeric_limits<double>::infinity());
    meta.x_max.assign(n, -std::numeric_limits<double>::infinity());
    meta.y_min.assign(m, std::numeric_limits<double>::infinity());
    meta.y_max.assign(m, -std::numeric_limits<double>::infinity());
    for (const auto& s : samples) {
        detail::check_meta_dim(s.x.size(), n, "fit_normalization");
        detail::check_meta_dim(s.y.size(), m, "fit_normalization");
        for (std::size_t i = 0; i < n; ++i) {
            meta.x_min[i] = std::min(meta.x_min[i], s.x[i]);
            meta.x_max[i] = std::max(meta.x_max[i], s.x[i]);
        }
        for (std::size_t k = 0; k < m; ++k) {
            meta.y_min[k] = std::min(meta.y_min[k], s.y[k]);
            meta.y_max[k] = std::max(meta.y_max[k], s.y[k]);
        }
    }
    return meta;
}

inline std::vector<double> normalize_features(const NormalizationMeta& meta,
                                              const std::vector<double>& x) {
    detail::check_meta_dim(x.size(), meta.x_min.size(), "normalize_features");
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = detail::to_unit(x[i], meta.x_min[i], meta.x_max[i]);
    return out;
}

inline std::vector<double> normalize_labels(const NormalizationMeta& meta,
                                            const std::vector<double>& y) {
    detail::check_meta_dim(y.size(), meta.y_min.size(), "normalize_labels");
    std::vector<double> out(y.size());
    for (std::size_t k = 0; k < y.size(); ++k)
        out[k] = detail::to_unit(y[k], meta.y_min[k], meta.y_max[k]);
    return out;
}

inline std::vector<double> denormalize_labels(const NormalizationMeta& meta,
                                              const std::vector<double>& y) {
    detail::check_meta_dim(y.size(), meta.y_min.size(), "denormalize_labels");
    std::vector<double> out(y.size());
    for (std::size_t k = 0; k < y.size(); ++k)
        out[k] = detail::from_unit(y[k], meta.y_min[k], meta.y_max[k]);
    return out;
}

// Returns a copy of the dataset with features mapped to [0, 1]; labels are
// passed through untouched (dataset files already store normalized labels).
inline std::vector<Sample> normalize_dataset_features(const NormalizationMeta& meta,
                                                      std::vector<Sample> samples) {
    for (auto& s : samples) s.x = normalize_features(meta, s.x);
    return samples;
}

}  // namespace gridssq
