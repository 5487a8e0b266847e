#include "naide/nn/mlp.hpp"

#include <cmath>
#include <random>

#include "naide/errors.hpp"

namespace naide::nn {

std::string_view to_string(Activation activation) {
    switch (activation) {
        case Activation::linear: return "linear";
        case Activation::positive: return "positive";
        case Activation::sigmoid: return "sigmoid";
    }
    return "unknown";
}

Activation parse_activation(std::string_view name) {
    if (name == "linear") return Activation::linear;
    if (name == "positive") return Activation::positive;
    if (name == "sigmoid") return Activation::sigmoid;
    throw ConfigError("unknown activation '" + std::string(name) + "' (expected linear, positive or sigmoid)");
}

double softplus(double x) {
    if (x > 30.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

namespace {

double activate(Activation activation, double x) {
    switch (activation) {
        case Activation::linear: return x;
        case Activation::positive: return softplus(x);
        case Activation::sigmoid: return sigmoid(x);
    }
    return x;
}

// Derivative in terms of the pre-activation.
double activate_derivative(Activation activation, double x) {
    switch (activation) {
        case Activation::linear: return 1.0;
        case Activation::positive: return sigmoid(x);
        case Activation::sigmoid: {
            const double s = sigmoid(x);
            return s * (1.0 - s);
        }
    }
    return 1.0;
}

template <typename Matrices, typename Vectors>
auto& locate(Matrices& matrices, Vectors& biases, std::size_t index) {
    for (std::size_t l = 0; l < matrices.size(); ++l) {
        auto& m = matrices[l];
        const auto weight_count = static_cast<std::size_t>(m.size());
        if (index < weight_count) {
            const auto cols = static_cast<std::size_t>(m.cols());
            return m(static_cast<Eigen::Index>(index / cols), static_cast<Eigen::Index>(index % cols));
        }
        index -= weight_count;
        auto& b = biases[l];
        if (index < static_cast<std::size_t>(b.size())) return b(static_cast<Eigen::Index>(index));
        index -= static_cast<std::size_t>(b.size());
    }
    throw IndexError("parameter index out of range");
}

}  // namespace

std::size_t MlpWeights::parameter_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < matrices.size(); ++l) n += matrices[l].size() + biases[l].size();
    return n;
}

double& MlpWeights::parameter(std::size_t index) { return locate(matrices, biases, index); }
double MlpWeights::parameter(std::size_t index) const { return locate(matrices, biases, index); }

void MlpWeights::validate() const {
    validate_dims(dims);
    if (dims.back() != 2) throw ConfigError("last layer width must be 2 (slope, intercept)");
    if (matrices.size() != dims.size() - 1 || biases.size() != dims.size() - 1)
        throw ShapeError("layer count does not match dims");
    for (std::size_t l = 0; l < matrices.size(); ++l) {
        if (matrices[l].rows() != dims[l + 1] || matrices[l].cols() != dims[l])
            throw ShapeError("matrix " + std::to_string(l) + " has wrong shape");
        if (biases[l].size() != dims[l + 1]) throw ShapeError("bias " + std::to_string(l) + " has wrong length");
        if (!matrices[l].allFinite() || !biases[l].allFinite())
            throw ConfigError("layer " + std::to_string(l) + " has non-finite parameters");
    }
}

Gradients Gradients::zeros_like(const MlpWeights& weights) {
    Gradients g;
    for (std::size_t l = 0; l < weights.layer_count(); ++l) {
        g.matrices.push_back(Eigen::MatrixXd::Zero(weights.matrices[l].rows(), weights.matrices[l].cols()));
        g.biases.push_back(Eigen::VectorXd::Zero(weights.biases[l].size()));
    }
    return g;
}

double& Gradients::parameter(std::size_t index) { return locate(matrices, biases, index); }
double Gradients::parameter(std::size_t index) const { return locate(matrices, biases, index); }

bool Gradients::all_finite() const {
    for (std::size_t l = 0; l < matrices.size(); ++l)
        if (!matrices[l].allFinite() || !biases[l].allFinite()) return false;
    return true;
}

void validate_dims(const std::vector<int>& dims) {
    if (dims.size() < 2) throw ConfigError("dims must list at least an input and an output width");
    for (int d : dims)
        if (d <= 0) throw ConfigError("layer widths must be positive");
}

MlpWeights init_weights(const std::vector<int>& dims, Activation activation, std::uint64_t seed) {
    validate_dims(dims);
    if (dims.back() != 2) throw ConfigError("last layer width must be 2 (slope, intercept)");

    MlpWeights w;
    w.dims = dims;
    w.output_activation = activation;
    std::mt19937_64 rng(seed);
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        std::normal_distribution<double> normal(0.0, std::sqrt(2.0 / dims[l]));
        Eigen::MatrixXd m(dims[l + 1], dims[l]);
        // Row-major fill so the draw order matches the checkpoint layout.
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = normal(rng);
        w.matrices.push_back(std::move(m));
        w.biases.push_back(Eigen::VectorXd::Zero(dims[l + 1]));
    }
    return w;
}

std::vector<int> make_dims(int input_width, int hidden_layers, int hidden_width) {
    std::vector<int> dims{input_width};
    for (int i = 0; i < hidden_layers; ++i) dims.push_back(hidden_width);
    dims.push_back(2);
    return dims;
}

namespace {

void check_input(const MlpWeights& weights, const Batch& inputs) {
    if (inputs.rows() != weights.input_width())
        throw ShapeError("input width " + std::to_string(inputs.rows()) + " does not match network input " +
                         std::to_string(weights.input_width()));
    if (inputs.cols() == 0) throw ShapeError("empty batch");
}

}  // namespace

ForwardResult forward(const MlpWeights& weights, const Batch& inputs) {
    check_input(weights, inputs);
    ForwardResult result;
    ForwardCache& cache = result.cache;
    cache.input = inputs;
    const std::size_t layers = weights.layer_count();
    cache.pre_activations.resize(layers);
    cache.post_activations.resize(layers);

    const Eigen::MatrixXd* x = &cache.input;
    for (std::size_t l = 0; l < layers; ++l) {
        Eigen::MatrixXd& pre = cache.pre_activations[l];
        pre.noalias() = weights.matrices[l] * (*x);
        pre.colwise() += weights.biases[l];
        if (l + 1 < layers) {
            cache.post_activations[l] = pre.cwiseMax(0.0);
        } else {
            const Activation act = weights.output_activation;
            cache.post_activations[l] = pre.unaryExpr([act](double v) { return activate(act, v); });
        }
        x = &cache.post_activations[l];
    }
    result.params = cache.post_activations.back();
    return result;
}

Eigen::Matrix<double, 2, Eigen::Dynamic> infer(const MlpWeights& weights, const Batch& inputs) {
    check_input(weights, inputs);
    const std::size_t layers = weights.layer_count();
    Eigen::MatrixXd x = inputs;
    for (std::size_t l = 0; l < layers; ++l) {
        Eigen::MatrixXd pre = weights.matrices[l] * x;
        pre.colwise() += weights.biases[l];
        if (l + 1 < layers) {
            x = pre.cwiseMax(0.0);
        } else {
            const Activation act = weights.output_activation;
            x = pre.unaryExpr([act](double v) { return activate(act, v); });
        }
    }
    return x;
}

Gradients backward(const MlpWeights& weights, const ForwardCache& cache,
                   const Eigen::Matrix<double, 2, Eigen::Dynamic>& grad_out) {
    const std::size_t layers = weights.layer_count();
    const Eigen::Index batch = cache.input.cols();
    if (cache.pre_activations.size() != layers || cache.post_activations.size() != layers)
        throw ShapeError("forward cache does not match network depth");
    if (grad_out.cols() != batch)
        throw ShapeError("grad_out batch " + std::to_string(grad_out.cols()) + " does not match cache batch " +
                         std::to_string(batch));

    Gradients grads;
    grads.matrices.resize(layers);
    grads.biases.resize(layers);
    const double inv_batch = 1.0 / static_cast<double>(batch);

    const Activation act = weights.output_activation;
    Eigen::MatrixXd delta =
        grad_out.cwiseProduct(cache.pre_activations.back().unaryExpr([act](double v) {
            return activate_derivative(act, v);
        })) * inv_batch;

    for (std::size_t l = layers; l-- > 0;) {
        const Eigen::MatrixXd& layer_input = (l == 0) ? cache.input : cache.post_activations[l - 1];
        grads.matrices[l].noalias() = delta * layer_input.transpose();
        grads.biases[l] = delta.rowwise().sum();
        if (l == 0) break;
        Eigen::MatrixXd upstream = weights.matrices[l].transpose() * delta;
        // ReLU subgradient at exactly 0 is 0.
        delta = upstream.cwiseProduct(
            cache.pre_activations[l - 1].unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; }));
    }
    return grads;
}

}  // namespace naide::nn
