#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace naide::nn {

enum class Activation { linear, positive, sigmoid };

std::string_view to_string(Activation activation);
Activation parse_activation(std::string_view name);

// Output-layer nonlinearities. softplus is the "positive" activation.
double softplus(double x);
double sigmoid(double x);

// Batches are column-major: one sample per column.
using Batch = Eigen::MatrixXd;

/// Dense ReLU network mapping a context vector to (slope, intercept).
///
/// `matrices[l]` has shape dims[l+1] x dims[l]; `biases[l]` has length
/// dims[l+1]. Hidden layers use ReLU, the last layer `output_activation`.
struct MlpWeights {
    std::vector<int> dims;
    std::vector<Eigen::MatrixXd> matrices;
    std::vector<Eigen::VectorXd> biases;
    Activation output_activation = Activation::positive;

    int input_width() const { return dims.front(); }
    std::size_t layer_count() const { return matrices.size(); }
    std::size_t parameter_count() const;

    // Flat parameter view: each layer's matrix in row-major order, then its bias.
    double& parameter(std::size_t index);
    double parameter(std::size_t index) const;

    // Throws ConfigError/ShapeError when dims and tensors disagree or a value is non-finite.
    void validate() const;
};

/// Parameter-shaped gradient container.
struct Gradients {
    std::vector<Eigen::MatrixXd> matrices;
    std::vector<Eigen::VectorXd> biases;

    static Gradients zeros_like(const MlpWeights& weights);
    double& parameter(std::size_t index);
    double parameter(std::size_t index) const;
    bool all_finite() const;
};

struct ForwardCache {
    Batch input;
    std::vector<Eigen::MatrixXd> pre_activations;
    std::vector<Eigen::MatrixXd> post_activations;
};

struct ForwardResult {
    // Row 0 = slope a, row 1 = intercept b; one column per sample.
    Eigen::Matrix<double, 2, Eigen::Dynamic> params;
    ForwardCache cache;
};

void validate_dims(const std::vector<int>& dims);

/// He-normal matrices (std = sqrt(2 / fan_in)), zero biases.
MlpWeights init_weights(const std::vector<int>& dims, Activation activation, std::uint64_t seed);

/// Layer widths [in, hidden..., 2].
std::vector<int> make_dims(int input_width, int hidden_layers, int hidden_width);

ForwardResult forward(const MlpWeights& weights, const Batch& inputs);

// Inference only; keeps no cache and is safe to call concurrently.
Eigen::Matrix<double, 2, Eigen::Dynamic> infer(const MlpWeights& weights, const Batch& inputs);

/// Gradient of the batch-mean loss. `grad_out` holds per-sample dL_i/d(a, b).
Gradients backward(const MlpWeights& weights, const ForwardCache& cache,
                   const Eigen::Matrix<double, 2, Eigen::Dynamic>& grad_out);

}  // namespace naide::nn
