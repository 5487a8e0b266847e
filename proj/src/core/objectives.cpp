#include "naide/core/objectives.hpp"

#include <algorithm>
#include <string>

#include "naide/core/context.hpp"
#include "naide/core/estimated_loss.hpp"
#include "naide/errors.hpp"

namespace naide {

void check_network_matches_k(const nn::MlpWeights& weights, int k) {
    validate_context_size(k);
    if (weights.input_width() != context_width(k))
        throw ConfigError("network input width " + std::to_string(weights.input_width()) +
                          " does not match context size k=" + std::to_string(k) + " (expects " +
                          std::to_string(context_width(k)) + ")");
}

double adaptive_batch_loss(const nn::MlpWeights& weights, const Eigen::MatrixXd& contexts, const Eigen::VectorXd& z,
                           double variance_norm, nn::Gradients* grads) {
    if (z.size() != contexts.cols()) throw ShapeError("noisy values and contexts disagree on batch size");
    const Eigen::Index n = contexts.cols();

    if (grads == nullptr) {
        const auto params = nn::infer(weights, contexts);
        double total = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) total += estimated_loss(z(i), params(0, i), params(1, i), variance_norm);
        return total / static_cast<double>(n);
    }

    nn::ForwardResult fwd = nn::forward(weights, contexts);
    Eigen::Matrix<double, 2, Eigen::Dynamic> grad_out(2, n);
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double a = fwd.params(0, i);
        const double b = fwd.params(1, i);
        total += estimated_loss(z(i), a, b, variance_norm);
        const LossGradient g = estimated_loss_grad(z(i), a, b, variance_norm);
        grad_out(0, i) = g.d_a;
        grad_out(1, i) = g.d_b;
    }
    *grads = nn::backward(weights, fwd.cache, grad_out);
    return total / static_cast<double>(n);
}

double supervised_batch_loss(const nn::MlpWeights& weights, const Eigen::MatrixXd& contexts,
                             const Eigen::VectorXd& z, const Eigen::VectorXd& x, nn::Gradients* grads) {
    if (z.size() != contexts.cols() || x.size() != contexts.cols())
        throw ShapeError("targets and contexts disagree on batch size");
    const Eigen::Index n = contexts.cols();

    if (grads == nullptr) {
        const auto params = nn::infer(weights, contexts);
        double total = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double r = x(i) - (params(0, i) * z(i) + params(1, i));
            total += r * r;
        }
        return total / static_cast<double>(n);
    }

    nn::ForwardResult fwd = nn::forward(weights, contexts);
    Eigen::Matrix<double, 2, Eigen::Dynamic> grad_out(2, n);
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double r = fwd.params(0, i) * z(i) + fwd.params(1, i) - x(i);
        total += r * r;
        grad_out(0, i) = 2.0 * r * z(i);
        grad_out(1, i) = 2.0 * r;
    }
    *grads = nn::backward(weights, fwd.cache, grad_out);
    return total / static_cast<double>(n);
}

double adaptive_objective(const nn::MlpWeights& weights, const GrayImage& noisy, const NoiseSpec& spec, int k) {
    check_network_matches_k(weights, k);
    const double variance = spec.variance_norm();
    const auto pixels = noisy.pixels();
    double total = 0.0;
    for (std::size_t first = 0; first < noisy.size(); first += kSweepChunk) {
        const std::size_t count = std::min(kSweepChunk, noisy.size() - first);
        const auto params = nn::infer(weights, extract_contexts(noisy, k, first, count));
        for (std::size_t j = 0; j < count; ++j) {
            const auto col = static_cast<Eigen::Index>(j);
            total += estimated_loss(pixels[first + j], params(0, col), params(1, col), variance);
        }
    }
    return total / static_cast<double>(noisy.size());
}

double supervised_objective(const nn::MlpWeights& weights, std::span<const SupervisedSample> samples) {
    if (samples.empty()) throw ShapeError("empty sample batch");
    const auto width = static_cast<std::size_t>(weights.input_width());
    double total = 0.0;
    for (std::size_t first = 0; first < samples.size(); first += kSweepChunk) {
        const std::size_t count = std::min(kSweepChunk, samples.size() - first);
        Eigen::MatrixXd contexts(weights.input_width(), static_cast<Eigen::Index>(count));
        for (std::size_t j = 0; j < count; ++j) {
            const SupervisedSample& s = samples[first + j];
            if (s.context.size() != width)
                throw ShapeError("sample context length " + std::to_string(s.context.size()) +
                                 " does not match network input " + std::to_string(width));
            contexts.col(static_cast<Eigen::Index>(j)) = Eigen::Map<const Eigen::VectorXd>(s.context.data(),
                                                                                           weights.input_width());
        }
        const auto params = nn::infer(weights, contexts);
        for (std::size_t j = 0; j < count; ++j) {
            const SupervisedSample& s = samples[first + j];
            const auto col = static_cast<Eigen::Index>(j);
            const double r = s.x - (params(0, col) * s.z + params(1, col));
            total += r * r;
        }
    }
    return total / static_cast<double>(samples.size());
}

}  // namespace naide
