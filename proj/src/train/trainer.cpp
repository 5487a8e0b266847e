#include "naide/train/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "naide/core/context.hpp"
#include "naide/core/objectives.hpp"
#include "naide/errors.hpp"
#include "naide/nn/adam.hpp"
#include "naide/rng.hpp"

namespace naide::train {

std::string_view to_string(StopReason reason) {
    return reason == StopReason::heuristic ? "heuristic" : "epoch_budget";
}

void write_report_csv(const TrainReport& report, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path.string() + " for writing");
    out << "epoch,objective,lr,steps\n";
    for (const EpochRecord& r : report.epochs)
        out << fmt::format("{},{},{},{}\n", r.epoch, r.objective, r.lr, r.steps);
    if (!out) throw ParseError("failed writing " + path.string());
}

namespace {

// Distinct seed streams so that init, data shuffling and epoch order never share draws.
constexpr std::uint64_t kEpochStream = 0xE90C0000;

using BatchLoss = std::function<double(std::span<const std::size_t>, const nn::MlpWeights&, nn::Gradients*)>;
using FullObjective = std::function<double(const nn::MlpWeights&)>;
using EpochHook = std::function<void(int epoch, double objective, const nn::MlpWeights&)>;

struct Schedule {
    double lr0;
    int halve_every;
    int epochs;
    int batch_size;
    std::uint64_t seed;
    std::optional<double> stop_below;
};

TrainReport run_epochs(nn::MlpWeights& weights, std::size_t n_samples, const BatchLoss& batch_loss,
                       const FullObjective& full_objective, const Schedule& schedule, const EpochHook& on_epoch) {
    if (n_samples == 0) throw ConfigError("no training samples");
    TrainReport report;
    report.initial_objective = full_objective(weights);
    if (!std::isfinite(report.initial_objective)) throw TrainingError("initial objective is not finite");

    nn::AdamState state = nn::AdamState::for_weights(weights);
    std::vector<std::size_t> order(n_samples);
    const auto batch = static_cast<std::size_t>(schedule.batch_size);
    nn::Gradients grads;

    for (int e = 0; e < schedule.epochs; ++e) {
        const auto start = std::chrono::steady_clock::now();
        const double lr = scheduled_lr(schedule.lr0, schedule.halve_every, e);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::mt19937_64 rng(derive_seed(schedule.seed, kEpochStream + static_cast<std::uint64_t>(e)));
        std::shuffle(order.begin(), order.end(), rng);

        std::size_t step = 0;
        for (std::size_t first = 0; first < n_samples; first += batch, ++step) {
            const std::size_t count = std::min(batch, n_samples - first);
            const double loss = batch_loss(std::span<const std::size_t>(order).subspan(first, count), weights, &grads);
            if (!std::isfinite(loss))
                throw TrainingError(fmt::format("non-finite loss at epoch {}, batch {}", e + 1, step + 1));
            try {
                nn::adam_step(weights, grads, state, lr);
            } catch (const TrainingError& err) {
                throw TrainingError(fmt::format("epoch {}, batch {}: {}", e + 1, step + 1, err.what()));
            }
        }

        const double objective = full_objective(weights);
        if (!std::isfinite(objective)) throw TrainingError(fmt::format("non-finite objective after epoch {}", e + 1));
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        report.epochs.push_back({e + 1, objective, lr, elapsed.count(), step});
        if (on_epoch) on_epoch(e + 1, objective, weights);
        if (schedule.stop_below && objective < *schedule.stop_below) {
            report.stop_reason = StopReason::heuristic;
            break;
        }
    }
    return report;
}

BatchLoss adaptive_batches(const GrayImage& noisy, int k, double variance) {
    return [&noisy, k, variance](std::span<const std::size_t> pixels, const nn::MlpWeights& w, nn::Gradients* g) {
        const int width = context_width(k);
        const auto n = static_cast<Eigen::Index>(pixels.size());
        Eigen::MatrixXd contexts(width, n);
        Eigen::VectorXd z(n);
        const auto cols = static_cast<std::size_t>(noisy.width());
        for (Eigen::Index j = 0; j < n; ++j) {
            const std::size_t p = pixels[static_cast<std::size_t>(j)];
            extract_context(noisy, static_cast<int>(p / cols), static_cast<int>(p % cols), k,
                            std::span<double>(contexts.col(j).data(), static_cast<std::size_t>(width)));
            z(j) = noisy.pixels()[p];
        }
        return adaptive_batch_loss(w, contexts, z, variance, g);
    };
}

void check_noisy(const GrayImage& noisy) {
    if (noisy.size() == 0) throw ConfigError("empty noisy image");
}

}  // namespace

TrainResult train_supervised(const SupervisedDataset& dataset, const TrainConfig& config) {
    config.validate();
    if (dataset.size() == 0) throw ConfigError("supervised dataset is empty");
    if (dataset.k() != config.k)
        throw ConfigError(fmt::format("dataset context size k={} does not match config k={}", dataset.k(), config.k));

    TrainResult result{nn::init_weights(config.dims(), config.activation, config.seed), {}};

    const BatchLoss batch_loss = [&dataset](std::span<const std::size_t> idx, const nn::MlpWeights& w,
                                            nn::Gradients* g) {
        Eigen::MatrixXd contexts;
        Eigen::VectorXd z, x;
        dataset.fill_batch(idx, contexts, z, x);
        return supervised_batch_loss(w, contexts, z, x, g);
    };
    const FullObjective full = [&dataset](const nn::MlpWeights& w) {
        std::vector<std::size_t> idx;
        double total = 0.0;
        for (std::size_t first = 0; first < dataset.size(); first += kSweepChunk) {
            const std::size_t count = std::min(kSweepChunk, dataset.size() - first);
            idx.resize(count);
            std::iota(idx.begin(), idx.end(), first);
            Eigen::MatrixXd contexts;
            Eigen::VectorXd z, x;
            dataset.fill_batch(idx, contexts, z, x);
            total += supervised_batch_loss(w, contexts, z, x, nullptr) * static_cast<double>(count);
        }
        return total / static_cast<double>(dataset.size());
    };

    const Schedule schedule{config.lr0_supervised, config.lr_halve_every_supervised, config.epochs, config.batch_size,
                            config.seed, std::nullopt};
    result.report = run_epochs(result.weights, dataset.size(), batch_loss, full, schedule, nullptr);
    return result;
}

TrainResult adaptive_train_from_scratch(const GrayImage& noisy, const NoiseSpec& spec, const TrainConfig& config) {
    config.validate();
    check_noisy(noisy);
    TrainResult result{nn::init_weights(config.dims(), config.activation, config.seed), {}};
    const double variance = spec.variance_norm();
    const int k = config.k;
    const FullObjective full = [&](const nn::MlpWeights& w) { return adaptive_objective(w, noisy, spec, k); };
    const Schedule schedule{config.lr0_supervised, config.lr_halve_every_supervised, config.epochs, config.batch_size,
                            config.seed, std::nullopt};
    result.report = run_epochs(result.weights, noisy.size(), adaptive_batches(noisy, k, variance), full, schedule,
                               nullptr);
    return result;
}

FineTuneResult fine_tune(const nn::MlpWeights& weights, const GrayImage& noisy, const NoiseSpec& spec,
                         const TrainConfig& config) {
    config.validate();
    check_noisy(noisy);
    weights.validate();
    check_network_matches_k(weights, config.k);

    FineTuneResult result;
    result.weights = weights;
    const double variance = spec.variance_norm();
    const int k = config.k;
    const FullObjective full = [&](const nn::MlpWeights& w) { return adaptive_objective(w, noisy, spec, k); };

    result.best_objective = HUGE_VAL;
    const EpochHook track_best = [&](int epoch, double objective, const nn::MlpWeights& w) {
        if (objective < result.best_objective) {
            result.best_objective = objective;
            result.best_epoch = epoch;
            result.best_weights = w;
        }
    };

    std::optional<double> stop_below;
    if (config.stop_rule == StopRule::heuristic) stop_below = variance;
    const Schedule schedule{config.lr0_finetune, config.lr_halve_every_finetune, config.epochs, config.batch_size,
                            config.seed, stop_below};
    result.report =
        run_epochs(result.weights, noisy.size(), adaptive_batches(noisy, k, variance), full, schedule, track_best);

    if (result.report.initial_objective <= result.best_objective) {
        result.best_objective = result.report.initial_objective;
        result.best_epoch = 0;
        result.best_weights = weights;
    }
    return result;
}

}  // namespace naide::train
