// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
// Usage: naide_acceptance [criterion numbers...]   (default: all)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "naide/core/context.hpp"
#include "naide/core/denoise.hpp"
#include "naide/core/lemma.hpp"
#include "naide/core/objectives.hpp"
#include "naide/eval/image_io.hpp"
#include "naide/eval/metrics.hpp"
#include "naide/eval/noise.hpp"
#include "naide/eval/suite.hpp"
#include "naide/nn/checkpoint.hpp"
#include "naide/nn/gradient_check.hpp"
#include "naide/rng.hpp"
#include "naide/train/dataset.hpp"
#include "naide/train/trainer.hpp"
#include "support/synthetic.hpp"

namespace naide::acceptance {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

enum class Verdict { pass, fail, inconclusive };

struct Outcome {
    Verdict verdict;
    std::string detail;
};

Outcome check(bool ok, std::string detail) { return {ok ? Verdict::pass : Verdict::fail, std::move(detail)}; }

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "naide_acceptance";
    fs::create_directories(dir);
    return dir;
}

// Shared setup for the supervised / fine-tune comparisons.
struct SupervisedScenario {
    static constexpr int kSize = 64;
    static constexpr int kTrainImages = 5;
    static constexpr int kTestImages = 3;

    static train::TrainConfig config(double sigma_255) {
        train::TrainConfig c;
        c.k = 7;
        c.hidden = {64, 64, 64};
        c.activation = nn::Activation::positive;
        c.epochs = 80;
        c.batch_size = 128;
        c.lr0_supervised = 1e-3;
        c.lr_halve_every_supervised = 20;
        c.sigma_255 = sigma_255;
        c.seed = 7;
        return c;
    }

    static train::TrainConfig finetune_config(double sigma_255) {
        train::TrainConfig c = config(sigma_255);
        c.epochs = 30;
        c.lr0_finetune = 1e-4;
        c.lr_halve_every_finetune = 20;
        c.stop_rule = train::StopRule::heuristic;
        return c;
    }

    static std::vector<GrayImage> train_images() {
        std::vector<GrayImage> out;
        for (int i = 0; i < kTrainImages; ++i) out.push_back(testing::natural_like(kSize, kSize, 100 + i));
        return out;
    }

    static std::vector<GrayImage> test_images() {
        std::vector<GrayImage> out;
        for (int i = 0; i < kTestImages; ++i) out.push_back(testing::natural_like(kSize, kSize, 200 + i));
        return out;
    }

    static nn::MlpWeights train_at(double sigma_255) {
        const train::TrainConfig c = config(sigma_255);
        const auto images = train_images();
        const auto data = train::make_supervised_dataset(images, NoiseSpec(sigma_255), c.k, derive_seed(c.seed, 1));
        return train::train_supervised(data, c).weights;
    }
};

struct TestCase {
    GrayImage clean;
    GrayImage noisy;
};

std::vector<TestCase> corrupt_all(const std::vector<GrayImage>& clean, const NoiseSpec& spec, std::uint64_t seed) {
    std::vector<TestCase> out;
    for (std::size_t i = 0; i < clean.size(); ++i)
        out.push_back({clean[i], eval::add_gaussian_noise(clean[i], spec, derive_seed(seed, i))});
    return out;
}

double denoised_psnr(const nn::MlpWeights& w, const TestCase& t, int k) {
    return eval::psnr(t.clean, denoise_image(w, t.noisy, k));
}

// ---------------------------------------------------------------------------

Outcome lemma_unbiasedness() {
    const auto start = Clock::now();
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double sigmas[] = {5.0, 15.0, 25.0};
    int within = 0;
    double worst_z = 0.0;
    for (int t = 0; t < 50; ++t) {
        const double x = unit(rng);
        const double a = 2.0 * unit(rng);
        const double b = 2.0 * unit(rng);
        const NoiseSpec spec(sigmas[rng() % 3]);
        const LemmaCheck r = verify_lemma_monte_carlo(x, a, b, spec, 1'000'000, derive_seed(77, t));
        if (r.within(4.0)) ++within;
        worst_z = std::max(worst_z, r.z_score());
    }
    const double secs = seconds_since(start);
    return check(within >= 48 && secs < 60.0,
                 fmt::format("{}/50 within 4 SE (worst z {:.2f}), {:.1f} s", within, worst_z, secs));
}

Outcome gradient_correctness() {
    const auto start = Clock::now();
    const std::vector<int> dims = {24, 32, 32, 2};
    const nn::Activation acts[] = {nn::Activation::linear, nn::Activation::positive, nn::Activation::sigmoid};
    double worst = 0.0;
    int failures = 0;
    for (int t = 0; t < 100; ++t) {
        std::mt19937_64 rng(derive_seed(31, t));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const nn::MlpWeights w = nn::init_weights(dims, acts[t % 3], rng());
        const int batch = 8;
        const NoiseSpec spec(5.0 + 20.0 * unit(rng));
        Eigen::MatrixXd ctx(24, batch);
        Eigen::VectorXd z(batch), x(batch);
        for (Eigen::Index i = 0; i < ctx.size(); ++i) ctx.data()[i] = unit(rng) - kContextShift;
        std::normal_distribution<double> noise(0.0, spec.sigma_norm());
        for (int i = 0; i < batch; ++i) {
            x(i) = unit(rng);
            z(i) = x(i) + noise(rng);
        }
        const nn::Objective adaptive = [&](const nn::MlpWeights& wt, nn::Gradients* g) {
            return adaptive_batch_loss(wt, ctx, z, spec.variance_norm(), g);
        };
        const nn::Objective supervised = [&](const nn::MlpWeights& wt, nn::Gradients* g) {
            return supervised_batch_loss(wt, ctx, z, x, g);
        };
        for (const auto* fn : {&adaptive, &supervised}) {
            const double err = nn::gradient_check(w, *fn, 1e-6).max_relative_error;
            worst = std::max(worst, err);
            if (!(err < 1e-4)) ++failures;
        }
    }
    const double secs = seconds_since(start);
    return check(failures == 0 && secs < 60.0,
                 fmt::format("200 checks, {} above 1e-4, worst {:.2e}, {:.1f} s", failures, worst, secs));
}

Outcome hole_invariance() {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int k = 7;
    const nn::MlpWeights w = nn::init_weights({context_width(k), 32, 32, 2}, nn::Activation::positive, 5);
    int mismatches = 0;
    for (int t = 0; t < 1000; ++t) {
        // Mostly regular images, with some smaller than the window to stress the padding.
        const int width = t % 10 == 0 ? 1 + static_cast<int>(rng() % 6) : 8 + static_cast<int>(rng() % 40);
        const int height = t % 10 == 0 ? 1 + static_cast<int>(rng() % 6) : 8 + static_cast<int>(rng() % 40);
        std::vector<double> px(static_cast<std::size_t>(width * height));
        for (double& v : px) v = unit(rng);
        const int r = static_cast<int>(rng() % height), c = static_cast<int>(rng() % width);
        const auto params_at = [&](const std::vector<double>& pixels) {
            const GrayImage img(width, height, pixels, PixelKind::noisy);
            const auto ctx = extract_context(img, r, c, k);
            return nn::infer(w, Eigen::Map<const Eigen::MatrixXd>(ctx.data(), context_width(k), 1));
        };
        const auto before = params_at(px);
        px[static_cast<std::size_t>(r * width + c)] = 10.0 * (unit(rng) - 0.5);
        const auto after = params_at(px);
        if (before(0, 0) != after(0, 0) || before(1, 0) != after(1, 0)) ++mismatches;
    }
    return check(mismatches == 0, fmt::format("{} of 1000 pixels changed (a, b)", mismatches));
}

Outcome positivity() {
    // Positive activation: strictly positive outputs on random nets and inputs.
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double min_out = std::numeric_limits<double>::infinity();
    for (int t = 0; t < 50; ++t) {
        const nn::MlpWeights w = nn::init_weights({48, 64, 64, 2}, nn::Activation::positive, rng());
        Eigen::MatrixXd ctx(48, 200);
        for (Eigen::Index i = 0; i < ctx.size(); ++i) ctx.data()[i] = 4.0 * (unit(rng) - 0.5);
        min_out = std::min(min_out, nn::infer(w, ctx).minCoeff());
    }
    const bool positive = min_out > 0.0;

    // Linear activation, adaptive training from scratch on a textured image.
    const NoiseSpec spec(25.0);
    const GrayImage noisy = eval::add_gaussian_noise(testing::textured(64, 64, 3), spec, 4);
    train::TrainConfig c;
    c.k = 7;
    c.hidden = {64, 64};
    c.activation = nn::Activation::linear;
    c.epochs = 30;
    c.lr0_supervised = 1e-3;
    c.lr_halve_every_supervised = 10;
    c.seed = 8;
    const auto trained = train::adaptive_train_from_scratch(noisy, spec, c);
    const auto params = affine_map(trained.weights, noisy, c.k);
    const auto negatives = std::count_if(params.begin(), params.end(), [](const AffineParams& p) { return p.a < 0.0; });

    std::string detail = fmt::format("min positive-net output {:.3g}; linear run: {} of {} slopes negative", min_out,
                                     negatives, params.size());
    if (!positive) return {Verdict::fail, detail};
    if (negatives == 0) return {Verdict::inconclusive, detail + " (no negative slope observed)"};
    return {Verdict::pass, detail};
}

Outcome noisy_baseline() {
    const GrayImage clean = testing::natural_like(256, 256, 5);
    const GrayImage noisy = eval::add_gaussian_noise(clean, NoiseSpec(25.0), 6);
    const double p = eval::psnr(clean, noisy);
    return check(std::abs(p - 20.17) <= 0.15, fmt::format("{:.4f} dB (target 20.17 +/- 0.15)", p));
}

Outcome adaptive_from_scratch() {
    const auto start = Clock::now();
    const NoiseSpec spec(25.0);
    const GrayImage clean = testing::piecewise_constant(64, 64, 11);
    const GrayImage noisy = eval::add_gaussian_noise(clean, spec, 12);
    train::TrainConfig c;
    c.k = 7;
    c.hidden = {64, 64};
    c.activation = nn::Activation::positive;
    c.epochs = 50;
    c.batch_size = 128;
    c.lr0_supervised = 1e-3;
    c.lr_halve_every_supervised = 10;
    c.seed = 13;
    const auto result = train::adaptive_train_from_scratch(noisy, spec, c);
    const double before = eval::psnr(clean, noisy);
    const double after = eval::psnr(clean, denoise_image(result.weights, noisy, c.k));
    const double secs = seconds_since(start);
    return check(after >= before + 3.0 && secs < 300.0,
                 fmt::format("noisy {:.2f} dB -> denoised {:.2f} dB (+{:.2f}) after {} epochs, {:.1f} s", before,
                             after, after - before, result.report.epochs.size(), secs));
}

Outcome supervised_then_finetune() {
    const auto start = Clock::now();
    const NoiseSpec spec(25.0);
    const nn::MlpWeights supervised = SupervisedScenario::train_at(25.0);
    const auto tests = corrupt_all(SupervisedScenario::test_images(), spec, 300);
    const train::TrainConfig ft = SupervisedScenario::finetune_config(25.0);
    double sum_s = 0.0, sum_f = 0.0;
    int better = 0;
    std::string per_image;
    for (const TestCase& t : tests) {
        const double s = denoised_psnr(supervised, t, ft.k);
        const auto tuned = train::fine_tune(supervised, t.noisy, spec, ft);
        const double f = denoised_psnr(tuned.weights, t, ft.k);
        sum_s += s;
        sum_f += f;
        if (f > s) ++better;
        per_image += fmt::format(" {:.2f}->{:.2f}({}ep)", s, f, tuned.report.epochs.size());
    }
    const double n = static_cast<double>(tests.size());
    const double secs = seconds_since(start);
    return check(sum_f / n >= sum_s / n - 0.05 && better >= 2 && secs < 900.0,
                 fmt::format("mean {:.2f} -> {:.2f} dB, better on {}/3;{}; {:.1f} s", sum_s / n, sum_f / n, better,
                             per_image, secs));
}

Outcome sigma_mismatch() {
    const auto start = Clock::now();
    const NoiseSpec spec(25.0);
    const nn::MlpWeights matched = SupervisedScenario::train_at(25.0);
    const nn::MlpWeights mismatched = SupervisedScenario::train_at(15.0);
    const auto tests = corrupt_all(SupervisedScenario::test_images(), spec, 400);
    const train::TrainConfig ft = SupervisedScenario::finetune_config(25.0);
    bool all_better = true;
    double gap = 0.0, recovered = 0.0;
    std::string per_image;
    for (const TestCase& t : tests) {
        const double m = denoised_psnr(matched, t, ft.k);
        const double mm = denoised_psnr(mismatched, t, ft.k);
        const auto tuned = train::fine_tune(mismatched, t.noisy, spec, ft);
        const double f = denoised_psnr(tuned.weights, t, ft.k);
        all_better = all_better && f > mm;
        gap += m - mm;
        recovered += f - mm;
        per_image += fmt::format(" [matched {:.2f}, mismatched {:.2f}, fine-tuned {:.2f}]", m, mm, f);
    }
    const double fraction = gap > 0.0 ? recovered / gap : 0.0;
    const double secs = seconds_since(start);
    return check(all_better && gap > 0.0 && fraction >= 0.5 && secs < 900.0,
                 fmt::format("recovered {:.0f}% of a {:.2f} dB mean gap;{}; {:.1f} s", 100.0 * fraction,
                             gap / static_cast<double>(tests.size()), per_image, secs));
}

Outcome heuristic_stop() {
    // Noise-free flat image, so the fitted objective eventually drops below sigma^2.
    const NoiseSpec spec(25.0);
    const GrayImage noisy = GrayImage::filled(24, 24, 0.6, PixelKind::noisy);
    train::TrainConfig c;
    c.k = 3;
    c.hidden = {16, 16};
    c.activation = nn::Activation::positive;
    c.epochs = 40;
    c.batch_size = 64;
    c.lr0_finetune = 3e-3;
    c.lr_halve_every_finetune = 20;
    const nn::MlpWeights start = nn::init_weights(c.dims(), c.activation, 21);

    c.stop_rule = train::StopRule::none;
    const auto full = train::fine_tune(start, noisy, spec, c);
    c.stop_rule = train::StopRule::heuristic;
    const auto stopped = train::fine_tune(start, noisy, spec, c);

    const double threshold = spec.variance_norm();
    int first = 0;
    for (const auto& e : full.report.epochs)
        if (e.objective < threshold) {
            first = e.epoch;
            break;
        }
    const int stop_epoch = stopped.report.epochs.empty() ? 0 : stopped.report.epochs.back().epoch;
    const bool ok = full.report.initial_objective >= threshold && first > 1 &&
                    stopped.report.stop_reason == train::StopReason::heuristic && stop_epoch == first;
    return check(ok, fmt::format("objective {:.4g} -> first below sigma^2={:.4g} at epoch {}; stopped at epoch {} ({})",
                                 full.report.initial_objective, threshold, first, stop_epoch,
                                 train::to_string(stopped.report.stop_reason)));
}

Outcome reproducibility() {
    const fs::path dir = scratch_dir();
    const NoiseSpec spec(25.0);
    std::vector<GrayImage> clean = {testing::natural_like(32, 32, 1), testing::natural_like(32, 32, 2)};
    train::TrainConfig c;
    c.k = 5;
    c.hidden = {16, 16};
    c.epochs = 3;
    c.lr0_supervised = 1e-3;
    c.seed = 42;

    std::vector<std::string> mismatched;
    const auto run = [&](const std::string& tag) {
        const auto data = train::make_supervised_dataset(clean, spec, c.k, c.seed);
        const auto trained = train::train_supervised(data, c);
        nn::save_checkpoint({trained.weights, train::to_json(c)}, dir / ("ckpt_" + tag + ".json"));
        train::write_report_csv(trained.report, dir / ("report_" + tag + ".csv"));
        const GrayImage noisy = eval::add_gaussian_noise(testing::natural_like(32, 32, 3), spec, 9);
        const auto reloaded = nn::load_checkpoint(dir / ("ckpt_" + tag + ".json"));
        eval::save_image(denoise_image(reloaded.weights, noisy, c.k), dir / ("denoised_" + tag + ".ngf"));
        write_affine_csv(affine_map(reloaded.weights, noisy, c.k), noisy.width(), dir / ("affine_" + tag + ".csv"));
        const auto metrics = eval::evaluate_images({{"img", clean[0]}}, reloaded.weights, spec, c.k, {5, {}});
        eval::write_metric_csv(metrics, dir / ("metrics_" + tag + ".csv"));
    };
    run("a");
    run("b");
    for (const char* stem : {"ckpt_%.json", "report_%.csv", "denoised_%.ngf", "affine_%.csv", "metrics_%.csv"}) {
        std::string a(stem), b(stem);
        a.replace(a.find('%'), 1, "a");
        b.replace(b.find('%'), 1, "b");
        const std::string bytes = slurp(dir / a);
        if (bytes.empty() || bytes != slurp(dir / b)) mismatched.push_back(stem);
    }

    // NGF: arbitrary doubles, including values far outside [0, 1].
    std::mt19937_64 rng(17);
    std::vector<double> px(31 * 17);
    for (double& v : px) v = std::bit_cast<double>(rng() & ~(0x7ffULL << 52) | (static_cast<std::uint64_t>(rng() % 2046 + 1) << 52));
    eval::save_image(GrayImage(31, 17, px, PixelKind::noisy), dir / "rt.ngf");
    const GrayImage ngf = eval::load_image(dir / "rt.ngf");
    const bool ngf_ok = std::equal(px.begin(), px.end(), ngf.pixels().begin(),
                                   [](double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); });

    std::vector<double> levels(29 * 13);
    for (double& v : levels) v = static_cast<double>(rng() % 256) / 255.0;
    eval::save_image(GrayImage(29, 13, levels, PixelKind::clean), dir / "rt.pgm");
    const GrayImage pgm = eval::load_image(dir / "rt.pgm");
    const bool pgm_ok = std::equal(levels.begin(), levels.end(), pgm.pixels().begin());

    std::string detail = mismatched.empty() ? "checkpoint, report, NGF, affine and metric outputs identical"
                                            : "differing outputs:";
    for (const auto& m : mismatched) detail += " " + m;
    detail += fmt::format("; NGF round-trip {}, PGM round-trip {}", ngf_ok ? "lossless" : "LOSSY",
                          pgm_ok ? "lossless" : "LOSSY");
    return check(mismatched.empty() && ngf_ok && pgm_ok, detail);
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
};

}  // namespace
}  // namespace naide::acceptance

int main(int argc, char** argv) {
    using namespace naide::acceptance;
    const std::vector<Criterion> criteria = {
        {1, "estimated-loss unbiasedness", lemma_unbiasedness},
        {2, "gradient correctness", gradient_correctness},
        {3, "hole invariance", hole_invariance},
        {4, "output positivity", positivity},
        {5, "noisy-input baseline PSNR", noisy_baseline},
        {6, "adaptive training from scratch", adaptive_from_scratch},
        {7, "supervised + fine-tune", supervised_then_finetune},
        {8, "sigma-mismatch recovery", sigma_mismatch},
        {9, "heuristic stop rule", heuristic_stop},
        {10, "reproducibility and formats", reproducibility},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    int failed = 0;
    for (const Criterion& c : criteria) {
        if (!selected.empty() && !selected.count(c.id)) continue;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {Verdict::fail, std::string("exception: ") + e.what()};
        }
        const char* tag = o.verdict == Verdict::pass ? "PASS" : o.verdict == Verdict::fail ? "FAIL" : "INCONCLUSIVE";
        fmt::print("[{}] {:>2}. {}: {}\n", tag, c.id, c.name, o.detail);
        std::fflush(stdout);
        if (o.verdict == Verdict::fail) ++failed;
    }
    fmt::print("{} criteria failed\n", failed);
    return failed == 0 ? 0 : 1;
}
