// naide: command-line front end for training, fine-tuning and evaluating the
// neural affine denoiser.
//
// Exit codes: 0 success, 1 usage/configuration error, 2 data error,
// 3 numeric failure (non-finite loss or a failed check).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "naide/core/context.hpp"
#include "naide/core/denoise.hpp"
#include "naide/core/lemma.hpp"
#include "naide/core/objectives.hpp"
#include "naide/errors.hpp"
#include "naide/eval/image_io.hpp"
#include "naide/eval/metrics.hpp"
#include "naide/eval/noise.hpp"
#include "naide/eval/suite.hpp"
#include "naide/nn/checkpoint.hpp"
#include "naide/nn/gradient_check.hpp"
#include "naide/rng.hpp"
#include "naide/train/config.hpp"
#include "naide/train/dataset.hpp"
#include "naide/train/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace naide::cli {
namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

// Raised when a check completes but its result is out of tolerance.
struct CheckFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Training flags shared by train, finetune and eval. Unset flags leave the
// value from the config file (or checkpoint) untouched.
struct TrainFlags {
    std::string config_path;
    std::optional<double> sigma;
    std::optional<int> k;
    std::optional<std::string> activation;
    std::optional<std::string> hidden;
    std::optional<int> epochs;
    std::optional<int> batch_size;
    std::optional<double> lr;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> stop;

    void add_to(CLI::App& cmd, bool with_architecture) {
        cmd.add_option("--config", config_path, "JSON file with TrainConfig keys")->check(CLI::ExistingFile);
        cmd.add_option("--sigma", sigma, "Noise standard deviation in 8-bit units");
        cmd.add_option("--epochs", epochs, "Epoch budget");
        cmd.add_option("--batch-size", batch_size, "Mini-batch size");
        cmd.add_option("--lr", lr, "Initial learning rate for this stage");
        cmd.add_option("--seed", seed, "Master seed");
        cmd.add_option("--stop", stop, "Fine-tuning stop rule")->check(CLI::IsMember({"heuristic", "none"}));
        if (with_architecture) {
            cmd.add_option("--k", k, "Context size (odd, >= 3)");
            cmd.add_option("--activation", activation, "Output activation")
                ->check(CLI::IsMember({"linear", "positive", "sigmoid"}));
            cmd.add_option("--hidden", hidden, "Comma-separated hidden widths, e.g. 64,64,64");
        }
    }
};

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw ConfigError("bad integer list '" + text + "'");
        }
    }
    if (out.empty()) throw ConfigError("empty integer list");
    return out;
}

json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_json(const json& doc, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path.string() + " for writing");
    out << doc.dump(1) << '\n';
    if (!out) throw ParseError("failed writing " + path.string());
}

// --lr overrides lr0_finetune for fine-tuning stages, lr0_supervised otherwise.
train::TrainConfig resolve_config(train::TrainConfig base, const TrainFlags& f, bool finetune_stage) {
    if (!f.config_path.empty()) base = train::apply_json(base, read_json(f.config_path));
    if (f.sigma) base.sigma_255 = *f.sigma;
    if (f.k) base.k = *f.k;
    if (f.activation) base.activation = nn::parse_activation(*f.activation);
    if (f.hidden) base.hidden = parse_int_list(*f.hidden);
    if (f.epochs) base.epochs = *f.epochs;
    if (f.batch_size) base.batch_size = *f.batch_size;
    if (f.lr) (finetune_stage ? base.lr0_finetune : base.lr0_supervised) = *f.lr;
    if (f.seed) base.seed = *f.seed;
    if (f.stop) base.stop_rule = train::parse_stop_rule(*f.stop);
    base.validate();
    return base;
}

fs::path sidecar(const fs::path& output, const std::string& suffix) {
    fs::path p = output;
    p += suffix;
    return p;
}

void echo_config(const fs::path& output, json doc) {
    write_json(doc, sidecar(output, ".config.json"));
}

GrayImage with_kind(const GrayImage& img, PixelKind kind) {
    if (img.kind() == kind) return img;
    return GrayImage(img.width(), img.height(), std::vector<double>(img.pixels().begin(), img.pixels().end()), kind);
}

GrayImage load_noisy(const fs::path& path) { return with_kind(eval::load_image(path), PixelKind::noisy); }

// Expands directories into their image files (sorted by name).
std::vector<fs::path> collect_images(const std::vector<std::string>& inputs) {
    std::vector<fs::path> files;
    for (const std::string& in : inputs) {
        const fs::path p(in);
        if (fs::is_directory(p)) {
            std::vector<fs::path> found;
            for (const auto& entry : fs::directory_iterator(p))
                if (entry.is_regular_file() && eval::is_image_path(entry.path())) found.push_back(entry.path());
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else {
            if (!fs::exists(p)) throw ParseError("no such file: " + p.string());
            files.push_back(p);
        }
    }
    if (files.empty()) throw ParseError("no input images found");
    return files;
}

int checkpoint_k(const nn::Checkpoint& ckpt) { return context_size_for_width(ckpt.weights.input_width()); }

// Starting config for stages that continue from a checkpoint.
train::TrainConfig config_from_checkpoint(const nn::Checkpoint& ckpt) {
    train::TrainConfig base;
    if (!ckpt.train_config.empty()) base = train::apply_json(base, ckpt.train_config);
    base.k = checkpoint_k(ckpt);
    const auto& dims = ckpt.weights.dims;
    base.hidden.assign(dims.begin() + 1, dims.end() - 1);
    base.activation = ckpt.weights.output_activation;
    return base;
}

void require_k(const std::optional<int>& requested, int actual) {
    if (requested && *requested != actual)
        throw ConfigError(fmt::format("--k {} does not match the checkpoint (k={})", *requested, actual));
}

void print_report(const train::TrainReport& report) {
    fmt::print("initial objective {}\n", report.initial_objective);
    for (const auto& e : report.epochs)
        fmt::print("epoch {:>3}  objective {:.8g}  lr {:.3g}  {:.2f}s\n", e.epoch, e.objective, e.lr, e.seconds);
    fmt::print("stop reason: {}\n", train::to_string(report.stop_reason));
}

// ---- corrupt -------------------------------------------------------------

struct CorruptArgs {
    std::string input;
    std::string output;
    double sigma = 25.0;
    std::uint64_t seed = 0;
};

int run_corrupt(const CorruptArgs& args) {
    const NoiseSpec spec(args.sigma);
    const fs::path out(args.output);
    if (out.extension() != ".ngf") throw ConfigError("corrupt output must end in .ngf");
    const GrayImage clean = with_kind(eval::load_image(args.input), PixelKind::clean);
    const GrayImage noisy = eval::add_gaussian_noise(clean, spec, args.seed);
    eval::save_image(noisy, out);
    fs::path preview = out;
    preview.replace_extension(".pgm");
    eval::save_image(noisy, preview);
    echo_config(out, {{"command", "corrupt"}, {"input", args.input}, {"sigma_255", args.sigma}, {"seed", args.seed}});
    fmt::print("wrote {} and {} (noisy PSNR {:.4f} dB)\n", out.string(), preview.string(), eval::psnr(clean, noisy));
    return 0;
}

// ---- train ---------------------------------------------------------------

struct TrainArgs {
    std::string mode = "supervised";
    std::vector<std::string> clean;
    std::string noisy;
    std::string output;
    std::string report;
    TrainFlags flags;
};

int run_train(const TrainArgs& args) {
    const train::TrainConfig config = resolve_config({}, args.flags, false);
    const NoiseSpec spec(config.sigma_255);
    train::TrainResult result;
    json echo = {{"command", "train"}, {"mode", args.mode}};
    if (args.mode == "supervised") {
        if (args.clean.empty()) throw ConfigError("supervised training needs --clean");
        std::vector<GrayImage> images;
        json names = json::array();
        for (const fs::path& p : collect_images(args.clean)) {
            images.push_back(with_kind(eval::load_image(p), PixelKind::clean));
            names.push_back(p.string());
        }
        const auto dataset = train::make_supervised_dataset(images, spec, config.k, config.seed);
        fmt::print("supervised training on {} images, {} samples\n", images.size(), dataset.size());
        result = train::train_supervised(dataset, config);
        echo["clean"] = names;
    } else {
        if (args.noisy.empty()) throw ConfigError("adaptive training needs --noisy");
        result = train::adaptive_train_from_scratch(load_noisy(args.noisy), spec, config);
        echo["noisy"] = args.noisy;
    }
    print_report(result.report);
    const fs::path out(args.output);
    nn::save_checkpoint({result.weights, train::to_json(config)}, out);
    if (!args.report.empty()) train::write_report_csv(result.report, args.report);
    echo["train_config"] = train::to_json(config);
    echo_config(out, echo);
    return 0;
}

// ---- finetune ------------------------------------------------------------

struct FinetuneArgs {
    std::string checkpoint;
    std::string noisy;
    std::string output;
    std::string report;
    std::string denoised;
    bool keep_best = false;
    TrainFlags flags;
};

int run_finetune(const FinetuneArgs& args) {
    const nn::Checkpoint ckpt = nn::load_checkpoint(args.checkpoint);
    require_k(args.flags.k, checkpoint_k(ckpt));
    const train::TrainConfig config = resolve_config(config_from_checkpoint(ckpt), args.flags, true);
    const NoiseSpec spec(config.sigma_255);
    const GrayImage noisy = load_noisy(args.noisy);
    const train::FineTuneResult result = train::fine_tune(ckpt.weights, noisy, spec, config);
    print_report(result.report);
    fmt::print("best objective {} at epoch {}\n", result.best_objective, result.best_epoch);

    const nn::MlpWeights& chosen = args.keep_best ? result.best_weights : result.weights;
    const fs::path out(args.output);
    nn::save_checkpoint({chosen, train::to_json(config)}, out);
    if (!args.report.empty()) train::write_report_csv(result.report, args.report);
    if (!args.denoised.empty()) eval::save_image(denoise_image(chosen, noisy, config.k), args.denoised);
    echo_config(out, {{"command", "finetune"},
                      {"checkpoint", args.checkpoint},
                      {"noisy", args.noisy},
                      {"keep_best", args.keep_best},
                      {"stop_reason", train::to_string(result.report.stop_reason)},
                      {"epochs_run", result.report.epochs.size()},
                      {"initial_objective", result.report.initial_objective},
                      {"final_objective", result.report.final_objective()},
                      {"best_objective", result.best_objective},
                      {"best_epoch", result.best_epoch},
                      {"train_config", train::to_json(config)}});
    return 0;
}

// ---- denoise -------------------------------------------------------------

struct DenoiseArgs {
    std::string checkpoint;
    std::string noisy;
    std::string output;
    std::string dump_affine;
    std::optional<int> k;
};

int run_denoise(const DenoiseArgs& args) {
    const nn::Checkpoint ckpt = nn::load_checkpoint(args.checkpoint);
    const int k = checkpoint_k(ckpt);
    require_k(args.k, k);
    const GrayImage noisy = load_noisy(args.noisy);
    const fs::path out(args.output);
    eval::save_image(denoise_image(ckpt.weights, noisy, k), out);
    if (!args.dump_affine.empty())
        write_affine_csv(affine_map(ckpt.weights, noisy, k), noisy.width(), args.dump_affine);
    echo_config(out, {{"command", "denoise"},
                      {"checkpoint", args.checkpoint},
                      {"noisy", args.noisy},
                      {"k", k},
                      {"train_config", ckpt.train_config}});
    fmt::print("wrote {}\n", out.string());
    return 0;
}

// ---- eval ----------------------------------------------------------------

struct EvalArgs {
    std::string clean_dir;
    std::string checkpoint;
    std::string output;
    bool finetune = false;
    TrainFlags flags;
};

int run_eval(const EvalArgs& args) {
    const nn::Checkpoint ckpt = nn::load_checkpoint(args.checkpoint);
    const int k = checkpoint_k(ckpt);
    require_k(args.flags.k, k);
    const train::TrainConfig config = resolve_config(config_from_checkpoint(ckpt), args.flags, true);
    const NoiseSpec spec(config.sigma_255);
    eval::SuiteOptions options;
    options.master_seed = config.seed;
    if (args.finetune) options.fine_tune = config;
    const eval::MetricReport report = eval::evaluate_suite(args.clean_dir, ckpt.weights, spec, k, options);
    for (const auto& m : report.images) fmt::print("{:<24} {:.4f} dB\n", m.image, m.psnr_db);
    fmt::print("mean PSNR {:.4f} dB (std {:.4f}) over {} images\n", report.mean_psnr_db, report.std_psnr_db,
               report.images.size());
    const fs::path out(args.output);
    eval::write_metric_csv(report, out);
    echo_config(out, {{"command", "eval"},
                      {"clean_dir", args.clean_dir},
                      {"checkpoint", args.checkpoint},
                      {"finetune", args.finetune},
                      {"train_config", train::to_json(config)}});
    return 0;
}

// ---- check-lemma ---------------------------------------------------------

struct LemmaArgs {
    double x = 0.5;
    double a = 0.8;
    double b = 0.1;
    std::optional<double> sigma;
    double sigma_norm = 0.1;
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 0;
};

int run_check_lemma(const LemmaArgs& args) {
    const NoiseSpec spec = args.sigma ? NoiseSpec(*args.sigma) : NoiseSpec::from_normalized(args.sigma_norm);
    if (args.samples < kLemmaMinSamples)
        fmt::print(stderr, "warning: {} samples is underpowered; use at least {}\n", args.samples, kLemmaMinSamples);
    const LemmaCheck r = verify_lemma_monte_carlo(args.x, args.a, args.b, spec, args.samples, args.seed);
    fmt::print("empirical {}\nclosed form {}\nstandard error {}\nz {:.3f}\n", r.empirical_mean, r.closed_form,
               r.standard_error, r.z_score());
    if (!r.within(4.0)) throw CheckFailed(fmt::format("deviation of {:.2f} standard errors exceeds 4", r.z_score()));
    fmt::print("PASS\n");
    return 0;
}

// ---- gradcheck -----------------------------------------------------------

struct GradcheckArgs {
    std::string dims = "24,32,32,2";
    std::string activation = "positive";
    std::uint64_t seed = 0;
    std::string loss = "both";
    double tol = 1e-4;
    double eps = 1e-6;
    int batch = 16;
    double sigma = 25.0;
};

int run_gradcheck(const GradcheckArgs& args) {
    const std::vector<int> dims = parse_int_list(args.dims);
    if (args.batch < 1) throw ConfigError("--batch must be >= 1");
    const nn::MlpWeights w = nn::init_weights(dims, nn::parse_activation(args.activation), args.seed);
    const NoiseSpec spec(args.sigma);

    std::mt19937_64 rng(derive_seed(args.seed, 1));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, spec.sigma_norm());
    Eigen::MatrixXd contexts(dims.front(), args.batch);
    Eigen::VectorXd z(args.batch), x(args.batch);
    for (Eigen::Index i = 0; i < contexts.size(); ++i) contexts.data()[i] = unit(rng) - kContextShift;
    for (int i = 0; i < args.batch; ++i) {
        x(i) = unit(rng);
        z(i) = x(i) + noise(rng);
    }

    std::vector<std::pair<std::string, nn::Objective>> checks;
    if (args.loss == "adaptive" || args.loss == "both")
        checks.emplace_back("adaptive", [&](const nn::MlpWeights& wt, nn::Gradients* g) {
            return adaptive_batch_loss(wt, contexts, z, spec.variance_norm(), g);
        });
    if (args.loss == "supervised" || args.loss == "both")
        checks.emplace_back("supervised", [&](const nn::MlpWeights& wt, nn::Gradients* g) {
            return supervised_batch_loss(wt, contexts, z, x, g);
        });

    double worst = 0.0;
    for (const auto& [name, fn] : checks) {
        const auto r = nn::gradient_check(w, fn, args.eps);
        fmt::print("{:<10} max relative error {:.3e} over {} parameters (worst index {})\n", name,
                   r.max_relative_error, r.checked, r.worst_index);
        worst = std::max(worst, r.max_relative_error);
    }
    if (!(worst < args.tol)) throw CheckFailed(fmt::format("max relative error {:.3e} >= tolerance {:.3e}", worst, args.tol));
    fmt::print("PASS\n");
    return 0;
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitUsage;
    } catch (const TrainingError& e) {
        fmt::print(stderr, "numeric failure: {}\n", e.what());
        return kExitNumeric;
    } catch (const CheckFailed& e) {
        fmt::print(stderr, "FAIL: {}\n", e.what());
        return kExitNumeric;
    } catch (const std::exception& e) {
        // ParseError, ShapeError, IndexError, filesystem errors.
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitData;
    }
}

int main_impl(int argc, char** argv) {
    CLI::App app{"Neural affine image denoiser"};
    app.require_subcommand(1);

    CorruptArgs corrupt;
    auto* c = app.add_subcommand("corrupt", "Add Gaussian noise to a clean image (writes NGF plus a PGM preview)");
    c->add_option("--input", corrupt.input, "Clean PGM or NGF image")->required();
    c->add_option("--output", corrupt.output, "Noisy .ngf output")->required();
    c->add_option("--sigma", corrupt.sigma, "Noise standard deviation in 8-bit units");
    c->add_option("--seed", corrupt.seed, "Noise seed");

    TrainArgs train_args;
    auto* t = app.add_subcommand("train", "Train a network from scratch");
    t->add_option("--mode", train_args.mode, "supervised (clean images) or adaptive (one noisy image)")
        ->check(CLI::IsMember({"supervised", "adaptive"}));
    t->add_option("--clean", train_args.clean, "Clean training images or directories");
    t->add_option("--noisy", train_args.noisy, "Noisy image for adaptive training");
    t->add_option("--output", train_args.output, "Checkpoint path")->required();
    t->add_option("--report", train_args.report, "Per-epoch CSV report");
    train_args.flags.add_to(*t, true);

    FinetuneArgs ft;
    auto* f = app.add_subcommand("finetune", "Fine-tune a checkpoint on one noisy image");
    f->add_option("--checkpoint", ft.checkpoint, "Starting checkpoint")->required();
    f->add_option("--noisy", ft.noisy, "Noisy image to adapt to")->required();
    f->add_option("--output", ft.output, "Checkpoint path")->required();
    f->add_option("--report", ft.report, "Per-epoch CSV report");
    f->add_option("--denoised", ft.denoised, "Also write the reconstruction (.pgm or .ngf)");
    f->add_flag("--keep-best", ft.keep_best, "Save the lowest-objective weights instead of the last ones");
    ft.flags.add_to(*f, false);
    f->add_option("--k", ft.flags.k, "Expected context size (checked against the checkpoint)");

    DenoiseArgs dn;
    auto* d = app.add_subcommand("denoise", "Apply a checkpoint to a noisy image");
    d->add_option("--checkpoint", dn.checkpoint, "Checkpoint")->required();
    d->add_option("--noisy", dn.noisy, "Noisy image")->required();
    d->add_option("--output", dn.output, "Reconstruction (.pgm or .ngf)")->required();
    d->add_option("--dump-affine", dn.dump_affine, "CSV of per-pixel (a, b)");
    d->add_option("--k", dn.k, "Expected context size (checked against the checkpoint)");

    EvalArgs ev;
    auto* e = app.add_subcommand("eval", "Corrupt, denoise and score every image in a directory");
    e->add_option("--clean-dir", ev.clean_dir, "Directory of clean images")->required();
    e->add_option("--checkpoint", ev.checkpoint, "Checkpoint")->required();
    e->add_option("--output", ev.output, "Metric CSV")->required();
    e->add_flag("--finetune", ev.finetune, "Fine-tune on each noisy image before denoising");
    ev.flags.add_to(*e, false);
    e->add_option("--k", ev.flags.k, "Expected context size (checked against the checkpoint)");

    LemmaArgs lm;
    auto* l = app.add_subcommand("check-lemma", "Monte-Carlo check that the estimated loss is unbiased");
    l->add_option("--x", lm.x, "Clean value");
    l->add_option("--a", lm.a, "Slope");
    l->add_option("--b", lm.b, "Intercept");
    auto* sigma_opt = l->add_option("--sigma", lm.sigma, "Noise level in 8-bit units");
    l->add_option("--sigma-norm", lm.sigma_norm, "Noise level on the [0, 1] scale")->excludes(sigma_opt);
    l->add_option("--samples", lm.samples, "Number of draws");
    l->add_option("--seed", lm.seed, "Seed");

    GradcheckArgs gc;
    auto* g = app.add_subcommand("gradcheck", "Compare analytic and finite-difference gradients");
    g->add_option("--dims", gc.dims, "Layer widths, input first, output 2");
    g->add_option("--activation", gc.activation, "Output activation")
        ->check(CLI::IsMember({"linear", "positive", "sigmoid"}));
    g->add_option("--seed", gc.seed, "Seed for weights and data");
    g->add_option("--loss", gc.loss, "Objective to check")->check(CLI::IsMember({"adaptive", "supervised", "both"}));
    g->add_option("--tol", gc.tol, "Maximum allowed relative error");
    g->add_option("--eps", gc.eps, "Finite-difference step");
    g->add_option("--batch", gc.batch, "Samples in the random batch");
    g->add_option("--sigma", gc.sigma, "Noise level in 8-bit units");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : kExitUsage;
    }

    if (c->parsed()) return guarded([&] { return run_corrupt(corrupt); });
    if (t->parsed()) return guarded([&] { return run_train(train_args); });
    if (f->parsed()) return guarded([&] { return run_finetune(ft); });
    if (d->parsed()) return guarded([&] { return run_denoise(dn); });
    if (e->parsed()) return guarded([&] { return run_eval(ev); });
    if (l->parsed()) return guarded([&] { return run_check_lemma(lm); });
    return guarded([&] { return run_gradcheck(gc); });
}

}  // namespace
}  // namespace naide::cli

int main(int argc, char** argv) { return naide::cli::main_impl(argc, argv); }
