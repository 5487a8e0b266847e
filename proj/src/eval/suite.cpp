#include "naide/eval/suite.hpp"

#include <algorithm>
#include <iostream>

#include "naide/core/denoise.hpp"
#include "naide/core/objectives.hpp"
#include "naide/errors.hpp"
#include "naide/eval/image_io.hpp"
#include "naide/eval/noise.hpp"
#include "naide/rng.hpp"
#include "naide/train/trainer.hpp"

namespace naide::eval {

MetricReport evaluate_images(const std::vector<NamedImage>& clean, const nn::MlpWeights& weights,
                             const NoiseSpec& spec, int k, const SuiteOptions& options) {
    check_network_matches_k(weights, k);
    MetricReport report;
    for (std::size_t i = 0; i < clean.size(); ++i) {
        const GrayImage noisy = add_gaussian_noise(clean[i].image, spec, derive_seed(options.master_seed, i));
        GrayImage recon;
        if (options.fine_tune) {
            train::TrainConfig config = *options.fine_tune;
            config.k = k;
            const train::FineTuneResult tuned = train::fine_tune(weights, noisy, spec, config);
            recon = denoise_image(tuned.weights, noisy, k);
        } else {
            recon = denoise_image(weights, noisy, k);
        }
        const double err = mse(clean[i].image, recon);
        report.images.push_back({clean[i].name, psnr_from_mse(err), err});
    }
    report.summarize();
    return report;
}

MetricReport evaluate_suite(const std::filesystem::path& clean_dir, const nn::MlpWeights& weights,
                            const NoiseSpec& spec, int k, const SuiteOptions& options) {
    std::error_code ec;
    std::filesystem::directory_iterator it(clean_dir, ec);
    if (ec) throw ParseError("cannot read directory " + clean_dir.string() + ": " + ec.message());

    std::vector<std::filesystem::path> paths;
    for (const auto& entry : it)
        if (entry.is_regular_file() && is_image_path(entry.path())) paths.push_back(entry.path());
    std::sort(paths.begin(), paths.end());

    std::vector<NamedImage> images;
    for (const auto& path : paths) {
        try {
            GrayImage img = load_image(path);
            // Suites hold clean references; NGF files load as noisy-kind.
            images.push_back({path.filename().string(),
                              GrayImage(img.width(), img.height(), {img.pixels().begin(), img.pixels().end()},
                                        PixelKind::clean)});
        } catch (const std::exception& e) {
            std::cerr << "warning: skipping " << path.string() << ": " << e.what() << '\n';
        }
    }
    if (images.empty()) throw ParseError("no readable clean images in " + clean_dir.string());
    return evaluate_images(images, weights, spec, k, options);
}

}  // namespace naide::eval
