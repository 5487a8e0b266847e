#include "naide/eval/metrics.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <fmt/format.h>

#include "naide/errors.hpp"

namespace naide::eval {

double mse(const GrayImage& clean, const GrayImage& recon) {
    if (clean.width() != recon.width() || clean.height() != recon.height())
        throw ShapeError(fmt::format("image sizes differ: {}x{} vs {}x{}", clean.width(), clean.height(),
                                     recon.width(), recon.height()));
    const auto x = clean.pixels();
    const auto y = recon.pixels();
    double total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        total += d * d;
    }
    return total / static_cast<double>(x.size());
}

double psnr_from_mse(double mse) {
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return -10.0 * std::log10(mse);
}

double psnr(const GrayImage& clean, const GrayImage& recon) { return psnr_from_mse(mse(clean, recon)); }

void MetricReport::summarize() {
    mean_psnr_db = 0.0;
    std_psnr_db = 0.0;
    mean_mse = 0.0;
    if (images.empty()) return;
    const double n = static_cast<double>(images.size());
    for (const ImageMetric& m : images) {
        mean_psnr_db += m.psnr_db;
        mean_mse += m.mse;
    }
    mean_psnr_db /= n;
    mean_mse /= n;
    if (images.size() > 1) {
        double ss = 0.0;
        for (const ImageMetric& m : images) ss += (m.psnr_db - mean_psnr_db) * (m.psnr_db - mean_psnr_db);
        std_psnr_db = std::sqrt(ss / (n - 1.0));
    }
}

void write_metric_csv(const MetricReport& report, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path.string() + " for writing");
    out << "image,psnr_db,mse\n";
    for (const ImageMetric& m : report.images) out << fmt::format("{},{},{}\n", m.image, m.psnr_db, m.mse);
    if (!out) throw ParseError("failed writing " + path.string());
}

}  // namespace naide::eval
