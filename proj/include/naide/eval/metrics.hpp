#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "naide/core/image.hpp"

namespace naide::eval {

double mse(const GrayImage& clean, const GrayImage& recon);

/// -10 log10(mse) with peak 1; +infinity when the images are identical.
double psnr(const GrayImage& clean, const GrayImage& recon);
double psnr_from_mse(double mse);

struct ImageMetric {
    std::string image;
    double psnr_db = 0.0;
    double mse = 0.0;
};

struct MetricReport {
    std::vector<ImageMetric> images;
    double mean_psnr_db = 0.0;
    double std_psnr_db = 0.0;  // sample standard deviation (n - 1); 0 for a single image
    double mean_mse = 0.0;

    // Recomputes the summary fields from `images`.
    void summarize();
};

/// CSV with header "image,psnr_db,mse", one row per image in report order.
void write_metric_csv(const MetricReport& report, const std::filesystem::path& path);

}  // namespace naide::eval
