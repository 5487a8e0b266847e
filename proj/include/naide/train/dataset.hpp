#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "naide/core/image.hpp"
#include "naide/core/objectives.hpp"

namespace naide::train {

/// Labelled pixels from synthetically corrupted clean images.
///
/// Contexts are materialized lazily from the stored noisy images, so memory
/// stays O(pixels) regardless of k.
class SupervisedDataset {
public:
    struct PixelRef {
        std::uint32_t image;
        std::uint32_t pixel;
    };

    SupervisedDataset(int k, std::vector<GrayImage> clean, std::vector<GrayImage> noisy,
                      std::vector<PixelRef> order);

    int k() const { return k_; }
    std::size_t size() const { return order_.size(); }
    const std::vector<PixelRef>& order() const { return order_; }

    SupervisedSample sample(std::size_t i) const;

    // Gathers samples `indices` (positions in the stream) into column batches.
    void fill_batch(std::span<const std::size_t> indices, Eigen::MatrixXd& contexts, Eigen::VectorXd& z,
                    Eigen::VectorXd& x) const;

private:
    int k_;
    std::vector<GrayImage> clean_;
    std::vector<GrayImage> noisy_;
    std::vector<PixelRef> order_;
};

/// Corrupts each clean image once (per-image seed derived from `seed`),
/// takes one sample per pixel and shuffles the stream.
SupervisedDataset make_supervised_dataset(std::span<const GrayImage> clean_images, const NoiseSpec& spec, int k,
                                          std::uint64_t seed);

}  // namespace naide::train
