#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "naide/core/image.hpp"

namespace naide {

// Offset subtracted from every context entry before it reaches the network.
inline constexpr double kContextShift = 0.5;

inline int context_width(int k) { return k * k - 1; }
void validate_context_size(int k);

/// Inverse of context_width; throws ConfigError unless width = k^2 - 1 for a valid k.
int context_size_for_width(int width);

/// Maps a possibly out-of-range coordinate into [0, n) by edge-inclusive
/// mirroring (... 1 0 | 0 1 ... n-1 | n-1 n-2 ...), periodic for large offsets.
int symmetric_index(int i, int n);

/// k x k window around (row, col) with the center removed, row-major,
/// shifted by -0.5.
///
/// Out-of-image taps use symmetric padding. A tap whose mirror lands back
/// on the center pixel is re-mirrored edge-exclusively instead, and if the
/// image is too small for that to avoid the center it takes the neutral
/// value 0. The center pixel therefore never contributes to its own context.
void extract_context(const GrayImage& image, int row, int col, int k, std::span<double> out);
std::vector<double> extract_context(const GrayImage& image, int row, int col, int k);

/// Contexts of pixels [first, first + count) in row-major pixel order, one per column.
Eigen::MatrixXd extract_contexts(const GrayImage& image, int k, std::size_t first, std::size_t count);

}  // namespace naide
