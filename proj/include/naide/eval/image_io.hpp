#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "naide/core/image.hpp"

namespace naide::eval {

// PGM P5, maxval 255. Loads as a clean image (value / 255); saving clamps
// to [0, 1] and rounds to the nearest 8-bit level.
GrayImage decode_pgm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_pgm(const GrayImage& image);

// NGF: "NGF1", uint32 LE width, uint32 LE height, width*height float64 LE.
// Lossless; loads as a noisy image.
GrayImage decode_ngf(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_ngf(const GrayImage& image);

/// Dispatches on the file's magic bytes ("P5" or "NGF1").
GrayImage load_image(const std::filesystem::path& path);

/// Format chosen by extension: ".pgm" or ".ngf".
void save_image(const GrayImage& image, const std::filesystem::path& path);

bool is_image_path(const std::filesystem::path& path);

}  // namespace naide::eval
