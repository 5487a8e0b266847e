#include "naide/eval/image_io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include <fmt/format.h>

#include "naide/errors.hpp"

namespace naide::eval {

namespace {

constexpr std::uint8_t kNgfMagic[4] = {'N', 'G', 'F', '1'};
constexpr std::size_t kNgfHeader = 12;

class HeaderReader {
public:
    explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    int read_uint(const char* field) {
        skip_space_and_comments();
        const std::size_t start = pos_;
        long value = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > 1'000'000'000L) throw ParseError(fmt::format("PGM {} too large at byte {}", field, start));
            ++pos_;
        }
        if (pos_ == start) throw ParseError(fmt::format("PGM header: expected {} at byte {}", field, start));
        return static_cast<int>(value);
    }

    std::size_t pos() const { return pos_; }
    void advance() { ++pos_; }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t at) {
    return static_cast<std::uint32_t>(b[at]) | static_cast<std::uint32_t>(b[at + 1]) << 8 |
           static_cast<std::uint32_t>(b[at + 2]) << 16 | static_cast<std::uint32_t>(b[at + 3]) << 24;
}

void write_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string lower_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext;
}

}  // namespace

GrayImage decode_pgm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') throw ParseError("not a PGM P5 file (byte 0)");
    HeaderReader header(bytes.subspan(0));
    header.advance();
    header.advance();
    const int width = header.read_uint("width");
    const int height = header.read_uint("height");
    const std::size_t maxval_at = header.pos();
    const int maxval = header.read_uint("maxval");
    if (width <= 0 || height <= 0) throw ParseError(fmt::format("PGM dimensions must be positive (byte {})", maxval_at));
    if (maxval != 255) throw ParseError(fmt::format("unsupported PGM maxval {} at byte {} (need 255)", maxval, maxval_at));
    if (header.pos() >= bytes.size() || !std::isspace(bytes[header.pos()]))
        throw ParseError(fmt::format("PGM header: expected whitespace after maxval at byte {}", header.pos()));
    const std::size_t data_at = header.pos() + 1;
    const std::size_t expected = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    const std::size_t available = bytes.size() - data_at;
    if (available < expected)
        throw ParseError(fmt::format("truncated PGM payload at byte {}: expected {} bytes, got {}", data_at, expected,
                                     available));
    std::vector<double> pixels(expected);
    for (std::size_t i = 0; i < expected; ++i) pixels[i] = bytes[data_at + i] / 255.0;
    return GrayImage(width, height, std::move(pixels), PixelKind::clean);
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& image) {
    const std::string header = fmt::format("P5\n{} {}\n255\n", image.width(), image.height());
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(out.size() + image.size());
    for (double v : image.pixels()) {
        const double clamped = std::clamp(v, 0.0, 1.0);
        out.push_back(static_cast<std::uint8_t>(std::lround(clamped * 255.0)));
    }
    return out;
}

GrayImage decode_ngf(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 4 || !std::equal(std::begin(kNgfMagic), std::end(kNgfMagic), bytes.begin()))
        throw ParseError("missing NGF1 magic at byte 0");
    if (bytes.size() < kNgfHeader)
        throw ParseError(fmt::format("truncated NGF header: expected {} bytes, got {}", kNgfHeader, bytes.size()));
    const std::uint32_t width = read_u32(bytes, 4);
    const std::uint32_t height = read_u32(bytes, 8);
    if (width == 0 || height == 0 || width > 1u << 20 || height > 1u << 20)
        throw ParseError(fmt::format("invalid NGF dimensions {}x{} at byte 4", width, height));
    const std::size_t count = static_cast<std::size_t>(width) * height;
    const std::size_t expected = count * 8;
    const std::size_t available = bytes.size() - kNgfHeader;
    if (available != expected)
        throw ParseError(fmt::format("{} NGF payload at byte {}: expected {} bytes, got {}",
                                     available < expected ? "truncated" : "oversized", kNgfHeader, expected,
                                     available));
    std::vector<double> pixels(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::uint64_t bits = 0;
        for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[kNgfHeader + 8 * i + b]) << (8 * b);
        pixels[i] = std::bit_cast<double>(bits);
        if (!std::isfinite(pixels[i]))
            throw ParseError(fmt::format("non-finite NGF pixel at byte {}", kNgfHeader + 8 * i));
    }
    return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(pixels), PixelKind::noisy);
}

std::vector<std::uint8_t> encode_ngf(const GrayImage& image) {
    std::vector<std::uint8_t> out(std::begin(kNgfMagic), std::end(kNgfMagic));
    out.reserve(kNgfHeader + image.size() * 8);
    write_u32(out, static_cast<std::uint32_t>(image.width()));
    write_u32(out, static_cast<std::uint32_t>(image.height()));
    for (double v : image.pixels()) {
        const auto bits = std::bit_cast<std::uint64_t>(v);
        for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>(bits >> (8 * b)));
    }
    return out;
}

GrayImage load_image(const std::filesystem::path& path) {
    const std::vector<std::uint8_t> bytes = read_file(path);
    try {
        if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') return decode_pgm(bytes);
        if (bytes.size() >= 4 && std::equal(std::begin(kNgfMagic), std::end(kNgfMagic), bytes.begin()))
            return decode_ngf(bytes);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    throw ParseError(path.string() + ": unrecognized image format at byte 0 (expected P5 or NGF1)");
}

void save_image(const GrayImage& image, const std::filesystem::path& path) {
    const std::string ext = lower_extension(path);
    std::vector<std::uint8_t> bytes;
    if (ext == ".pgm")
        bytes = encode_pgm(image);
    else if (ext == ".ngf")
        bytes = encode_ngf(image);
    else
        throw ConfigError("cannot infer image format from '" + path.string() + "' (use .pgm or .ngf)");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw ParseError("failed writing " + path.string());
}

bool is_image_path(const std::filesystem::path& path) {
    const std::string ext = lower_extension(path);
    return ext == ".pgm" || ext == ".ngf";
}

}  // namespace naide::eval
