#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "stegkit/bitcodec.hpp"

namespace stegkit {

// Top-down, unpadded, 8 bits per channel. channels is 1 (gray) or 3 (RGB).
class RasterImage {
public:
    RasterImage() = default;
    RasterImage(std::size_t width, std::size_t height, int channels);
    RasterImage(std::size_t width, std::size_t height, int channels, Bytes samples);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    int channels() const noexcept { return channels_; }

    const Bytes& samples() const noexcept { return samples_; }
    Bytes& samples() noexcept { return samples_; }

    std::uint8_t& at(std::size_t x, std::size_t y, int c = 0) {
        return samples_[(y * width_ + x) * static_cast<std::size_t>(channels_) + c];
    }
    std::uint8_t at(std::size_t x, std::size_t y, int c = 0) const {
        return samples_[(y * width_ + x) * static_cast<std::size_t>(channels_) + c];
    }

    bool operator==(const RasterImage&) const = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    int channels_ = 1;
    Bytes samples_;
};

// Y = round(0.299 R + 0.587 G + 0.114 B)
std::uint8_t luminance(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept;

// Returns the image unchanged if already single channel.
RasterImage to_grayscale(const RasterImage& image);

// Uncompressed BMP: 24-bit RGB or 8-bit paletted (decoded to gray through the
// palette luminance). Throws UnsupportedBmp or Truncated.
RasterImage decode_bmp(ByteView bytes);

// 24-bit for RGB, 8-bit with an identity gray palette for single channel.
Bytes encode_bmp(const RasterImage& image);

}  // namespace stegkit
