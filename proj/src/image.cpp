#include "stegkit/image.hpp"

#include <cmath>
#include <string>

#include "stegkit/error.hpp"

namespace stegkit {

namespace {

constexpr std::size_t kFileHeaderSize = 14;
constexpr std::size_t kInfoHeaderSize = 40;
constexpr std::uint32_t kPixelsPerMetre = 2835;  // 72 dpi

std::uint16_t rd16(ByteView b, std::size_t off) {
    return static_cast<std::uint16_t>(b[off] | (b[off + 1] << 8));
}

std::uint32_t rd32(ByteView b, std::size_t off) {
    return std::uint32_t{b[off]} | (std::uint32_t{b[off + 1]} << 8) |
           (std::uint32_t{b[off + 2]} << 16) | (std::uint32_t{b[off + 3]} << 24);
}

void wr16(Bytes& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void wr32(Bytes& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::size_t row_stride(std::size_t width, unsigned bits_per_pixel) {
    return (width * bits_per_pixel + 31) / 32 * 4;
}

}  // namespace

RasterImage::RasterImage(std::size_t width, std::size_t height, int channels)
    : RasterImage(width, height, channels, Bytes(width * height * static_cast<std::size_t>(channels == 3 ? 3 : 1), 0)) {}

RasterImage::RasterImage(std::size_t width, std::size_t height, int channels, Bytes samples)
    : width_(width), height_(height), channels_(channels), samples_(std::move(samples)) {
    if (channels != 1 && channels != 3) {
        throw Error(ErrorCode::InvalidArgument, "channels must be 1 or 3, got " + std::to_string(channels));
    }
    if (samples_.size() != width * height * static_cast<std::size_t>(channels)) {
        throw Error(ErrorCode::InvalidArgument, "sample count does not match width x height x channels");
    }
}

std::uint8_t luminance(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
    const double y = 0.299 * r + 0.587 * g + 0.114 * b;
    return static_cast<std::uint8_t>(std::lround(y));
}

RasterImage to_grayscale(const RasterImage& image) {
    if (image.channels() == 1) return image;
    RasterImage gray(image.width(), image.height(), 1);
    const auto& src = image.samples();
    auto& dst = gray.samples();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        dst[i] = luminance(src[3 * i], src[3 * i + 1], src[3 * i + 2]);
    }
    return gray;
}

RasterImage decode_bmp(ByteView bytes) {
    if (bytes.size() < 2 || bytes[0] != 'B' || bytes[1] != 'M') {
        throw Error(ErrorCode::UnsupportedBmp, "missing BM signature");
    }
    if (bytes.size() < kFileHeaderSize + kInfoHeaderSize) {
        throw Error(ErrorCode::Truncated, "BMP headers truncated");
    }
    const std::uint32_t pixel_offset = rd32(bytes, 10);
    const std::uint32_t info_size = rd32(bytes, 14);
    if (info_size != 40 && info_size != 108 && info_size != 124) {
        throw Error(ErrorCode::UnsupportedBmp, "unsupported info header size " + std::to_string(info_size));
    }
    const auto raw_width = static_cast<std::int32_t>(rd32(bytes, 18));
    const auto raw_height = static_cast<std::int32_t>(rd32(bytes, 22));
    const std::uint16_t planes = rd16(bytes, 26);
    const std::uint16_t bpp = rd16(bytes, 28);
    const std::uint32_t compression = rd32(bytes, 30);
    const std::uint32_t colors_used = rd32(bytes, 46);

    if (compression != 0) {
        throw Error(ErrorCode::UnsupportedBmp, "compressed BMP (method " + std::to_string(compression) + ")");
    }
    if (bpp != 24 && bpp != 8) {
        throw Error(ErrorCode::UnsupportedBmp, "unsupported bit depth " + std::to_string(bpp));
    }
    if (planes != 1 || raw_width < 0 || raw_height == INT32_MIN) {
        throw Error(ErrorCode::UnsupportedBmp, "invalid dimensions or plane count");
    }
    const bool top_down = raw_height < 0;
    const auto width = static_cast<std::size_t>(raw_width);
    const auto height = static_cast<std::size_t>(top_down ? -static_cast<std::int64_t>(raw_height) : raw_height);

    std::vector<std::uint8_t> palette_gray;
    if (bpp == 8) {
        const std::size_t entries = colors_used == 0 ? 256 : colors_used;
        if (entries > 256) throw Error(ErrorCode::UnsupportedBmp, "palette larger than 256 entries");
        const std::size_t pal_off = kFileHeaderSize + info_size;
        if (bytes.size() < pal_off + entries * 4) throw Error(ErrorCode::Truncated, "palette truncated");
        palette_gray.assign(256, 0);
        for (std::size_t i = 0; i < entries; ++i) {
            const std::size_t e = pal_off + 4 * i;  // B G R reserved
            palette_gray[i] = luminance(bytes[e + 2], bytes[e + 1], bytes[e]);
        }
    }

    const std::size_t stride = row_stride(width, bpp);
    if (pixel_offset > bytes.size() || (bytes.size() - pixel_offset) / (stride ? stride : 1) < height) {
        throw Error(ErrorCode::Truncated, "pixel data truncated");
    }

    const int channels = bpp == 24 ? 3 : 1;
    RasterImage image(width, height, channels);
    for (std::size_t row = 0; row < height; ++row) {
        const std::size_t y = top_down ? row : height - 1 - row;
        const std::uint8_t* src = bytes.data() + pixel_offset + row * stride;
        for (std::size_t x = 0; x < width; ++x) {
            if (channels == 3) {
                image.at(x, y, 0) = src[3 * x + 2];
                image.at(x, y, 1) = src[3 * x + 1];
                image.at(x, y, 2) = src[3 * x];
            } else {
                image.at(x, y) = palette_gray[src[x]];
            }
        }
    }
    return image;
}

Bytes encode_bmp(const RasterImage& image) {
    const bool rgb = image.channels() == 3;
    const unsigned bpp = rgb ? 24 : 8;
    const std::size_t stride = row_stride(image.width(), bpp);
    const std::size_t palette_size = rgb ? 0 : 256 * 4;
    const std::size_t pixel_offset = kFileHeaderSize + kInfoHeaderSize + palette_size;
    const std::size_t image_size = stride * image.height();
    const std::size_t file_size = pixel_offset + image_size;

    Bytes out;
    out.reserve(file_size);
    out.push_back('B');
    out.push_back('M');
    wr32(out, static_cast<std::uint32_t>(file_size));
    wr32(out, 0);
    wr32(out, static_cast<std::uint32_t>(pixel_offset));

    wr32(out, kInfoHeaderSize);
    wr32(out, static_cast<std::uint32_t>(image.width()));
    wr32(out, static_cast<std::uint32_t>(image.height()));
    wr16(out, 1);
    wr16(out, static_cast<std::uint16_t>(bpp));
    wr32(out, 0);
    wr32(out, static_cast<std::uint32_t>(image_size));
    wr32(out, kPixelsPerMetre);
    wr32(out, kPixelsPerMetre);
    wr32(out, rgb ? 0 : 256);
    wr32(out, 0);

    if (!rgb) {
        for (unsigned i = 0; i < 256; ++i) {
            const auto v = static_cast<std::uint8_t>(i);
            out.insert(out.end(), {v, v, v, 0});
        }
    }

    for (std::size_t row = 0; row < image.height(); ++row) {
        const std::size_t y = image.height() - 1 - row;
        const std::size_t start = out.size();
        for (std::size_t x = 0; x < image.width(); ++x) {
            if (rgb) {
                out.push_back(image.at(x, y, 2));
                out.push_back(image.at(x, y, 1));
                out.push_back(image.at(x, y, 0));
            } else {
                out.push_back(image.at(x, y));
            }
        }
        out.resize(start + stride, 0);
    }
    return out;
}

}  // namespace stegkit
