#include "stegkit/imagesteg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "stegkit/error.hpp"

namespace stegkit {

namespace {

Capacity capacity_from_bits(std::size_t bits) noexcept {
    const std::size_t total = bits / 8;
    return {total, total > kFrameOverhead ? total - kFrameOverhead : 0};
}

[[noreturn]] void throw_capacity(const Capacity& cap, std::size_t requested) {
    throw Error(ErrorCode::CapacityExceeded,
                "payload of " + std::to_string(requested) + " bytes exceeds usable capacity of " +
                    std::to_string(cap.usable) + " bytes (" + std::to_string(cap.total) + " raw)");
}

constexpr std::array<std::uint8_t, kBlockCoeffs> kLuminanceTable{
    16, 11, 10, 16, 24,  40,  51,  61,   //
    12, 12, 14, 19, 26,  58,  60,  55,   //
    14, 13, 16, 24, 40,  57,  69,  56,   //
    14, 17, 22, 29, 51,  87,  80,  62,   //
    18, 22, 37, 56, 68,  109, 103, 77,   //
    24, 35, 55, 64, 81,  104, 113, 92,   //
    49, 64, 78, 87, 103, 121, 120, 101,  //
    72, 92, 95, 98, 112, 100, 103, 99,
};

// basis[u][x] = a(u) cos((2x + 1) u pi / 16)
const std::array<std::array<double, 8>, 8>& dct_basis() {
    static const auto basis = [] {
        std::array<std::array<double, 8>, 8> m{};
        for (int u = 0; u < 8; ++u) {
            const double a = u == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
            for (int x = 0; x < 8; ++x) {
                m[u][x] = a * std::cos((2 * x + 1) * u * std::numbers::pi / 16.0);
            }
        }
        return m;
    }();
    return basis;
}

void check_quality(int quality) {
    if (quality < 1 || quality > 100) {
        throw Error(ErrorCode::InvalidArgument, "quality must be within 1..100, got " + std::to_string(quality));
    }
}

bool carries_bit(std::int32_t v) noexcept { return v != 0 && v != 1; }

}  // namespace

const std::array<std::uint8_t, kBlockCoeffs> kZigZag{
    0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,   //
    12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,  //
    35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,  //
    58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63,
};

Capacity lsb_capacity(const RasterImage& image) noexcept {
    return capacity_from_bits(image.samples().size());
}

RasterImage lsb_embed(const RasterImage& image, ByteView payload) {
    const Capacity cap = lsb_capacity(image);
    if (payload.size() > cap.usable || cap.total < kFrameOverhead) throw_capacity(cap, payload.size());

    RasterImage stego = image;
    write_lsbs(stego.samples(), BitStream(frame_payload(payload)));
    return stego;
}

void write_lsbs(std::span<std::uint8_t> samples, const BitStream& bits) {
    if (samples.size() < bits.size()) throw Error(ErrorCode::InvalidArgument, "more bits than samples");
    for (std::size_t i = 0; i < bits.size(); ++i) {
        samples[i] = static_cast<std::uint8_t>((samples[i] & 0xFE) | (bits[i] ? 1 : 0));
    }
}

Bytes lsb_extract(const RasterImage& image) {
    BitStream bits;
    for (std::uint8_t s : image.samples()) bits.push(s & 1U);
    return unframe_payload(bits.to_bytes(PadPolicy::DropTrailing));
}

std::array<std::uint16_t, kBlockCoeffs> quant_table(int quality) {
    check_quality(quality);
    const int scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
    std::array<std::uint16_t, kBlockCoeffs> table{};
    for (std::size_t i = 0; i < kBlockCoeffs; ++i) {
        const int q = (kLuminanceTable[i] * scale + 50) / 100;
        table[i] = static_cast<std::uint16_t>(std::max(q, 1));
    }
    return table;
}

std::array<double, kBlockCoeffs> forward_dct(const std::array<double, kBlockCoeffs>& block) noexcept {
    const auto& c = dct_basis();
    std::array<double, kBlockCoeffs> tmp{};
    std::array<double, kBlockCoeffs> out{};
    // rows: tmp[y][u] = sum_x c[u][x] block[y][x]
    for (int y = 0; y < 8; ++y)
        for (int u = 0; u < 8; ++u) {
            double s = 0;
            for (int x = 0; x < 8; ++x) s += c[u][x] * block[y * 8 + x];
            tmp[y * 8 + u] = s;
        }
    // columns: out[v][u] = sum_y c[v][y] tmp[y][u]
    for (int v = 0; v < 8; ++v)
        for (int u = 0; u < 8; ++u) {
            double s = 0;
            for (int y = 0; y < 8; ++y) s += c[v][y] * tmp[y * 8 + u];
            out[v * 8 + u] = s;
        }
    return out;
}

std::array<double, kBlockCoeffs> inverse_dct(const std::array<double, kBlockCoeffs>& coeffs) noexcept {
    const auto& c = dct_basis();
    std::array<double, kBlockCoeffs> tmp{};
    std::array<double, kBlockCoeffs> out{};
    for (int v = 0; v < 8; ++v)
        for (int x = 0; x < 8; ++x) {
            double s = 0;
            for (int u = 0; u < 8; ++u) s += c[u][x] * coeffs[v * 8 + u];
            tmp[v * 8 + x] = s;
        }
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) {
            double s = 0;
            for (int v = 0; v < 8; ++v) s += c[v][y] * tmp[v * 8 + x];
            out[y * 8 + x] = s;
        }
    return out;
}

CoeffPlane image_to_coeffs(const RasterImage& image, int quality) {
    check_quality(quality);
    const RasterImage gray = to_grayscale(image);
    const auto table = quant_table(quality);

    CoeffPlane plane;
    plane.width = gray.width();
    plane.height = gray.height();
    plane.quality = quality;
    plane.blocks.reserve(plane.blocks_across() * plane.blocks_down());
    if (gray.width() == 0 || gray.height() == 0) return plane;

    for (std::size_t by = 0; by < plane.blocks_down(); ++by) {
        for (std::size_t bx = 0; bx < plane.blocks_across(); ++bx) {
            std::array<double, kBlockCoeffs> block{};
            for (std::size_t y = 0; y < kBlockSize; ++y) {
                const std::size_t sy = std::min(by * kBlockSize + y, gray.height() - 1);
                for (std::size_t x = 0; x < kBlockSize; ++x) {
                    const std::size_t sx = std::min(bx * kBlockSize + x, gray.width() - 1);
                    block[y * kBlockSize + x] = static_cast<double>(gray.at(sx, sy)) - 128.0;
                }
            }
            const auto freq = forward_dct(block);
            CoeffBlock out{};
            for (std::size_t k = 0; k < kBlockCoeffs; ++k) {
                const std::size_t n = kZigZag[k];
                out[k] = static_cast<std::int32_t>(std::lround(freq[n] / table[n]));
            }
            plane.blocks.push_back(out);
        }
    }
    return plane;
}

RasterImage coeffs_to_image(const CoeffPlane& plane) {
    check_quality(plane.quality);
    if (plane.blocks.size() != plane.blocks_across() * plane.blocks_down()) {
        throw Error(ErrorCode::InvalidArgument, "block count does not match plane dimensions");
    }
    const auto table = quant_table(plane.quality);
    RasterImage image(plane.width, plane.height, 1);
    for (std::size_t by = 0; by < plane.blocks_down(); ++by) {
        for (std::size_t bx = 0; bx < plane.blocks_across(); ++bx) {
            const CoeffBlock& blk = plane.blocks[by * plane.blocks_across() + bx];
            std::array<double, kBlockCoeffs> freq{};
            for (std::size_t k = 0; k < kBlockCoeffs; ++k) {
                const std::size_t n = kZigZag[k];
                freq[n] = static_cast<double>(blk[k]) * table[n];
            }
            const auto pixels = inverse_dct(freq);
            for (std::size_t y = 0; y < kBlockSize; ++y) {
                const std::size_t iy = by * kBlockSize + y;
                if (iy >= plane.height) break;
                for (std::size_t x = 0; x < kBlockSize; ++x) {
                    const std::size_t ix = bx * kBlockSize + x;
                    if (ix >= plane.width) break;
                    const long v = std::lround(pixels[y * kBlockSize + x] + 128.0);
                    image.at(ix, iy) = static_cast<std::uint8_t>(std::clamp(v, 0L, 255L));
                }
            }
        }
    }
    return image;
}

Capacity dct_capacity(const CoeffPlane& plane) noexcept {
    std::size_t usable_coeffs = 0;
    for (const auto& blk : plane.blocks) {
        usable_coeffs += static_cast<std::size_t>(std::count_if(blk.begin(), blk.end(), carries_bit));
    }
    return capacity_from_bits(usable_coeffs);
}

CoeffPlane dct_embed(const CoeffPlane& plane, ByteView payload) {
    const Capacity cap = dct_capacity(plane);
    if (payload.size() > cap.usable || cap.total < kFrameOverhead) throw_capacity(cap, payload.size());

    BitStream bits(frame_payload(payload));
    CoeffPlane stego = plane;
    for (auto& blk : stego.blocks) {
        for (auto& v : blk) {
            if (bits.exhausted()) return stego;
            if (!carries_bit(v)) continue;
            v = set_magnitude_lsb(v, bits.next());
        }
    }
    return stego;
}

std::int32_t set_magnitude_lsb(std::int32_t v, bool bit) noexcept {
    const std::int32_t sign = v < 0 ? -1 : 1;
    std::int32_t mag = (std::abs(v) & ~1) | (bit ? 1 : 0);
    if (mag == 0) mag = 2;
    return sign * mag;
}

Bytes dct_extract(const CoeffPlane& plane) {
    BitStream bits;
    for (const auto& blk : plane.blocks) {
        for (std::int32_t v : blk) {
            if (carries_bit(v)) bits.push(std::abs(v) & 1);
        }
    }
    return unframe_payload(bits.to_bytes(PadPolicy::DropTrailing));
}

Bytes write_scf(const CoeffPlane& plane) {
    check_quality(plane.quality);
    if (plane.width > 0xFFFF || plane.height > 0xFFFF) {
        throw Error(ErrorCode::InvalidArgument, "SCF dimensions are limited to 65535");
    }
    if (plane.blocks.size() != plane.blocks_across() * plane.blocks_down()) {
        throw Error(ErrorCode::InvalidArgument, "block count does not match plane dimensions");
    }
    Bytes out{'S', 'C', 'F', '1'};
    out.reserve(9 + plane.blocks.size() * kBlockCoeffs * 2);
    out.push_back(static_cast<std::uint8_t>(plane.width >> 8));
    out.push_back(static_cast<std::uint8_t>(plane.width));
    out.push_back(static_cast<std::uint8_t>(plane.height >> 8));
    out.push_back(static_cast<std::uint8_t>(plane.height));
    out.push_back(static_cast<std::uint8_t>(plane.quality));
    for (const auto& blk : plane.blocks) {
        for (std::int32_t v : blk) {
            if (v < INT16_MIN || v > INT16_MAX) {
                throw Error(ErrorCode::InvalidArgument, "coefficient " + std::to_string(v) + " does not fit in 16 bits");
            }
            const auto u = static_cast<std::uint16_t>(static_cast<std::int16_t>(v));
            out.push_back(static_cast<std::uint8_t>(u >> 8));
            out.push_back(static_cast<std::uint8_t>(u));
        }
    }
    return out;
}

CoeffPlane read_scf(ByteView bytes) {
    if (bytes.size() < 4 || !std::equal(bytes.begin(), bytes.begin() + 4, "SCF1")) {
        throw Error(ErrorCode::MalformedScf, "missing SCF1 magic");
    }
    if (bytes.size() < 9) throw Error(ErrorCode::Truncated, "SCF header truncated");
    CoeffPlane plane;
    plane.width = (std::size_t{bytes[4]} << 8) | bytes[5];
    plane.height = (std::size_t{bytes[6]} << 8) | bytes[7];
    plane.quality = bytes[8];
    if (plane.quality < 1 || plane.quality > 100) {
        throw Error(ErrorCode::MalformedScf, "quality " + std::to_string(plane.quality) + " out of range");
    }
    const std::size_t nblocks = plane.blocks_across() * plane.blocks_down();
    const std::size_t expected = 9 + nblocks * kBlockCoeffs * 2;
    if (bytes.size() < expected) throw Error(ErrorCode::Truncated, "SCF coefficient data truncated");
    if (bytes.size() > expected) throw Error(ErrorCode::MalformedScf, "trailing bytes after coefficient data");

    plane.blocks.resize(nblocks);
    std::size_t off = 9;
    for (auto& blk : plane.blocks) {
        for (auto& v : blk) {
            const auto u = static_cast<std::uint16_t>((bytes[off] << 8) | bytes[off + 1]);
            v = static_cast<std::int16_t>(u);
            off += 2;
        }
    }
    return plane;
}

}  // namespace stegkit
