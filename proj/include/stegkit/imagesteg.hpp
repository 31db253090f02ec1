#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "stegkit/bitcodec.hpp"
#include "stegkit/image.hpp"

namespace stegkit {

struct Capacity {
    std::size_t total = 0;   // raw bytes the carrier can hold
    std::size_t usable = 0;  // payload bytes after frame overhead
};

// ---- spatial LSB -----------------------------------------------------------

// One bit per sample byte: floor(w * h * channels / 8).
Capacity lsb_capacity(const RasterImage& image) noexcept;

// Overwrites the LSB of samples[i] with bits[i]; samples must be at least as long.
void write_lsbs(std::span<std::uint8_t> samples, const BitStream& bits);

// Writes frame_payload(payload) into the sample LSBs in row-major, stored
// channel order. Throws CapacityExceeded.
RasterImage lsb_embed(const RasterImage& image, ByteView payload);

// Throws NoMagic or CorruptFrame.
Bytes lsb_extract(const RasterImage& image);

// ---- transform domain ------------------------------------------------------

inline constexpr std::size_t kBlockSize = 8;
inline constexpr std::size_t kBlockCoeffs = 64;

using CoeffBlock = std::array<std::int32_t, kBlockCoeffs>;  // zig-zag order

// Quantized 8x8 DCT coefficients of a grayscale image. width/height are the
// original pixel dimensions; blocks cover them in raster order, edge blocks
// padded by replication.
struct CoeffPlane {
    std::size_t width = 0;
    std::size_t height = 0;
    int quality = 75;
    std::vector<CoeffBlock> blocks;

    std::size_t blocks_across() const noexcept { return (width + kBlockSize - 1) / kBlockSize; }
    std::size_t blocks_down() const noexcept { return (height + kBlockSize - 1) / kBlockSize; }

    bool operator==(const CoeffPlane&) const = default;
};

// zig-zag index -> natural (row * 8 + col) index
extern const std::array<std::uint8_t, kBlockCoeffs> kZigZag;

// Standard luminance table (natural order) scaled for quality 1..100.
std::array<std::uint16_t, kBlockCoeffs> quant_table(int quality);

// Orthonormal type-II DCT of an 8x8 block, natural order, in place semantics.
std::array<double, kBlockCoeffs> forward_dct(const std::array<double, kBlockCoeffs>& block) noexcept;
std::array<double, kBlockCoeffs> inverse_dct(const std::array<double, kBlockCoeffs>& coeffs) noexcept;

// RGB input is converted to luminance first. quality must be in [1, 100].
CoeffPlane image_to_coeffs(const RasterImage& image, int quality);

// Dequantize, inverse DCT, +128, round and clamp. Returns a gray image
// cropped to the plane's width x height.
RasterImage coeffs_to_image(const CoeffPlane& plane);

// Coefficients valued 0 or 1 are never touched; the rest carry one bit in
// the LSB of their magnitude.
Capacity dct_capacity(const CoeffPlane& plane) noexcept;

// Sets the LSB of |v| to bit, keeping the sign. A -1 asked to carry 0 becomes
// -2 so that no embeddable coefficient ever turns into a skipped 0 or 1.
std::int32_t set_magnitude_lsb(std::int32_t v, bool bit) noexcept;

// Throws CapacityExceeded.
CoeffPlane dct_embed(const CoeffPlane& plane, ByteView payload);

// Throws NoMagic or CorruptFrame.
Bytes dct_extract(const CoeffPlane& plane);

// "SCF1" container: u16be width, u16be height, u8 quality, then every
// coefficient as s16be in storage order.
Bytes write_scf(const CoeffPlane& plane);
CoeffPlane read_scf(ByteView bytes);

}  // namespace stegkit
