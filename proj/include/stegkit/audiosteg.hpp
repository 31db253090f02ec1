#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

#include "stegkit/audio.hpp"
#include "stegkit/bitcodec.hpp"
#include "stegkit/image.hpp"
#include "stegkit/imagesteg.hpp"

namespace stegkit {

// ---- sample LSB ------------------------------------------------------------

Capacity audio_lsb_capacity(const WavAudio& audio) noexcept;

// One framed-payload bit per sample, in sample order. Throws CapacityExceeded.
WavAudio audio_lsb_embed(const WavAudio& audio, ByteView payload);

// Throws NoMagic or CorruptFrame.
Bytes audio_lsb_extract(const WavAudio& audio);

// ---- text raster -----------------------------------------------------------

inline constexpr std::size_t kGlyphCellWidth = 6;
inline constexpr std::size_t kGlyphCellHeight = 8;

// 5x7 glyphs for 0x20..0x7E, five column bytes each, bit 0 = top row.
const std::array<std::uint8_t, 5>& glyph(char c);

// White-on-black single line, one 6x8 cell per character.
// Throws UnsupportedChar outside 0x20..0x7E.
RasterImage rasterize_text(std::string_view text);

// ---- spectrogram -----------------------------------------------------------

struct SpectroParams {
    double f_min = 500.0;
    double f_max = 5000.0;
    std::size_t samples_per_column = 1024;
    std::size_t fft_size = 4096;
    std::uint32_t sample_rate = 44100;

    // Throws InvalidArgument when the invariants do not hold.
    void validate() const;
};

// Frequency of image row r (0 = top) for an image of the given height.
double row_frequency(std::size_t row, std::size_t height, const SpectroParams& params) noexcept;

// One oscillator per row, amplitude = pixel / 255, each column lasting
// samples_per_column samples. The mix is scaled to 90 % of full scale.
// Color input is converted to luminance. Throws InvalidArgument if height < 2.
WavAudio spectro_encode(const RasterImage& image, const SpectroParams& params = {});

// Hann-windowed magnitude STFT with hop = samples_per_column, resampled to
// out_height x out_width (row 0 = f_max) and normalised to 0..255.
// Throws AudioTooShort when fewer samples than one window are available.
RasterImage spectro_decode(const WavAudio& audio, std::size_t out_height, std::size_t out_width,
                           const SpectroParams& params = {});

}  // namespace stegkit
