#pragma once

#include <cstdint>
#include <vector>

#include "stegkit/bitcodec.hpp"

namespace stegkit {

// Mono 16-bit PCM.
struct WavAudio {
    std::uint32_t sample_rate = 44100;
    std::vector<std::int16_t> samples;

    double duration_seconds() const noexcept {
        return static_cast<double>(samples.size()) / sample_rate;
    }

    bool operator==(const WavAudio&) const = default;
};

// RIFF/WAVE, PCM format 1, mono, 16-bit little endian. Unknown chunks are
// skipped. Throws UnsupportedWav or Truncated.
WavAudio decode_wav(ByteView bytes);

// Canonical 44-byte header followed by the samples.
Bytes encode_wav(const WavAudio& audio);

}  // namespace stegkit
