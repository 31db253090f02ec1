#include "stegkit/audio.hpp"

#include <algorithm>
#include <optional>
#include <string>

#include "stegkit/error.hpp"

namespace stegkit {

namespace {

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

bool tag_is(ByteView b, std::size_t off, const char* tag) {
    return std::equal(tag, tag + 4, b.begin() + static_cast<std::ptrdiff_t>(off));
}

}  // namespace

WavAudio decode_wav(ByteView bytes) {
    if (bytes.size() < 12) throw Error(ErrorCode::Truncated, "RIFF header truncated");
    if (!tag_is(bytes, 0, "RIFF") || !tag_is(bytes, 8, "WAVE")) {
        throw Error(ErrorCode::UnsupportedWav, "not a RIFF/WAVE file");
    }

    std::optional<WavAudio> fmt;
    std::size_t off = 12;
    while (bytes.size() - off >= 8) {
        const std::size_t size = rd32(bytes, off + 4);
        const std::size_t body = off + 8;
        if (tag_is(bytes, off, "fmt ")) {
            if (size < 16 || bytes.size() - body < 16) throw Error(ErrorCode::Truncated, "fmt chunk truncated");
            const std::uint16_t format = rd16(bytes, body);
            const std::uint16_t channels = rd16(bytes, body + 2);
            const std::uint32_t rate = rd32(bytes, body + 4);
            const std::uint16_t bits = rd16(bytes, body + 14);
            if (format != 1) throw Error(ErrorCode::UnsupportedWav, "format code " + std::to_string(format) + " is not PCM");
            if (channels != 1) throw Error(ErrorCode::UnsupportedWav, std::to_string(channels) + " channels, mono required");
            if (bits != 16) throw Error(ErrorCode::UnsupportedWav, std::to_string(bits) + "-bit samples, 16 required");
            if (rate == 0) throw Error(ErrorCode::UnsupportedWav, "sample rate is zero");
            fmt = WavAudio{rate, {}};
        } else if (tag_is(bytes, off, "data")) {
            if (!fmt) throw Error(ErrorCode::UnsupportedWav, "data chunk precedes fmt chunk");
            if (bytes.size() - body < size) throw Error(ErrorCode::Truncated, "data chunk truncated");
            fmt->samples.resize(size / 2);
            for (std::size_t i = 0; i < fmt->samples.size(); ++i) {
                fmt->samples[i] = static_cast<std::int16_t>(rd16(bytes, body + 2 * i));
            }
            return *std::move(fmt);
        }
        if (bytes.size() - body < size) break;
        off = body + size + (size & 1);
    }
    if (!fmt) throw Error(ErrorCode::UnsupportedWav, "missing fmt chunk");
    throw Error(ErrorCode::Truncated, "missing data chunk");
}

Bytes encode_wav(const WavAudio& audio) {
    if (audio.sample_rate == 0) throw Error(ErrorCode::InvalidArgument, "sample rate must be positive");
    const auto data_size = static_cast<std::uint32_t>(audio.samples.size() * 2);
    Bytes out;
    out.reserve(44 + data_size);
    out.insert(out.end(), {'R', 'I', 'F', 'F'});
    wr32(out, 36 + data_size);
    out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
    wr32(out, 16);
    wr16(out, 1);  // PCM
    wr16(out, 1);  // mono
    wr32(out, audio.sample_rate);
    wr32(out, audio.sample_rate * 2);
    wr16(out, 2);
    wr16(out, 16);
    out.insert(out.end(), {'d', 'a', 't', 'a'});
    wr32(out, data_size);
    for (std::int16_t s : audio.samples) wr16(out, static_cast<std::uint16_t>(s));
    return out;
}

}  // namespace stegkit
