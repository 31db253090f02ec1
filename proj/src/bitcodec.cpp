#include "stegkit/bitcodec.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include <zlib.h>

#include "stegkit/error.hpp"

namespace stegkit {

namespace {

void put_u32be(Bytes& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

std::uint32_t get_u32be(ByteView in) {
    return (std::uint32_t{in[0]} << 24) | (std::uint32_t{in[1]} << 16) |
           (std::uint32_t{in[2]} << 8) | std::uint32_t{in[3]};
}

}  // namespace

BitStream::BitStream(ByteView bytes) { append(bytes); }

void BitStream::append(ByteView bytes) {
    bits_.reserve(bits_.size() + bytes.size() * 8);
    for (std::uint8_t b : bytes) {
        for (int i = 7; i >= 0; --i) bits_.push_back((b >> i) & 1U);
    }
}

bool BitStream::next() {
    if (exhausted()) throw Error(ErrorCode::InvalidArgument, "bit stream exhausted");
    return bits_[cursor_++] != 0;
}

Bytes BitStream::to_bytes(PadPolicy policy) const {
    const std::size_t tail = bits_.size() % 8;
    if (tail != 0 && policy == PadPolicy::Strict) {
        throw Error(ErrorCode::InvalidArgument,
                    "bit count " + std::to_string(bits_.size()) + " is not a multiple of 8");
    }
    std::size_t nbytes = bits_.size() / 8;
    if (tail != 0 && policy == PadPolicy::ZeroPad) ++nbytes;

    Bytes out(nbytes, 0);
    const std::size_t nbits = std::min(bits_.size(), nbytes * 8);
    for (std::size_t i = 0; i < nbits; ++i) {
        if (bits_[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80U >> (i % 8));
    }
    return out;
}

std::uint32_t crc32(ByteView data) noexcept {
    uLong crc = ::crc32(0L, Z_NULL, 0);
    // zlib takes a uInt length; feed large inputs in pieces.
    constexpr std::size_t kChunk = std::numeric_limits<uInt>::max();
    for (std::size_t off = 0; off < data.size(); off += kChunk) {
        const auto n = static_cast<uInt>(std::min(kChunk, data.size() - off));
        crc = ::crc32(crc, data.data() + off, n);
    }
    return static_cast<std::uint32_t>(crc);
}

Bytes frame_payload(ByteView payload) {
    if (payload.size() > std::numeric_limits<std::uint32_t>::max()) {
        throw Error(ErrorCode::InvalidArgument, "payload larger than 4 GiB cannot be framed");
    }
    Bytes out;
    out.reserve(kFrameOverhead + payload.size());
    out.insert(out.end(), kFrameMagic.begin(), kFrameMagic.end());
    put_u32be(out, static_cast<std::uint32_t>(payload.size()));
    out.insert(out.end(), payload.begin(), payload.end());
    put_u32be(out, crc32(payload));
    return out;
}

Bytes unframe_payload(ByteView stream) {
    if (stream.size() < kFrameMagic.size() ||
        !std::equal(kFrameMagic.begin(), kFrameMagic.end(), stream.begin())) {
        throw Error(ErrorCode::NoMagic, "no hidden frame present");
    }
    if (stream.size() < kFrameOverhead) {
        throw Error(ErrorCode::CorruptFrame, "frame header truncated");
    }
    const std::uint64_t length = get_u32be(stream.subspan(4, 4));
    if (length > stream.size() - kFrameOverhead) {
        throw Error(ErrorCode::CorruptFrame, "declared length " + std::to_string(length) +
                                                 " exceeds the " +
                                                 std::to_string(stream.size() - kFrameOverhead) +
                                                 " bytes available");
    }
    const auto payload = stream.subspan(8, length);
    const std::uint32_t stored = get_u32be(stream.subspan(8 + length, 4));
    if (stored != crc32(payload)) {
        throw Error(ErrorCode::CorruptFrame, "CRC mismatch");
    }
    return Bytes(payload.begin(), payload.end());
}

}  // namespace stegkit
