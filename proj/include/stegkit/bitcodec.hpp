#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace stegkit {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

// What to do with bits left over when a stream is not a whole number of bytes.
enum class PadPolicy {
    Strict,        // throw InvalidArgument
    DropTrailing,  // ignore the incomplete last byte
    ZeroPad,       // complete the last byte with zero bits
};

// Ordered bits with a read cursor. Bytes are expanded most-significant bit first.
class BitStream {
public:
    BitStream() = default;
    explicit BitStream(ByteView bytes);

    void push(bool bit) { bits_.push_back(bit ? 1 : 0); }
    void append(ByteView bytes);

    std::size_t size() const noexcept { return bits_.size(); }
    std::size_t cursor() const noexcept { return cursor_; }
    std::size_t remaining() const noexcept { return bits_.size() - cursor_; }
    bool exhausted() const noexcept { return cursor_ == bits_.size(); }

    // Throws InvalidArgument when the stream is exhausted.
    bool next();
    void rewind() noexcept { cursor_ = 0; }

    bool operator[](std::size_t i) const { return bits_[i] != 0; }

    Bytes to_bytes(PadPolicy policy = PadPolicy::Strict) const;

private:
    std::vector<std::uint8_t> bits_;
    std::size_t cursor_ = 0;
};

inline constexpr std::array<std::uint8_t, 4> kFrameMagic{0x53, 0x4B, 0x54, 0x31};  // "SKT1"
inline constexpr std::size_t kFrameOverhead = 12;

std::uint32_t crc32(ByteView data) noexcept;

// magic || u32be length || payload || u32be crc32(payload)
Bytes frame_payload(ByteView payload);

// Inverse of frame_payload. Bytes after the frame are ignored.
// Throws NoMagic when the stream does not start with the magic and
// CorruptFrame when the length or CRC does not check out.
Bytes unframe_payload(ByteView stream);

}  // namespace stegkit
