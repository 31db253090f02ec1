#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stegkit/bitcodec.hpp"

namespace stegkit {

// ---- addresses and headers -------------------------------------------------

struct Ipv4Address {
    std::uint32_t value = 0;  // host order, a.b.c.d == a << 24 | ...

    static Ipv4Address parse(std::string_view dotted);  // throws InvalidArgument
    std::string to_string() const;

    bool operator==(const Ipv4Address&) const = default;
};

inline constexpr std::size_t kIpv4HeaderSize = 20;
inline constexpr std::size_t kTcpHeaderSize = 20;
inline constexpr std::uint8_t kProtocolTcp = 6;

// Version 4, IHL 5, no options.
struct Ipv4Header {
    std::uint8_t tos = 0;
    std::uint16_t total_length = kIpv4HeaderSize + kTcpHeaderSize;
    std::uint16_t identification = 0;
    std::uint16_t flags_fragment = 0;
    std::uint8_t ttl = 64;
    std::uint8_t protocol = kProtocolTcp;
    std::uint16_t header_checksum = 0;
    Ipv4Address src;
    Ipv4Address dst;

    bool operator==(const Ipv4Header&) const = default;
};

namespace tcp_flags {
inline constexpr std::uint8_t kFin = 0x01;
inline constexpr std::uint8_t kSyn = 0x02;
inline constexpr std::uint8_t kRst = 0x04;
inline constexpr std::uint8_t kPsh = 0x08;
inline constexpr std::uint8_t kAck = 0x10;
}  // namespace tcp_flags

// Data offset 5, no options.
struct TcpHeader {
    std::uint16_t src_port = 0;
    std::uint16_t dst_port = 0;
    std::uint32_t sequence = 0;
    std::uint32_t acknowledgment = 0;
    std::uint8_t flags = tcp_flags::kSyn;
    std::uint16_t window = 512;
    std::uint16_t checksum = 0;
    std::uint16_t urgent = 0;

    bool operator==(const TcpHeader&) const = default;
};

struct TcpPacket {
    Ipv4Header ip;
    TcpHeader tcp;

    bool operator==(const TcpPacket&) const = default;
};

// RFC 1071 Internet checksum; an odd trailing byte is padded with zero.
std::uint16_t ones_complement_checksum(ByteView data) noexcept;

// Folded 16-bit ones'-complement sum without the final complement.
std::uint16_t ones_complement_sum(ByteView data) noexcept;

// Serializes with freshly computed IP and TCP checksums and total_length.
Bytes serialize_packet(const TcpPacket& packet);

// Throws MalformedPacket on a short buffer, wrong version/IHL, non-TCP
// protocol, or either checksum failing to verify.
TcpPacket parse_packet(ByteView bytes);

// ---- pcap ------------------------------------------------------------------

inline constexpr std::uint32_t kLinktypeEthernet = 1;
inline constexpr std::uint32_t kLinktypeRaw = 101;

struct PcapRecord {
    std::uint32_t ts_sec = 0;
    std::uint32_t ts_usec = 0;
    std::uint32_t orig_len = 0;  // 0 means "same as data.size()" on write
    Bytes data;

    bool operator==(const PcapRecord&) const = default;
};

struct PcapCapture {
    std::uint32_t linktype = kLinktypeRaw;
    std::uint32_t snaplen = 65535;
    std::vector<PcapRecord> records;

    bool operator==(const PcapCapture&) const = default;
};

// Little endian, magic D4 C3 B2 A1, version 2.4.
Bytes write_pcap(const PcapCapture& capture);

// Classic pcap in either byte order. Throws BadMagic or Truncated.
PcapCapture read_pcap(ByteView bytes);

// ---- covert channel --------------------------------------------------------

enum class CovertMode { IpId, Seq, AckBounce };

std::string_view to_string(CovertMode mode) noexcept;
std::optional<CovertMode> parse_covert_mode(std::string_view name) noexcept;  // "ipid", "seq", "ack"

inline constexpr std::uint32_t kSeqScale = 16777216;  // 2^24: one byte in the top octet

struct CovertOptions {
    // For AckBounce these are the bounce server and the receiver.
    Ipv4Address src{0x0A000001};
    Ipv4Address dst{0x0A000002};
    std::uint16_t src_port = 1234;
    std::uint16_t dst_port = 80;
    std::uint16_t id_scale = 1;   // IpId multiplier, 1..257
    std::uint64_t seed = 0;       // drives every non-covert field
    std::uint32_t interval_sec = 1;
};

// One packet per message byte. Throws InvalidArgument on an empty message or
// an id_scale that cannot fit 255 * id_scale in 16 bits.
PcapCapture covert_encode(ByteView message, CovertMode mode, const CovertOptions& options = {});

// Records are read in timestamp order. Throws MalformedPacket or FieldOutOfRange.
Bytes covert_decode(const PcapCapture& capture, CovertMode mode, std::uint16_t id_scale = 1);

}  // namespace stegkit
