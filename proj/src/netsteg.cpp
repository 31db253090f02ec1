#include "stegkit/netsteg.hpp"

#include <arpa/inet.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "stegkit/error.hpp"

namespace stegkit {

namespace {

void put16be(Bytes& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void put32be(Bytes& out, std::uint32_t v) {
    put16be(out, static_cast<std::uint16_t>(v >> 16));
    put16be(out, static_cast<std::uint16_t>(v));
}

std::uint16_t get16be(ByteView b, std::size_t off) {
    return static_cast<std::uint16_t>((b[off] << 8) | b[off + 1]);
}

std::uint32_t get32be(ByteView b, std::size_t off) {
    return (std::uint32_t{get16be(b, off)} << 16) | get16be(b, off + 2);
}

Bytes ip_header_bytes(const Ipv4Header& ip) {
    Bytes out;
    out.reserve(kIpv4HeaderSize);
    out.push_back(0x45);
    out.push_back(ip.tos);
    put16be(out, ip.total_length);
    put16be(out, ip.identification);
    put16be(out, ip.flags_fragment);
    out.push_back(ip.ttl);
    out.push_back(ip.protocol);
    put16be(out, ip.header_checksum);
    put32be(out, ip.src.value);
    put32be(out, ip.dst.value);
    return out;
}

Bytes tcp_header_bytes(const TcpHeader& tcp) {
    Bytes out;
    out.reserve(kTcpHeaderSize);
    put16be(out, tcp.src_port);
    put16be(out, tcp.dst_port);
    put32be(out, tcp.sequence);
    put32be(out, tcp.acknowledgment);
    out.push_back(5 << 4);
    out.push_back(tcp.flags);
    put16be(out, tcp.window);
    put16be(out, tcp.checksum);
    put16be(out, tcp.urgent);
    return out;
}

// Pseudo-header (src, dst, zero, protocol, TCP length) followed by the segment.
Bytes tcp_checksum_input(const Ipv4Header& ip, ByteView segment) {
    Bytes buf;
    buf.reserve(12 + segment.size());
    put32be(buf, ip.src.value);
    put32be(buf, ip.dst.value);
    buf.push_back(0);
    buf.push_back(ip.protocol);
    put16be(buf, static_cast<std::uint16_t>(segment.size()));
    buf.insert(buf.end(), segment.begin(), segment.end());
    return buf;
}

[[noreturn]] void malformed(std::size_t index, const std::string& why) {
    throw Error(ErrorCode::MalformedPacket, "packet " + std::to_string(index) + ": " + why);
}

ByteView network_payload(const PcapCapture& capture, const PcapRecord& rec, std::size_t index) {
    const ByteView data(rec.data);
    switch (capture.linktype) {
        case kLinktypeRaw:
        case 228:  // LINKTYPE_IPV4
            return data;
        case kLinktypeEthernet:
            if (data.size() < 14 || get16be(data, 12) != 0x0800) malformed(index, "not an IPv4 Ethernet frame");
            return data.subspan(14);
        default:
            malformed(index, "unsupported link type " + std::to_string(capture.linktype));
    }
}

}  // namespace

Ipv4Address Ipv4Address::parse(std::string_view dotted) {
    in_addr addr{};
    const std::string text(dotted);
    if (inet_pton(AF_INET, text.c_str(), &addr) != 1) {
        throw Error(ErrorCode::InvalidArgument, "invalid IPv4 address '" + text + "'");
    }
    return Ipv4Address{ntohl(addr.s_addr)};
}

std::string Ipv4Address::to_string() const {
    return std::to_string(value >> 24) + '.' + std::to_string((value >> 16) & 0xFF) + '.' +
           std::to_string((value >> 8) & 0xFF) + '.' + std::to_string(value & 0xFF);
}

std::uint16_t ones_complement_sum(ByteView data) noexcept {
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i + 1 < data.size(); i += 2) sum += (std::uint32_t{data[i]} << 8) | data[i + 1];
    if (data.size() % 2 != 0) sum += std::uint32_t{data.back()} << 8;
    while (sum >> 16) sum = (sum & 0xFFFF) + (sum >> 16);
    return static_cast<std::uint16_t>(sum);
}

std::uint16_t ones_complement_checksum(ByteView data) noexcept {
    return static_cast<std::uint16_t>(~ones_complement_sum(data));
}

Bytes serialize_packet(const TcpPacket& packet) {
    TcpPacket p = packet;
    p.ip.total_length = kIpv4HeaderSize + kTcpHeaderSize;
    p.ip.header_checksum = 0;
    p.ip.header_checksum = ones_complement_checksum(ip_header_bytes(p.ip));
    p.tcp.checksum = 0;
    p.tcp.checksum = ones_complement_checksum(tcp_checksum_input(p.ip, tcp_header_bytes(p.tcp)));

    Bytes out = ip_header_bytes(p.ip);
    const Bytes tcp = tcp_header_bytes(p.tcp);
    out.insert(out.end(), tcp.begin(), tcp.end());
    return out;
}

TcpPacket parse_packet(ByteView bytes) {
    if (bytes.size() < kIpv4HeaderSize) throw Error(ErrorCode::MalformedPacket, "shorter than an IPv4 header");
    if (bytes[0] >> 4 != 4) throw Error(ErrorCode::MalformedPacket, "IP version is not 4");
    const std::size_t ihl = (bytes[0] & 0x0F) * 4U;
    if (ihl < kIpv4HeaderSize || bytes.size() < ihl) throw Error(ErrorCode::MalformedPacket, "bad IHL");
    if (ones_complement_sum(bytes.first(ihl)) != 0xFFFF) {
        throw Error(ErrorCode::MalformedPacket, "IP header checksum does not verify");
    }

    TcpPacket p;
    p.ip.tos = bytes[1];
    p.ip.total_length = get16be(bytes, 2);
    p.ip.identification = get16be(bytes, 4);
    p.ip.flags_fragment = get16be(bytes, 6);
    p.ip.ttl = bytes[8];
    p.ip.protocol = bytes[9];
    p.ip.header_checksum = get16be(bytes, 10);
    p.ip.src.value = get32be(bytes, 12);
    p.ip.dst.value = get32be(bytes, 16);
    if (p.ip.protocol != kProtocolTcp) throw Error(ErrorCode::MalformedPacket, "protocol is not TCP");
    if (p.ip.total_length < ihl + kTcpHeaderSize || p.ip.total_length > bytes.size()) {
        throw Error(ErrorCode::MalformedPacket, "total length inconsistent with captured bytes");
    }

    const ByteView segment = bytes.subspan(ihl, p.ip.total_length - ihl);
    const std::size_t data_offset = (segment[12] >> 4) * 4U;
    if (data_offset < kTcpHeaderSize || data_offset > segment.size()) {
        throw Error(ErrorCode::MalformedPacket, "bad TCP data offset");
    }
    if (ones_complement_sum(tcp_checksum_input(p.ip, segment)) != 0xFFFF) {
        throw Error(ErrorCode::MalformedPacket, "TCP checksum does not verify");
    }
    p.tcp.src_port = get16be(segment, 0);
    p.tcp.dst_port = get16be(segment, 2);
    p.tcp.sequence = get32be(segment, 4);
    p.tcp.acknowledgment = get32be(segment, 8);
    p.tcp.flags = segment[13];
    p.tcp.window = get16be(segment, 14);
    p.tcp.checksum = get16be(segment, 16);
    p.tcp.urgent = get16be(segment, 18);
    return p;
}

Bytes write_pcap(const PcapCapture& capture) {
    Bytes out;
    auto le32 = [&out](std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    };
    auto le16 = [&out](std::uint16_t v) {
        out.push_back(static_cast<std::uint8_t>(v));
        out.push_back(static_cast<std::uint8_t>(v >> 8));
    };
    le32(0xA1B2C3D4);
    le16(2);
    le16(4);
    le32(0);  // thiszone
    le32(0);  // sigfigs
    le32(capture.snaplen);
    le32(capture.linktype);
    for (const auto& rec : capture.records) {
        le32(rec.ts_sec);
        le32(rec.ts_usec);
        le32(static_cast<std::uint32_t>(rec.data.size()));
        le32(rec.orig_len != 0 ? rec.orig_len : static_cast<std::uint32_t>(rec.data.size()));
        out.insert(out.end(), rec.data.begin(), rec.data.end());
    }
    return out;
}

PcapCapture read_pcap(ByteView bytes) {
    if (bytes.size() < 4) throw Error(ErrorCode::Truncated, "pcap global header truncated");
    bool little;
    if (bytes[0] == 0xD4 && bytes[1] == 0xC3 && bytes[2] == 0xB2 && bytes[3] == 0xA1) {
        little = true;
    } else if (bytes[0] == 0xA1 && bytes[1] == 0xB2 && bytes[2] == 0xC3 && bytes[3] == 0xD4) {
        little = false;
    } else {
        throw Error(ErrorCode::BadMagic, "not a classic microsecond pcap file");
    }
    if (bytes.size() < 24) throw Error(ErrorCode::Truncated, "pcap global header truncated");

    auto u32 = [&](std::size_t off) {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            const std::uint32_t b = bytes[off + (little ? i : 3 - i)];
            v |= b << (8 * i);
        }
        return v;
    };
    auto u16 = [&](std::size_t off) {
        return static_cast<std::uint16_t>(little ? bytes[off] | (bytes[off + 1] << 8) : (bytes[off] << 8) | bytes[off + 1]);
    };

    if (u16(4) != 2 || u16(6) != 4) {
        throw Error(ErrorCode::BadMagic, "unsupported pcap version " + std::to_string(u16(4)) + "." + std::to_string(u16(6)));
    }
    PcapCapture capture;
    capture.snaplen = u32(16);
    capture.linktype = u32(20);

    std::size_t off = 24;
    while (off < bytes.size()) {
        if (bytes.size() - off < 16) throw Error(ErrorCode::Truncated, "record header truncated");
        PcapRecord rec;
        rec.ts_sec = u32(off);
        rec.ts_usec = u32(off + 4);
        const std::uint32_t incl = u32(off + 8);
        rec.orig_len = u32(off + 12);
        off += 16;
        if (bytes.size() - off < incl) throw Error(ErrorCode::Truncated, "record data truncated");
        rec.data.assign(bytes.begin() + static_cast<std::ptrdiff_t>(off),
                        bytes.begin() + static_cast<std::ptrdiff_t>(off + incl));
        if (rec.orig_len == incl) rec.orig_len = 0;
        off += incl;
        capture.records.push_back(std::move(rec));
    }
    return capture;
}

std::string_view to_string(CovertMode mode) noexcept {
    switch (mode) {
        case CovertMode::IpId: return "ipid";
        case CovertMode::Seq: return "seq";
        case CovertMode::AckBounce: return "ack";
    }
    return "?";
}

std::optional<CovertMode> parse_covert_mode(std::string_view name) noexcept {
    if (name == "ipid") return CovertMode::IpId;
    if (name == "seq") return CovertMode::Seq;
    if (name == "ack") return CovertMode::AckBounce;
    return std::nullopt;
}

PcapCapture covert_encode(ByteView message, CovertMode mode, const CovertOptions& options) {
    if (message.empty()) throw Error(ErrorCode::InvalidArgument, "message is empty");
    if (options.id_scale == 0 || 255U * options.id_scale > 0xFFFFU) {
        throw Error(ErrorCode::InvalidArgument, "id scale must be within 1..257");
    }

    std::mt19937_64 rng(options.seed);
    PcapCapture capture;
    capture.records.reserve(message.size());
    for (std::size_t i = 0; i < message.size(); ++i) {
        const std::uint8_t b = message[i];
        const std::uint64_t noise = rng();
        TcpPacket p;
        p.ip.src = options.src;
        p.ip.dst = options.dst;
        p.tcp.src_port = options.src_port;
        p.tcp.dst_port = options.dst_port;
        p.ip.identification = static_cast<std::uint16_t>(noise >> 48);
        p.tcp.sequence = static_cast<std::uint32_t>(noise);
        switch (mode) {
            case CovertMode::IpId:
                p.ip.identification = static_cast<std::uint16_t>(b * options.id_scale);
                break;
            case CovertMode::Seq:
                p.tcp.sequence = b * kSeqScale;
                break;
            case CovertMode::AckBounce:
                p.tcp.flags = tcp_flags::kSyn | tcp_flags::kAck;
                p.tcp.acknowledgment = b * kSeqScale + 1;
                break;
        }
        PcapRecord rec;
        rec.ts_sec = static_cast<std::uint32_t>(i) * options.interval_sec;
        rec.data = serialize_packet(p);
        capture.records.push_back(std::move(rec));
    }
    return capture;
}

Bytes covert_decode(const PcapCapture& capture, CovertMode mode, std::uint16_t id_scale) {
    if (id_scale == 0) throw Error(ErrorCode::InvalidArgument, "id scale must be positive");
    std::vector<std::size_t> order(capture.records.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& ra = capture.records[a];
        const auto& rb = capture.records[b];
        return std::tie(ra.ts_sec, ra.ts_usec) < std::tie(rb.ts_sec, rb.ts_usec);
    });

    Bytes message;
    message.reserve(order.size());
    for (std::size_t idx : order) {
        const TcpPacket p = [&] {
            try {
                return parse_packet(network_payload(capture, capture.records[idx], idx));
            } catch (const Error& e) {
                if (e.code() != ErrorCode::MalformedPacket) throw;
                malformed(idx, e.detail());
            }
        }();
        std::uint32_t value = 0;
        switch (mode) {
            case CovertMode::IpId:
                if (p.ip.identification % id_scale != 0) {
                    throw Error(ErrorCode::FieldOutOfRange, "packet " + std::to_string(idx) + ": IP ID " +
                                                                std::to_string(p.ip.identification) +
                                                                " is not a multiple of " + std::to_string(id_scale));
                }
                value = p.ip.identification / id_scale;
                break;
            case CovertMode::Seq:
                if (p.tcp.sequence % kSeqScale != 0) {
                    throw Error(ErrorCode::FieldOutOfRange, "packet " + std::to_string(idx) + ": sequence " +
                                                                std::to_string(p.tcp.sequence) +
                                                                " is not a multiple of 2^24");
                }
                value = p.tcp.sequence / kSeqScale;
                break;
            case CovertMode::AckBounce: {
                const std::uint32_t adjusted = p.tcp.acknowledgment - 1;
                if (adjusted % kSeqScale != 0) {
                    throw Error(ErrorCode::FieldOutOfRange, "packet " + std::to_string(idx) + ": acknowledgment " +
                                                                std::to_string(p.tcp.acknowledgment) +
                                                                " minus 1 is not a multiple of 2^24");
                }
                value = adjusted / kSeqScale;
                break;
            }
        }
        if (value > 0xFF) {
            throw Error(ErrorCode::FieldOutOfRange,
                        "packet " + std::to_string(idx) + ": decoded value " + std::to_string(value) + " exceeds 255");
        }
        message.push_back(static_cast<std::uint8_t>(value));
    }
    return message;
}

}  // namespace stegkit
