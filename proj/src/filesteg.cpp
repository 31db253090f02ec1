#include "stegkit/filesteg.hpp"

#include <algorithm>
#include <array>

#include "stegkit/error.hpp"

namespace stegkit {

namespace {

constexpr std::array<std::uint8_t, 8> kPngSignature{0x89, 0x50, 0x4E, 0x47, 0x0D, 0x0A, 0x1A, 0x0A};
constexpr std::array<std::uint8_t, 4> kZipLocalHeader{0x50, 0x4B, 0x03, 0x04};

bool starts_with(ByteView data, ByteView prefix) noexcept {
    return data.size() >= prefix.size() && std::equal(prefix.begin(), prefix.end(), data.begin());
}

std::optional<std::size_t> jpeg_boundary(ByteView data) noexcept {
    for (std::size_t i = data.size(); i >= 4; --i) {
        if (data[i - 2] == 0xFF && data[i - 1] == 0xD9) return i;
    }
    return std::nullopt;
}

std::optional<std::size_t> png_boundary(ByteView data) noexcept {
    std::size_t off = kPngSignature.size();
    while (data.size() - off >= 12) {
        const std::uint64_t len = (std::uint64_t{data[off]} << 24) | (std::uint64_t{data[off + 1]} << 16) |
                                  (std::uint64_t{data[off + 2]} << 8) | data[off + 3];
        const bool iend = data[off + 4] == 'I' && data[off + 5] == 'E' && data[off + 6] == 'N' && data[off + 7] == 'D';
        if (len > data.size() - off - 12) return std::nullopt;
        off += 12 + len;
        if (iend) return off;
    }
    return std::nullopt;
}

std::optional<std::size_t> bmp_boundary(ByteView data) noexcept {
    if (data.size() < 14) return std::nullopt;
    const std::size_t declared = std::size_t{data[2]} | (std::size_t{data[3]} << 8) |
                                 (std::size_t{data[4]} << 16) | (std::size_t{data[5]} << 24);
    if (declared < 14 || declared > data.size()) return std::nullopt;
    return declared;
}

}  // namespace

std::string_view to_string(HostFormat f) noexcept {
    switch (f) {
        case HostFormat::Jpeg: return "jpeg";
        case HostFormat::Png: return "png";
        case HostFormat::Bmp: return "bmp";
        case HostFormat::Unknown: break;
    }
    return "unknown";
}

std::string_view to_string(TrailerKind k) noexcept {
    switch (k) {
        case TrailerKind::Zip: return "zip";
        case TrailerKind::Text: return "text";
        case TrailerKind::Unknown: break;
    }
    return "unknown";
}

Bytes append_embed(ByteView cover, ByteView payload) {
    if (cover.empty()) throw Error(ErrorCode::InvalidArgument, "cover file is empty");
    Bytes out;
    out.reserve(cover.size() + payload.size());
    out.insert(out.end(), cover.begin(), cover.end());
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

HostFormat detect_host(ByteView data) noexcept {
    if (data.size() >= 2 && data[0] == 0xFF && data[1] == 0xD8) return HostFormat::Jpeg;
    if (starts_with(data, kPngSignature)) return HostFormat::Png;
    if (data.size() >= 2 && data[0] == 'B' && data[1] == 'M') return HostFormat::Bmp;
    return HostFormat::Unknown;
}

std::optional<std::size_t> host_boundary(ByteView data) noexcept {
    switch (detect_host(data)) {
        case HostFormat::Jpeg: return jpeg_boundary(data);
        case HostFormat::Png: return png_boundary(data);
        case HostFormat::Bmp: return bmp_boundary(data);
        case HostFormat::Unknown: break;
    }
    return std::nullopt;
}

TrailerKind classify_trailer(ByteView trailer) noexcept {
    if (starts_with(trailer, kZipLocalHeader)) return TrailerKind::Zip;
    const bool text = !trailer.empty() && std::all_of(trailer.begin(), trailer.end(), [](std::uint8_t c) {
        return (c >= 0x20 && c <= 0x7E) || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
    });
    return text ? TrailerKind::Text : TrailerKind::Unknown;
}

std::optional<TrailerFinding> scan_trailer(ByteView data) noexcept {
    const auto boundary = host_boundary(data);
    if (!boundary || *boundary >= data.size()) return std::nullopt;
    return TrailerFinding{detect_host(data), *boundary, classify_trailer(data.subspan(*boundary))};
}

Bytes extract_trailer(ByteView data) {
    const auto finding = scan_trailer(data);
    if (!finding) throw Error(ErrorCode::NoTrailer, "no data found past the host file's end marker");
    return Bytes(data.begin() + static_cast<std::ptrdiff_t>(finding->trailer_offset), data.end());
}

}  // namespace stegkit
