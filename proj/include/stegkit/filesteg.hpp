#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "stegkit/bitcodec.hpp"

namespace stegkit {

enum class HostFormat { Jpeg, Png, Bmp, Unknown };
enum class TrailerKind { Zip, Text, Unknown };

std::string_view to_string(HostFormat f) noexcept;
std::string_view to_string(TrailerKind k) noexcept;

// Data found after the point where the host file format says the file ends.
struct TrailerFinding {
    HostFormat host_format = HostFormat::Unknown;
    std::size_t trailer_offset = 0;
    TrailerKind trailer_kind = TrailerKind::Unknown;

    bool operator==(const TrailerFinding&) const = default;
};

// cover || payload, byte for byte. Throws InvalidArgument on an empty cover.
Bytes append_embed(ByteView cover, ByteView payload);

HostFormat detect_host(ByteView data) noexcept;

// Offset one past the host's last byte as declared by the format itself:
// JPEG last EOI + 2, PNG end of the IEND chunk's CRC, BMP header file size.
// nullopt when the format is not recognised or its structure is broken.
std::optional<std::size_t> host_boundary(ByteView data) noexcept;

TrailerKind classify_trailer(ByteView trailer) noexcept;

// nullopt when the host is unrecognised or nothing follows its boundary.
std::optional<TrailerFinding> scan_trailer(ByteView data) noexcept;

// Everything from the trailer offset on. Throws NoTrailer.
Bytes extract_trailer(ByteView data);

}  // namespace stegkit
