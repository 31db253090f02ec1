#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stegkit {

enum class ErrorCode {
    InvalidArgument,
    NoMagic,
    CorruptFrame,
    CapacityExceeded,
    UnsupportedBmp,
    UnsupportedWav,
    Truncated,
    NoTrailer,
    UnsupportedChar,
    AudioTooShort,
    MalformedPacket,
    FieldOutOfRange,
    BadMagic,
    AlphabetTooSmall,
    UnknownLetter,
    DanglingBits,
    NotDivisible,
    MalformedCsv,
    InvalidTable,
    ValueOverflow,
    MalformedKey,
    MalformedScf,
    Io,
};

std::string_view error_name(ErrorCode code) noexcept;

// Single exception type for the whole toolkit. The code identifies the
// failure class; what() carries the human-readable detail.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail);

    ErrorCode code() const noexcept { return code_; }
    std::string_view name() const noexcept { return error_name(code_); }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

}  // namespace stegkit
