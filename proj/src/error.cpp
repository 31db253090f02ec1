#include "stegkit/error.hpp"

namespace stegkit {

std::string_view error_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::NoMagic: return "NoMagic";
        case ErrorCode::CorruptFrame: return "CorruptFrame";
        case ErrorCode::CapacityExceeded: return "CapacityExceeded";
        case ErrorCode::UnsupportedBmp: return "UnsupportedBmp";
        case ErrorCode::UnsupportedWav: return "UnsupportedWav";
        case ErrorCode::Truncated: return "Truncated";
        case ErrorCode::NoTrailer: return "NoTrailer";
        case ErrorCode::UnsupportedChar: return "UnsupportedChar";
        case ErrorCode::AudioTooShort: return "AudioTooShort";
        case ErrorCode::MalformedPacket: return "MalformedPacket";
        case ErrorCode::FieldOutOfRange: return "FieldOutOfRange";
        case ErrorCode::BadMagic: return "BadMagic";
        case ErrorCode::AlphabetTooSmall: return "AlphabetTooSmall";
        case ErrorCode::UnknownLetter: return "UnknownLetter";
        case ErrorCode::DanglingBits: return "DanglingBits";
        case ErrorCode::NotDivisible: return "NotDivisible";
        case ErrorCode::MalformedCsv: return "MalformedCsv";
        case ErrorCode::InvalidTable: return "InvalidTable";
        case ErrorCode::ValueOverflow: return "ValueOverflow";
        case ErrorCode::MalformedKey: return "MalformedKey";
        case ErrorCode::MalformedScf: return "MalformedScf";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code), detail_(detail) {}

}  // namespace stegkit
