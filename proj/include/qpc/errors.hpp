#pragma once

#include <stdexcept>
#include <string>

namespace qpc {

enum class errc {
    capacity_exceeded,
    unmappable_character,
    missing_terminator,
    delta_out_of_range,
    unassigned_combination,
    dimension_mismatch,
    channel_mismatch,
    incomplete_group,
    image_too_small,
    empty_reference,
    unknown_method,
    io_error,
    unsupported_format,
    bit_depth_unsupported,
};

// Stable PascalCase tag used in JSON error output and messages.
inline const char* errc_name(errc code) noexcept {
    switch (code) {
    case errc::capacity_exceeded:      return "CapacityExceeded";
    case errc::unmappable_character:   return "UnmappableCharacter";
    case errc::missing_terminator:     return "MissingTerminator";
    case errc::delta_out_of_range:     return "DeltaOutOfRange";
    case errc::unassigned_combination: return "UnassignedCombination";
    case errc::dimension_mismatch:     return "DimensionMismatch";
    case errc::channel_mismatch:       return "ChannelMismatch";
    case errc::incomplete_group:       return "IncompleteGroup";
    case errc::image_too_small:        return "ImageTooSmall";
    case errc::empty_reference:        return "EmptyReference";
    case errc::unknown_method:         return "UnknownMethod";
    case errc::io_error:               return "IoError";
    case errc::unsupported_format:     return "UnsupportedFormat";
    case errc::bit_depth_unsupported:  return "BitDepthUnsupported";
    }
    return "Error";
}

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message),
          code_(code) {}

    errc code() const noexcept { return code_; }

    // Message without the "Name: " prefix, for structured output.
    std::string detail() const {
        std::string full = what();
        auto pos = full.find(": ");
        return pos == std::string::npos ? full : full.substr(pos + 2);
    }

private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& message) {
    throw Error(code, message);
}

} // namespace qpc
