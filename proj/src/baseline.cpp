#include "qpc/baseline.hpp"

#include <stdexcept>
#include <string>

namespace qpc {

BaselineMethod baseline_method_from_name(std::string_view name) {
    if (name == "lsb") return BaselineMethod::lsb;
    if (name == "msb") return BaselineMethod::msb;
    if (name == "proposed") return BaselineMethod::proposed;
    raise(errc::unknown_method,
          "no such embedding method: " + std::string(name) +
          " (expected lsb, msb or proposed)");
}

const char* baseline_method_name(BaselineMethod method) {
    switch (method) {
    case BaselineMethod::lsb:      return "lsb";
    case BaselineMethod::msb:      return "msb";
    case BaselineMethod::proposed: return "proposed";
    }
    return "?";
}

int pixels_per_character(BaselineMethod method, uint32_t channels) {
    if (channels != 1 && channels != 3)
        raise(errc::channel_mismatch, "images carry 1 or 3 channels, got " +
                                      std::to_string(channels));
    switch (method) {
    case BaselineMethod::lsb:
    case BaselineMethod::msb:
        // 8 bits per character, one bit per channel sample.
        return channels == 1 ? 8 : 3;
    case BaselineMethod::proposed:
        return channels == 1 ? 3 : 1;
    }
    return 0;
}

RasterImage lsb_encode(const RasterImage& cover, std::span<const uint8_t> text) {
    for (uint8_t b : text)
        if (b == 0)
            throw std::invalid_argument("LSB payload must not contain NUL bytes");

    uint64_t bits_needed = (static_cast<uint64_t>(text.size()) + 1) * 8;
    if (bits_needed > cover.sample_count())
        raise(errc::capacity_exceeded,
              "message needs " + std::to_string(bits_needed) +
              " sample slots (sentinel included) but the cover offers " +
              std::to_string(cover.sample_count()));

    RasterImage stego = cover;
    size_t slot = 0;
    auto put_byte = [&](uint8_t byte) {
        for (int bit = 7; bit >= 0; --bit, ++slot)
            stego.samples[slot] = static_cast<uint8_t>(
                (stego.samples[slot] & 0xFEu) | (byte >> bit & 1u));
    };
    for (uint8_t b : text) put_byte(b);
    put_byte(0);
    return stego;
}

std::vector<uint8_t> lsb_decode(const RasterImage& stego) {
    std::vector<uint8_t> out;
    size_t n = stego.sample_count();
    for (size_t slot = 0; slot + 8 <= n; slot += 8) {
        uint8_t byte = 0;
        for (size_t k = 0; k < 8; ++k)
            byte = static_cast<uint8_t>(byte << 1 | (stego.samples[slot + k] & 1u));
        if (byte == 0) return out;
        out.push_back(byte);
    }
    raise(errc::missing_terminator,
          "ran out of samples without finding the NUL sentinel");
}

} // namespace qpc
