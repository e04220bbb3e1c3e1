#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qpc/codebook.hpp"
#include "qpc/image.hpp"

namespace qpc {

// A pixel can absorb any triplet without clipping iff every channel sits in
// [2, 253]; outside that band the +/-2 swing could leave [0, 255].
inline constexpr uint8_t kUsableMin = 2;
inline constexpr uint8_t kUsableMax = 253;

struct UsabilityMask {
    std::vector<uint8_t> usable;  // one 0/1 flag per pixel, row-major
    uint64_t usable_count = 0;
};

// Derived solely from the cover, so encoder and decoder agree on which
// pixels participate. Works for 1- and 3-channel images.
UsabilityMask usable_mask(const RasterImage& cover);

// Symbols a cover can carry, excluding the terminator reserve.
uint64_t capacity(const RasterImage& cover);            // RGB: one pixel/symbol
uint64_t capacity_grayscale(const RasterImage& cover);  // gray: three pixels/symbol

struct EmbedReport {
    uint64_t total_pixels = 0;
    uint64_t payload_count = 0;   // symbols embedded, terminator included
    uint64_t pixels_used = 0;
    uint64_t pixels_skipped = 0;  // unusable pixels passed over before the end
    uint64_t pixels_unused = 0;

    double utilization_pct() const noexcept {
        return total_pixels == 0
                   ? 0.0
                   : 100.0 * static_cast<double>(payload_count) /
                         static_cast<double>(total_pixels);
    }
};

std::string embed_report_json(const EmbedReport& report);

struct EncodeResult {
    RasterImage stego;
    EmbedReport report;
};

// One symbol per usable RGB pixel, terminator appended, row-major order.
EncodeResult encode(const RasterImage& cover, std::span<const Symbol> symbols,
                    const Codebook& cb = codebook());

// Recovers the symbol stream by differencing stego against cover. The
// terminator is consumed, not returned.
std::vector<Symbol> decode(const RasterImage& cover, const RasterImage& stego,
                           const Codebook& cb = codebook());

// Grayscale variant: each symbol spreads its triplet over the next three
// usable pixels.
EncodeResult encode_grayscale(const RasterImage& cover,
                              std::span<const Symbol> symbols,
                              const Codebook& cb = codebook());

std::vector<Symbol> decode_grayscale(const RasterImage& cover,
                                     const RasterImage& stego,
                                     const Codebook& cb = codebook());

} // namespace qpc
