#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "qpc/image.hpp"

namespace qpc {

enum class BaselineMethod { lsb, msb, proposed };

BaselineMethod baseline_method_from_name(std::string_view name);
const char* baseline_method_name(BaselineMethod method);

// Pixels touched per embedded character for each scheme, for 1- or
// 3-channel covers. One bit per channel for the bit-plane schemes, one
// triplet per character for the proposed scheme.
int pixels_per_character(BaselineMethod method, uint32_t channels);

// Classic LSB embedding: message bytes plus a NUL sentinel, bits MSB-first,
// one bit into the LSB of each sample in storage order. Bytes must be
// nonzero (the sentinel must stay unambiguous).
RasterImage lsb_encode(const RasterImage& cover, std::span<const uint8_t> text);

std::vector<uint8_t> lsb_decode(const RasterImage& stego);

} // namespace qpc
