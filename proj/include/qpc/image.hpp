#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "qpc/errors.hpp"

namespace qpc {

// 8-bit raster with 1 (gray) or 3 (RGB) interleaved channels, row-major,
// origin at the top-left.
struct RasterImage {
    uint32_t width = 0;
    uint32_t height = 0;
    uint32_t channels = 0;
    std::vector<uint8_t> samples;

    static RasterImage create(uint32_t w, uint32_t h, uint32_t c, uint8_t fill = 0);

    size_t pixel_count() const noexcept {
        return static_cast<size_t>(width) * height;
    }
    size_t sample_count() const noexcept { return pixel_count() * channels; }

    uint8_t at(uint32_t x, uint32_t y, uint32_t c = 0) const {
        return samples[(static_cast<size_t>(y) * width + x) * channels + c];
    }
    uint8_t& at(uint32_t x, uint32_t y, uint32_t c = 0) {
        return samples[(static_cast<size_t>(y) * width + x) * channels + c];
    }

    bool same_shape(const RasterImage& o) const noexcept {
        return width == o.width && height == o.height && channels == o.channels;
    }
};

// Position of a row-major pixel index, for diagnostics.
struct PixelRef {
    uint32_t x = 0;
    uint32_t y = 0;
    size_t linear = 0;

    static PixelRef from_linear(const RasterImage& img, size_t linear) noexcept {
        return {static_cast<uint32_t>(linear % img.width),
                static_cast<uint32_t>(linear / img.width), linear};
    }
};

// Supported containers: PNG (8-bit gray/RGB; palette expanded, alpha dropped),
// BMP (24-bit uncompressed), PPM/PGM (binary, maxval <= 255). JPEG input is
// refused because recompression would destroy the embedded deltas.
RasterImage load_image(const std::filesystem::path& path);

// Format chosen by extension: .png, .bmp (RGB only), .ppm (RGB), .pgm (gray).
void save_image(const RasterImage& img, const std::filesystem::path& path);

// BT.601 integer luma reduction of an RGB image; gray images pass through.
RasterImage to_grayscale(const RasterImage& img);

// Raises DimensionMismatch / ChannelMismatch unless both images agree.
void require_same_shape(const RasterImage& a, const RasterImage& b);

} // namespace qpc
