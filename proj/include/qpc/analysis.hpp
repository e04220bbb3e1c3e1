#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "qpc/codec.hpp"
#include "qpc/image.hpp"
#include "qpc/metrics.hpp"

namespace qpc {

struct ChannelHistogram {
    std::string channel;  // "r", "g", "b" or "gray"
    std::array<uint64_t, 256> bins{};
};

// One histogram per channel, bins indexed by intensity.
std::vector<ChannelHistogram> channel_histograms(const RasterImage& img);

std::string histogram_csv(const ChannelHistogram& h);

// Per-pixel sum of absolute channel deltas; values lie in [0, 6] for RGB
// pairs and [0, 2] for grayscale pairs.
struct Heatmap {
    uint32_t width = 0;
    uint32_t height = 0;
    std::vector<uint8_t> values;

    uint64_t nonzero_count() const noexcept;
};

Heatmap heatmap(const RasterImage& cover, const RasterImage& stego);

// Sparse CSV of the nonzero cells, row-major: x,y,value.
std::string heatmap_csv(const Heatmap& h);

// Grayscale rendering with [0,6] stretched to [0,255], rounding half up.
RasterImage heatmap_image(const Heatmap& h);

struct UtilizationBreakdown {
    uint64_t pixels_used = 0;
    uint64_t pixels_skipped = 0;
    uint64_t pixels_unused = 0;
    uint64_t total_pixels = 0;
    double used_pct = 0.0;
    double skipped_pct = 0.0;
    double unused_pct = 0.0;
};

UtilizationBreakdown utilization_breakdown(const EmbedReport& report);

// Combined document: {"image": {...}, "metrics": {...}, "embedding": {...}}.
std::string report_bundle_json(const RasterImage& image,
                               const MetricsReport& metrics,
                               const EmbedReport& embedding);

// Writes histograms for both images, the difference heatmap (CSV and PNG),
// and report.json into outdir; returns the paths written.
std::vector<std::filesystem::path> emit_report(const RasterImage& cover,
                                               const RasterImage& stego,
                                               const MetricsReport& metrics,
                                               const EmbedReport& embedding,
                                               const std::filesystem::path& outdir);

} // namespace qpc
