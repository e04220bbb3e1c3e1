#include "qpc/analysis.hpp"

#include <fstream>

#include <json.hpp>

#include "qpc/kernels.hpp"

namespace qpc {

std::vector<ChannelHistogram> channel_histograms(const RasterImage& img) {
    std::vector<ChannelHistogram> out(img.channels);
    if (img.channels == 1) {
        out[0].channel = "gray";
    } else {
        out[0].channel = "r";
        out[1].channel = "g";
        out[2].channel = "b";
    }
    const uint8_t* s = img.samples.data();
    size_t n = img.sample_count();
    for (size_t i = 0; i < n; i += img.channels)
        for (uint32_t c = 0; c < img.channels; ++c)
            ++out[c].bins[s[i + c]];
    return out;
}

std::string histogram_csv(const ChannelHistogram& h) {
    std::string out = "intensity,count\n";
    for (int v = 0; v < 256; ++v) {
        out += std::to_string(v);
        out += ',';
        out += std::to_string(h.bins[static_cast<size_t>(v)]);
        out += '\n';
    }
    return out;
}

uint64_t Heatmap::nonzero_count() const noexcept {
    uint64_t n = 0;
    for (uint8_t v : values) n += v != 0;
    return n;
}

Heatmap heatmap(const RasterImage& cover, const RasterImage& stego) {
    require_same_shape(cover, stego);
    const auto& ops = kernels::active_ops();

    Heatmap h;
    h.width = cover.width;
    h.height = cover.height;

    std::vector<uint8_t> per_sample(cover.sample_count());
    ops.abs_diff(cover.samples.data(), stego.samples.data(), per_sample.size(),
                 per_sample.data());
    if (cover.channels == 1) {
        h.values = std::move(per_sample);
    } else {
        h.values.resize(cover.pixel_count());
        for (size_t p = 0; p < h.values.size(); ++p)
            h.values[p] = static_cast<uint8_t>(per_sample[p * 3] +
                                               per_sample[p * 3 + 1] +
                                               per_sample[p * 3 + 2]);
    }
    return h;
}

std::string heatmap_csv(const Heatmap& h) {
    std::string out = "x,y,value\n";
    for (uint32_t y = 0; y < h.height; ++y) {
        for (uint32_t x = 0; x < h.width; ++x) {
            uint8_t v = h.values[static_cast<size_t>(y) * h.width + x];
            if (v == 0) continue;
            out += std::to_string(x);
            out += ',';
            out += std::to_string(y);
            out += ',';
            out += std::to_string(v);
            out += '\n';
        }
    }
    return out;
}

RasterImage heatmap_image(const Heatmap& h) {
    RasterImage img = RasterImage::create(h.width, h.height, 1);
    for (size_t i = 0; i < h.values.size(); ++i)
        img.samples[i] = static_cast<uint8_t>((h.values[i] * 255u + 3u) / 6u);
    return img;
}

UtilizationBreakdown utilization_breakdown(const EmbedReport& report) {
    UtilizationBreakdown b;
    b.pixels_used = report.pixels_used;
    b.pixels_skipped = report.pixels_skipped;
    b.pixels_unused = report.pixels_unused;
    b.total_pixels = report.total_pixels;
    if (report.total_pixels != 0) {
        double total = static_cast<double>(report.total_pixels);
        b.used_pct = 100.0 * static_cast<double>(report.pixels_used) / total;
        b.skipped_pct = 100.0 * static_cast<double>(report.pixels_skipped) / total;
        b.unused_pct = 100.0 * static_cast<double>(report.pixels_unused) / total;
    }
    return b;
}

std::string report_bundle_json(const RasterImage& image,
                               const MetricsReport& metrics,
                               const EmbedReport& embedding) {
    nlohmann::ordered_json j;
    j["image"] = {{"width", image.width},
                  {"height", image.height},
                  {"channels", image.channels}};
    j["metrics"] = nlohmann::ordered_json::parse(metrics_report_json(metrics));
    j["embedding"] = nlohmann::ordered_json::parse(embed_report_json(embedding));
    return j.dump(2);
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        raise(errc::io_error, "cannot create " + path.string());
    out << text;
    if (!out)
        raise(errc::io_error, "write error on " + path.string());
}

} // namespace

std::vector<std::filesystem::path> emit_report(const RasterImage& cover,
                                               const RasterImage& stego,
                                               const MetricsReport& metrics,
                                               const EmbedReport& embedding,
                                               const std::filesystem::path& outdir) {
    require_same_shape(cover, stego);
    std::error_code ec;
    std::filesystem::create_directories(outdir, ec);
    if (ec)
        raise(errc::io_error, "cannot create " + outdir.string() + ": " + ec.message());

    std::vector<std::filesystem::path> written;
    auto emit = [&](const std::filesystem::path& name, const std::string& text) {
        std::filesystem::path p = outdir / name;
        write_text(p, text);
        written.push_back(p);
    };

    for (const auto& h : channel_histograms(cover))
        emit("hist_cover_" + h.channel + ".csv", histogram_csv(h));
    for (const auto& h : channel_histograms(stego))
        emit("hist_stego_" + h.channel + ".csv", histogram_csv(h));

    Heatmap h = heatmap(cover, stego);
    emit("heatmap.csv", heatmap_csv(h));

    std::filesystem::path png = outdir / "heatmap.png";
    save_image(heatmap_image(h), png);
    written.push_back(png);

    emit("report.json", report_bundle_json(cover, metrics, embedding) + "\n");
    return written;
}

} // namespace qpc
