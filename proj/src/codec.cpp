#include "qpc/codec.hpp"

#include <cstdio>

#include <json.hpp>

#include "qpc/kernels.hpp"

namespace qpc {

namespace {

std::string pixel_label(const RasterImage& img, size_t linear) {
    PixelRef ref = PixelRef::from_linear(img, linear);
    return "pixel " + std::to_string(linear) + " (" + std::to_string(ref.x) +
           "," + std::to_string(ref.y) + ")";
}

void require_channels(const RasterImage& img, uint32_t channels,
                      const char* role) {
    if (img.channels != channels)
        raise(errc::channel_mismatch,
              std::string(role) + " must have " + std::to_string(channels) +
              " channel(s), got " + std::to_string(img.channels));
}

int delta_at(const RasterImage& cover, const RasterImage& stego, size_t sample) {
    return static_cast<int>(stego.samples[sample]) -
           static_cast<int>(cover.samples[sample]);
}

QuinaryDelta checked_delta(const RasterImage& cover, const RasterImage& stego,
                           size_t pixel, uint32_t channel) {
    size_t sample = pixel * cover.channels + channel;
    int d = delta_at(cover, stego, sample);
    if (d < -2 || d > 2)
        raise(errc::delta_out_of_range,
              pixel_label(cover, pixel) + " channel " + std::to_string(channel) +
              " differs by " + std::to_string(d));
    return QuinaryDelta(d);
}

} // namespace

UsabilityMask usable_mask(const RasterImage& cover) {
    const auto& ops = kernels::active_ops();
    UsabilityMask mask;
    size_t pixels = cover.pixel_count();
    mask.usable.resize(pixels);

    if (cover.channels == 1) {
        ops.in_range_mask(cover.samples.data(), pixels, kUsableMin, kUsableMax,
                          mask.usable.data());
    } else {
        require_channels(cover, 3, "cover");
        std::vector<uint8_t> per_sample(cover.sample_count());
        ops.in_range_mask(cover.samples.data(), per_sample.size(), kUsableMin,
                          kUsableMax, per_sample.data());
        for (size_t p = 0; p < pixels; ++p)
            mask.usable[p] = per_sample[p * 3] & per_sample[p * 3 + 1] &
                             per_sample[p * 3 + 2];
    }
    for (size_t p = 0; p < pixels; ++p) mask.usable_count += mask.usable[p];
    return mask;
}

uint64_t capacity(const RasterImage& cover) {
    require_channels(cover, 3, "cover");
    uint64_t usable = usable_mask(cover).usable_count;
    return usable == 0 ? 0 : usable - 1;
}

uint64_t capacity_grayscale(const RasterImage& cover) {
    require_channels(cover, 1, "cover");
    uint64_t groups = usable_mask(cover).usable_count / 3;
    return groups == 0 ? 0 : groups - 1;
}

EncodeResult encode(const RasterImage& cover, std::span<const Symbol> symbols,
                    const Codebook& cb) {
    require_channels(cover, 3, "cover");
    UsabilityMask mask = usable_mask(cover);

    uint64_t needed = symbols.size() + 1;  // terminator travels too
    if (needed > mask.usable_count)
        raise(errc::capacity_exceeded,
              "message needs " + std::to_string(needed) +
              " usable pixels (terminator included) but the cover offers " +
              std::to_string(mask.usable_count));

    EncodeResult result{cover, {}};
    EmbedReport& report = result.report;
    report.total_pixels = cover.pixel_count();
    report.payload_count = needed;

    size_t next = 0;  // index of the next symbol to place
    for (size_t p = 0; p < mask.usable.size(); ++p) {
        if (!mask.usable[p]) {
            ++report.pixels_skipped;
            continue;
        }
        PerturbationTriplet t = next < symbols.size()
                                    ? cb.triplet_for(symbols[next])
                                    : cb.triplet_for(Symbol::terminator());
        uint8_t* px = result.stego.samples.data() + p * 3;
        px[0] = static_cast<uint8_t>(px[0] + t.dr.value());
        px[1] = static_cast<uint8_t>(px[1] + t.dg.value());
        px[2] = static_cast<uint8_t>(px[2] + t.db.value());
        if (++next == needed) break;
    }

    report.pixels_used = needed;
    report.pixels_unused =
        report.total_pixels - report.pixels_used - report.pixels_skipped;
    return result;
}

std::vector<Symbol> decode(const RasterImage& cover, const RasterImage& stego,
                           const Codebook& cb) {
    require_channels(cover, 3, "cover");
    require_same_shape(cover, stego);
    UsabilityMask mask = usable_mask(cover);

    std::vector<Symbol> out;
    for (size_t p = 0; p < mask.usable.size(); ++p) {
        if (!mask.usable[p]) continue;
        PerturbationTriplet t{checked_delta(cover, stego, p, 0),
                              checked_delta(cover, stego, p, 1),
                              checked_delta(cover, stego, p, 2)};
        int idx = cb.symbol_index_for_lex(t.lex_index());
        if (idx < 0)
            raise(errc::unassigned_combination,
                  pixel_label(cover, p) + " carries unassigned triplet (" +
                  std::to_string(t.dr.value()) + "," + std::to_string(t.dg.value()) +
                  "," + std::to_string(t.db.value()) + ")");
        Symbol s = Symbol::from_index(idx);
        if (s == Symbol::terminator()) return out;
        out.push_back(s);
    }
    raise(errc::missing_terminator,
          "ran out of usable pixels without finding a terminator");
}

EncodeResult encode_grayscale(const RasterImage& cover,
                              std::span<const Symbol> symbols,
                              const Codebook& cb) {
    require_channels(cover, 1, "cover");
    UsabilityMask mask = usable_mask(cover);

    uint64_t needed_symbols = symbols.size() + 1;
    uint64_t needed_pixels = needed_symbols * 3;
    if (needed_pixels > mask.usable_count)
        raise(errc::capacity_exceeded,
              "message needs " + std::to_string(needed_pixels) +
              " usable pixels (terminator included) but the cover offers " +
              std::to_string(mask.usable_count));

    EncodeResult result{cover, {}};
    EmbedReport& report = result.report;
    report.total_pixels = cover.pixel_count();
    report.payload_count = needed_symbols;

    size_t next = 0;      // symbol being spread
    int component = 0;    // which of its three deltas goes next
    uint64_t placed = 0;
    for (size_t p = 0; p < mask.usable.size() && placed < needed_pixels; ++p) {
        if (!mask.usable[p]) {
            ++report.pixels_skipped;
            continue;
        }
        PerturbationTriplet t = next < symbols.size()
                                    ? cb.triplet_for(symbols[next])
                                    : cb.triplet_for(Symbol::terminator());
        int d = component == 0   ? t.dr.value()
                : component == 1 ? t.dg.value()
                                 : t.db.value();
        result.stego.samples[p] = static_cast<uint8_t>(result.stego.samples[p] + d);
        ++placed;
        if (++component == 3) {
            component = 0;
            ++next;
        }
    }

    report.pixels_used = needed_pixels;
    report.pixels_unused =
        report.total_pixels - report.pixels_used - report.pixels_skipped;
    return result;
}

std::vector<Symbol> decode_grayscale(const RasterImage& cover,
                                     const RasterImage& stego,
                                     const Codebook& cb) {
    require_channels(cover, 1, "cover");
    require_same_shape(cover, stego);
    UsabilityMask mask = usable_mask(cover);

    std::vector<Symbol> out;
    QuinaryDelta group[3];
    int filled = 0;
    for (size_t p = 0; p < mask.usable.size(); ++p) {
        if (!mask.usable[p]) continue;
        group[filled++] = checked_delta(cover, stego, p, 0);
        if (filled < 3) continue;
        filled = 0;
        PerturbationTriplet t{group[0], group[1], group[2]};
        int idx = cb.symbol_index_for_lex(t.lex_index());
        if (idx < 0)
            raise(errc::unassigned_combination,
                  "group ending at " + pixel_label(cover, p) +
                  " carries unassigned triplet (" + std::to_string(t.dr.value()) +
                  "," + std::to_string(t.dg.value()) + "," +
                  std::to_string(t.db.value()) + ")");
        Symbol s = Symbol::from_index(idx);
        if (s == Symbol::terminator()) return out;
        out.push_back(s);
    }
    if (filled != 0)
        raise(errc::incomplete_group,
              "usable pixels end mid-group (" + std::to_string(filled) +
              " of 3 deltas) before a terminator");
    raise(errc::missing_terminator,
          "ran out of usable pixels without finding a terminator");
}

std::string embed_report_json(const EmbedReport& report) {
    char util[32];
    std::snprintf(util, sizeof(util), "%.4f", report.utilization_pct());
    nlohmann::ordered_json j{
        {"total_pixels", report.total_pixels},
        {"payload_count", report.payload_count},
        {"pixels_used", report.pixels_used},
        {"pixels_skipped", report.pixels_skipped},
        {"pixels_unused", report.pixels_unused},
        {"utilization_pct", nlohmann::ordered_json::parse(util)},
    };
    return j.dump(2);
}

} // namespace qpc
