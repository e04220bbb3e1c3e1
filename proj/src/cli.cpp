#include "qpc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qpc/analysis.hpp"
#include "qpc/baseline.hpp"
#include "qpc/codebook.hpp"
#include "qpc/codec.hpp"
#include "qpc/image.hpp"
#include "qpc/metrics.hpp"

namespace qpc::cli {

namespace {

using nlohmann::ordered_json;

int exit_code_for(errc code) {
    switch (code) {
    case errc::capacity_exceeded:
        return 2;
    case errc::unmappable_character:
        return 3;
    case errc::missing_terminator:
    case errc::delta_out_of_range:
    case errc::unassigned_combination:
    case errc::dimension_mismatch:
    case errc::channel_mismatch:
    case errc::incomplete_group:
    case errc::image_too_small:
        return 4;
    case errc::io_error:
    case errc::unsupported_format:
    case errc::bit_depth_unsupported:
        return 5;
    case errc::empty_reference:
    case errc::unknown_method:
        return 64;
    }
    return 1;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        raise(errc::io_error, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad())
        raise(errc::io_error, "read error on " + path.string());
    return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        raise(errc::io_error, "cannot create " + path.string());
    out << text;
    if (!out)
        raise(errc::io_error, "write error on " + path.string());
}

std::string fmt_double(double v, int decimals) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

std::vector<Symbol> decode_auto(const RasterImage& cover, const RasterImage& stego) {
    return cover.channels == 1 ? decode_grayscale(cover, stego)
                               : decode(cover, stego);
}

// ---------------------------------------------------------------------------
// Subcommand handlers
// ---------------------------------------------------------------------------

struct EncodeOpts {
    std::string cover, text, out, report;
    bool lossy = false;
    bool force_gray = false;
    bool json = false;
};

int cmd_encode(const EncodeOpts& o, std::ostream& out) {
    std::string raw = read_text_file(o.text);
    NormalizedText norm =
        normalize_text(raw, o.lossy ? NormalizeMode::lossy : NormalizeMode::strict);
    std::vector<Symbol> symbols = tokenize(norm.text);

    RasterImage cover = load_image(o.cover);
    if (o.force_gray) cover = to_grayscale(cover);

    EncodeResult res = cover.channels == 1 ? encode_grayscale(cover, symbols)
                                           : encode(cover, symbols);
    save_image(res.stego, o.out);
    if (!o.report.empty())
        write_text_file(o.report, embed_report_json(res.report) + "\n");

    if (o.json) {
        ordered_json j;
        j["stego"] = o.out;
        j["embedding"] = ordered_json::parse(embed_report_json(res.report));
        j["normalization"] = {{"substitutions", norm.log.substitutions.size()},
                              {"rejected", norm.log.rejected.size()}};
        if (!o.report.empty()) j["report"] = o.report;
        out << j.dump(2) << "\n";
    } else {
        const EmbedReport& r = res.report;
        out << "stego written to " << o.out << "\n"
            << "symbols embedded: " << r.payload_count
            << " (terminator included)\n"
            << "pixels: " << r.pixels_used << " used, " << r.pixels_skipped
            << " skipped, " << r.pixels_unused << " unused, " << r.total_pixels
            << " total\n"
            << "utilization: " << fmt_double(r.utilization_pct(), 4) << "%\n";
        if (!norm.log.substitutions.empty() || !norm.log.rejected.empty())
            out << "normalization: " << norm.log.substitutions.size()
                << " substitutions, " << norm.log.rejected.size()
                << " rejected\n";
        if (!o.report.empty()) out << "report written to " << o.report << "\n";
    }
    return 0;
}

struct DecodeOpts {
    std::string cover, stego, out;
    bool json = false;
};

int cmd_decode(const DecodeOpts& o, std::ostream& out) {
    RasterImage cover = load_image(o.cover);
    RasterImage stego = load_image(o.stego);
    std::vector<Symbol> symbols = decode_auto(cover, stego);
    std::string text = detokenize(symbols);

    if (!o.out.empty()) write_text_file(o.out, text);

    if (o.json) {
        ordered_json j;
        j["symbols"] = symbols.size();
        j["characters"] = text.size();
        j["text"] = text;
        if (!o.out.empty()) j["out"] = o.out;
        out << j.dump(2) << "\n";
    } else if (!o.out.empty()) {
        out << "decoded " << symbols.size() << " symbols (" << text.size()
            << " bytes) to " << o.out << "\n";
    } else {
        out << text;
    }
    return 0;
}

struct MetricsOpts {
    std::string cover, stego, reference;
    bool json = false;
};

int cmd_metrics(const MetricsOpts& o, std::ostream& out) {
    RasterImage cover = load_image(o.cover);
    RasterImage stego = load_image(o.stego);
    MetricsReport r = MetricsReport::measure(cover, stego);

    if (!o.reference.empty()) {
        std::string reference = read_text_file(o.reference);
        std::string recovered = detokenize(decode_auto(cover, stego));
        r.cer = cer(reference, recovered);
        r.wer = wer(reference, recovered);
    }

    if (o.json) {
        out << metrics_report_json(r) << "\n";
    } else {
        out << "mae:     " << fmt_double(r.mae, 6) << "\n"
            << "mse:     " << fmt_double(r.mse, 6) << "\n"
            << "snr_db:  " << fmt_double(r.snr_db, 4) << "\n"
            << "psnr_db: " << fmt_double(r.psnr_db, 4) << "\n"
            << "ssim:    " << fmt_double(r.ssim, 6) << "\n";
        if (r.cer) out << "cer:     " << fmt_double(*r.cer, 6) << "\n";
        if (r.wer) out << "wer:     " << fmt_double(*r.wer, 6) << "\n";
    }
    return 0;
}

struct AnalyzeOpts {
    std::string cover, stego, outdir;
    bool json = false;
};

int cmd_analyze(const AnalyzeOpts& o, std::ostream& out) {
    RasterImage cover = load_image(o.cover);
    RasterImage stego = load_image(o.stego);

    // Re-embedding the recovered payload reproduces the placement walk and
    // with it the pixel accounting.
    std::vector<Symbol> symbols = decode_auto(cover, stego);
    EncodeResult res = cover.channels == 1 ? encode_grayscale(cover, symbols)
                                           : encode(cover, symbols);
    MetricsReport metrics = MetricsReport::measure(cover, stego);

    auto files = emit_report(cover, stego, metrics, res.report, o.outdir);

    if (o.json) {
        ordered_json j;
        j["outdir"] = o.outdir;
        j["files"] = ordered_json::array();
        for (const auto& f : files) j["files"].push_back(f.filename().string());
        j["report"] =
            ordered_json::parse(report_bundle_json(cover, metrics, res.report));
        out << j.dump(2) << "\n";
    } else {
        for (const auto& f : files) out << "wrote " << f.string() << "\n";
    }
    return 0;
}

struct CapacityOpts {
    std::string cover;
    bool force_gray = false;
    bool json = false;
};

int cmd_capacity(const CapacityOpts& o, std::ostream& out) {
    RasterImage cover = load_image(o.cover);
    if (o.force_gray) cover = to_grayscale(cover);
    UsabilityMask mask = usable_mask(cover);
    uint64_t cap = cover.channels == 1 ? capacity_grayscale(cover) : capacity(cover);

    if (o.json) {
        ordered_json j{{"capacity", cap},
                       {"channels", cover.channels},
                       {"usable_pixels", mask.usable_count},
                       {"total_pixels", cover.pixel_count()}};
        out << j.dump(2) << "\n";
    } else {
        out << cap << "\n";
    }
    return 0;
}

struct CodebookOpts {
    std::string out_path;
    bool json = false;
};

std::string symbol_token(Symbol s) {
    switch (s.kind()) {
    case SymbolKind::space:      return "SP";
    case SymbolKind::newline:    return "\\n";
    case SymbolKind::para_break: return "\\n\\n";
    case SymbolKind::terminator: return "NUL";
    case SymbolKind::printable:  break;
    }
    return std::string(1, s.character());
}

int cmd_codebook(const CodebookOpts& o, std::ostream& out) {
    const Codebook& cb = codebook();
    if (o.json) {
        ordered_json rows = ordered_json::array();
        for (int i = 0; i < kAlphabetSize; ++i) {
            Symbol s = Symbol::from_index(i);
            PerturbationTriplet t = cb.triplet_for(s);
            rows.push_back({{"symbol", symbol_token(s)},
                            {"dr", t.dr.value()},
                            {"dg", t.dg.value()},
                            {"db", t.db.value()},
                            {"index", i}});
        }
        out << rows.dump(2) << "\n";
        return 0;
    }
    std::string csv = codebook_csv(cb);
    if (!o.out_path.empty()) {
        write_text_file(o.out_path, csv);
        out << "codebook written to " << o.out_path << "\n";
    } else {
        out << csv;
    }
    return 0;
}

struct LsbEncodeOpts {
    std::string cover, text, out;
    bool json = false;
};

int cmd_lsb_encode(const LsbEncodeOpts& o, std::ostream& out) {
    std::string text = read_text_file(o.text);
    RasterImage cover = load_image(o.cover);
    RasterImage stego = lsb_encode(
        cover, std::span<const uint8_t>(
                   reinterpret_cast<const uint8_t*>(text.data()), text.size()));
    save_image(stego, o.out);

    uint64_t slots = (static_cast<uint64_t>(text.size()) + 1) * 8;
    if (o.json) {
        ordered_json j{{"stego", o.out},
                       {"bytes", text.size()},
                       {"samples_touched", slots}};
        out << j.dump(2) << "\n";
    } else {
        out << "stego written to " << o.out << "\n"
            << "bytes embedded: " << text.size() << " (+1 sentinel), "
            << slots << " samples touched\n";
    }
    return 0;
}

struct LsbDecodeOpts {
    std::string stego, out;
    bool json = false;
};

int cmd_lsb_decode(const LsbDecodeOpts& o, std::ostream& out) {
    RasterImage stego = load_image(o.stego);
    std::vector<uint8_t> bytes = lsb_decode(stego);
    std::string text(bytes.begin(), bytes.end());

    if (!o.out.empty()) write_text_file(o.out, text);

    if (o.json) {
        ordered_json j;
        j["bytes"] = bytes.size();
        j["text"] = text;
        if (!o.out.empty()) j["out"] = o.out;
        out << j.dump(2) << "\n";
    } else if (!o.out.empty()) {
        out << "decoded " << bytes.size() << " bytes to " << o.out << "\n";
    } else {
        out << text;
    }
    return 0;
}

int cmd_baseline_table(bool json, std::ostream& out) {
    constexpr BaselineMethod methods[] = {BaselineMethod::lsb, BaselineMethod::msb,
                                          BaselineMethod::proposed};
    if (json) {
        ordered_json rows = ordered_json::array();
        for (BaselineMethod m : methods)
            rows.push_back({{"method", baseline_method_name(m)},
                            {"gray_pixels_per_char", pixels_per_character(m, 1)},
                            {"rgb_pixels_per_char", pixels_per_character(m, 3)}});
        out << rows.dump(2) << "\n";
        return 0;
    }
    out << "method    gray  rgb\n";
    for (BaselineMethod m : methods) {
        char line[64];
        std::snprintf(line, sizeof(line), "%-8s  %4d %4d\n",
                      baseline_method_name(m), pixels_per_character(m, 1),
                      pixels_per_character(m, 3));
        out << line;
    }
    return 0;
}

std::string error_json(const std::string& name, const std::string& detail,
                       int exit_code) {
    ordered_json j{{"error", name}, {"detail", detail}, {"exit_code", exit_code}};
    return j.dump(2);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    bool json_mode =
        std::find(args.begin(), args.end(), "--json") != args.end();

    CLI::App app{"Text-in-image steganography via bounded intensity deltas"};
    app.name("qpcsteg");
    app.require_subcommand(1);

    int rc = 0;

    EncodeOpts eo;
    auto* enc = app.add_subcommand("encode", "Embed a text file into a cover image");
    enc->add_option("--cover", eo.cover, "Cover image (PNG/BMP/PPM/PGM)")->required();
    enc->add_option("--text", eo.text, "UTF-8 text file to embed")->required();
    enc->add_option("--out", eo.out, "Stego image output path (lossless format)")->required();
    enc->add_option("--report", eo.report, "Also write the embedding report JSON here");
    enc->add_flag("--lossy", eo.lossy, "Replace unmappable characters with '?' instead of failing");
    enc->add_flag("--force-gray", eo.force_gray, "Convert the cover to grayscale first");
    enc->add_flag("--json", eo.json, "Machine-readable output");
    enc->callback([&] { rc = cmd_encode(eo, out); });

    DecodeOpts dopt;
    auto* dec = app.add_subcommand("decode", "Recover the embedded text from a stego image");
    dec->add_option("--cover", dopt.cover, "Original cover image")->required();
    dec->add_option("--stego", dopt.stego, "Stego image")->required();
    dec->add_option("--out", dopt.out, "Write the text here instead of stdout");
    dec->add_flag("--json", dopt.json, "Machine-readable output");
    dec->callback([&] { rc = cmd_decode(dopt, out); });

    MetricsOpts mo;
    auto* met = app.add_subcommand("metrics", "Image quality and text fidelity metrics");
    met->add_option("--cover", mo.cover, "Original cover image")->required();
    met->add_option("--stego", mo.stego, "Stego image")->required();
    met->add_option("--reference-text", mo.reference, "Reference text for CER/WER");
    met->add_flag("--json", mo.json, "Machine-readable output");
    met->callback([&] { rc = cmd_metrics(mo, out); });

    AnalyzeOpts ao;
    auto* ana = app.add_subcommand("analyze", "Histograms, difference heatmap and a combined report");
    ana->add_option("--cover", ao.cover, "Original cover image")->required();
    ana->add_option("--stego", ao.stego, "Stego image")->required();
    ana->add_option("--outdir", ao.outdir, "Directory for the generated files")->required();
    ana->add_flag("--json", ao.json, "Machine-readable output");
    ana->callback([&] { rc = cmd_analyze(ao, out); });

    CapacityOpts co;
    auto* cap = app.add_subcommand("capacity", "Symbols a cover image can carry");
    cap->add_option("--cover", co.cover, "Cover image")->required();
    cap->add_flag("--force-gray", co.force_gray, "Evaluate the grayscale variant");
    cap->add_flag("--json", co.json, "Machine-readable output");
    cap->callback([&] { rc = cmd_capacity(co, out); });

    CodebookOpts cbo;
    auto* cbk = app.add_subcommand("codebook", "Dump the symbol-to-triplet mapping");
    cbk->add_option("--out", cbo.out_path, "Write CSV here instead of stdout");
    cbk->add_flag("--json", cbo.json, "Machine-readable output");
    cbk->callback([&] { rc = cmd_codebook(cbo, out); });

    auto* base = app.add_subcommand("baseline", "Bit-plane baselines for comparison");
    base->require_subcommand(1);

    LsbEncodeOpts leo;
    auto* lenc = base->add_subcommand("lsb-encode", "Classic LSB embedding");
    lenc->add_option("--cover", leo.cover, "Cover image")->required();
    lenc->add_option("--text", leo.text, "Text file to embed")->required();
    lenc->add_option("--out", leo.out, "Stego image output path")->required();
    lenc->add_flag("--json", leo.json, "Machine-readable output");
    lenc->callback([&] { rc = cmd_lsb_encode(leo, out); });

    LsbDecodeOpts ldo;
    auto* ldec = base->add_subcommand("lsb-decode", "Recover an LSB-embedded message");
    ldec->add_option("--stego", ldo.stego, "Stego image")->required();
    ldec->add_option("--out", ldo.out, "Write the text here instead of stdout");
    ldec->add_flag("--json", ldo.json, "Machine-readable output");
    ldec->callback([&] { rc = cmd_lsb_decode(ldo, out); });

    bool table_json = false;
    auto* tab = base->add_subcommand("table", "Pixels touched per character, by method");
    tab->add_flag("--json", table_json, "Machine-readable output");
    tab->callback([&] { rc = cmd_baseline_table(table_json, out); });

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("qpcsteg");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        if (json_mode)
            err << error_json("UsageError", e.what(), 64) << "\n";
        else
            err << "error: " << e.what() << "\n";
        return 64;
    } catch (const Error& e) {
        int code = exit_code_for(e.code());
        if (json_mode)
            err << error_json(errc_name(e.code()), e.detail(), code) << "\n";
        else
            err << "error: " << e.what() << "\n";
        return code;
    } catch (const std::invalid_argument& e) {
        if (json_mode)
            err << error_json("UsageError", e.what(), 64) << "\n";
        else
            err << "error: " << e.what() << "\n";
        return 64;
    } catch (const std::exception& e) {
        if (json_mode)
            err << error_json("InternalError", e.what(), 1) << "\n";
        else
            err << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}

int run_main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

} // namespace qpc::cli
