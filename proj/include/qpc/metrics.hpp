#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "qpc/codec.hpp"
#include "qpc/image.hpp"

namespace qpc {

struct QualityMetrics {
    double mae = 0.0;
    double mse = 0.0;
    double snr_db = 0.0;   // signal power over error power
    double psnr_db = 0.0;  // 10*log10(255^2 / mse)
};

// Sample-wise error statistics over all W*H*C samples. Sums are exact
// integers; division happens once at the end. Identical images yield zero
// error and infinite SNR/PSNR.
QualityMetrics quality_metrics(const RasterImage& cover, const RasterImage& stego);

// Mean SSIM over all valid 11x11 windows (Gaussian weights, sigma 1.5,
// C1=(0.01*255)^2, C2=(0.03*255)^2), averaged across channels. Images must
// be at least 11x11.
double ssim(const RasterImage& cover, const RasterImage& stego);

// Character error rate: codepoint-level edit distance over the reference
// codepoint count. The reference must be non-empty.
double cer(std::string_view reference, std::string_view hypothesis);

// Word error rate: token-level edit distance over the reference token count;
// tokens are maximal runs of non-whitespace. The reference must contain at
// least one token.
double wer(std::string_view reference, std::string_view hypothesis);

struct MetricsReport {
    double mae = 0.0;
    double mse = 0.0;
    double snr_db = 0.0;
    double psnr_db = 0.0;
    double ssim = 0.0;
    std::optional<double> cer;  // only when a reference text was supplied
    std::optional<double> wer;

    static MetricsReport measure(const RasterImage& cover, const RasterImage& stego);
};

// Keys: mae, mse, snr_db, psnr_db, ssim, cer, wer. Infinities serialize as
// the string "inf"; absent text metrics serialize as null.
std::string metrics_report_json(const MetricsReport& report);

} // namespace qpc
