#include "qpc/metrics.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include <json.hpp>

#include "qpc/kernels.hpp"

namespace qpc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace

QualityMetrics quality_metrics(const RasterImage& cover, const RasterImage& stego) {
    require_same_shape(cover, stego);
    const auto& ops = kernels::active_ops();
    size_t n = cover.sample_count();

    uint64_t sad = ops.sum_abs_diff(cover.samples.data(), stego.samples.data(), n);
    uint64_t ssd = ops.sum_squared_diff(cover.samples.data(), stego.samples.data(), n);
    uint64_t signal = ops.sum_squares(cover.samples.data(), n);

    QualityMetrics q;
    q.mae = static_cast<double>(sad) / static_cast<double>(n);
    q.mse = static_cast<double>(ssd) / static_cast<double>(n);
    if (ssd == 0) {
        q.snr_db = kInf;
        q.psnr_db = kInf;
    } else {
        q.snr_db = signal == 0
                       ? -kInf
                       : 10.0 * std::log10(static_cast<double>(signal) /
                                           static_cast<double>(ssd));
        q.psnr_db = 10.0 * std::log10(255.0 * 255.0 / q.mse);
    }
    return q;
}

double ssim(const RasterImage& cover, const RasterImage& stego) {
    require_same_shape(cover, stego);
    constexpr int kWindow = 11;
    if (cover.width < kWindow || cover.height < kWindow)
        raise(errc::image_too_small,
              "SSIM needs at least " + std::to_string(kWindow) + "x" +
              std::to_string(kWindow) + " pixels, got " +
              std::to_string(cover.width) + "x" + std::to_string(cover.height));

    // Normalized 1D Gaussian taps, sigma 1.5; the separable outer product
    // reproduces the usual 11x11 window.
    double w[kWindow];
    double wsum = 0.0;
    for (int k = 0; k < kWindow; ++k) {
        double d = k - (kWindow - 1) / 2.0;
        w[k] = std::exp(-d * d / (2.0 * 1.5 * 1.5));
        wsum += w[k];
    }
    for (double& v : w) v /= wsum;

    constexpr double C1 = (0.01 * 255.0) * (0.01 * 255.0);
    constexpr double C2 = (0.03 * 255.0) * (0.03 * 255.0);

    const size_t W = cover.width, H = cover.height, C = cover.channels;
    const size_t out_w = W - (kWindow - 1);
    const size_t out_h = H - (kWindow - 1);

    // Ring of the last 11 horizontally filtered rows for each of the five
    // accumulated products: x, y, x^2, y^2, xy.
    std::vector<double> ring(5 * kWindow * out_w);
    auto row = [&](int plane, size_t y) {
        return ring.data() + (static_cast<size_t>(plane) * kWindow + y % kWindow) * out_w;
    };

    double total = 0.0;
    for (size_t c = 0; c < C; ++c) {
        for (size_t y = 0; y < H; ++y) {
            const uint8_t* cov = cover.samples.data() + y * W * C + c;
            const uint8_t* stg = stego.samples.data() + y * W * C + c;
            double* rx = row(0, y);
            double* ry = row(1, y);
            double* rxx = row(2, y);
            double* ryy = row(3, y);
            double* rxy = row(4, y);
            for (size_t xo = 0; xo < out_w; ++xo) {
                double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
                for (int k = 0; k < kWindow; ++k) {
                    double xv = cov[(xo + k) * C];
                    double yv = stg[(xo + k) * C];
                    sx += w[k] * xv;
                    sy += w[k] * yv;
                    sxx += w[k] * xv * xv;
                    syy += w[k] * yv * yv;
                    sxy += w[k] * xv * yv;
                }
                rx[xo] = sx;
                ry[xo] = sy;
                rxx[xo] = sxx;
                ryy[xo] = syy;
                rxy[xo] = sxy;
            }
            if (y + 1 < kWindow) continue;

            size_t y_top = y + 1 - kWindow;
            for (size_t xo = 0; xo < out_w; ++xo) {
                double mx = 0, my = 0, mxx = 0, myy = 0, mxy = 0;
                for (int k = 0; k < kWindow; ++k) {
                    size_t yr = y_top + k;
                    mx += w[k] * row(0, yr)[xo];
                    my += w[k] * row(1, yr)[xo];
                    mxx += w[k] * row(2, yr)[xo];
                    myy += w[k] * row(3, yr)[xo];
                    mxy += w[k] * row(4, yr)[xo];
                }
                double var_x = mxx - mx * mx;
                double var_y = myy - my * my;
                double cov_xy = mxy - mx * my;
                double num = (2.0 * mx * my + C1) * (2.0 * cov_xy + C2);
                double den = (mx * mx + my * my + C1) * (var_x + var_y + C2);
                total += num / den;
            }
        }
    }
    return total / (static_cast<double>(C) * out_w * out_h);
}

namespace {

template <typename T>
size_t edit_distance(std::span<const T> a, std::span<const T> b) {
    size_t start = 0;
    while (start < a.size() && start < b.size() && a[start] == b[start]) ++start;
    size_t end_a = a.size(), end_b = b.size();
    while (end_a > start && end_b > start && a[end_a - 1] == b[end_b - 1]) {
        --end_a;
        --end_b;
    }
    size_t n = end_a - start, m = end_b - start;
    if (n == 0) return m;
    if (m == 0) return n;

    std::vector<size_t> prev(m + 1), cur(m + 1);
    std::iota(prev.begin(), prev.end(), size_t{0});
    for (size_t i = 1; i <= n; ++i) {
        cur[0] = i;
        for (size_t j = 1; j <= m; ++j) {
            size_t subst = prev[j - 1] + (a[start + i - 1] == b[start + j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, subst});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

bool is_token_separator(char c) {
    return c == ' ' || c == '\n' || c == '\t' || c == '\r';
}

std::vector<std::string_view> split_tokens(std::string_view s) {
    std::vector<std::string_view> out;
    size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && is_token_separator(s[i])) ++i;
        size_t begin = i;
        while (i < s.size() && !is_token_separator(s[i])) ++i;
        if (i > begin) out.push_back(s.substr(begin, i - begin));
    }
    return out;
}

} // namespace

double cer(std::string_view reference, std::string_view hypothesis) {
    std::vector<char32_t> ref = utf8_codepoints(reference);
    if (ref.empty())
        raise(errc::empty_reference, "reference text has no characters");
    std::vector<char32_t> hyp = utf8_codepoints(hypothesis);
    return static_cast<double>(edit_distance<char32_t>(ref, hyp)) /
           static_cast<double>(ref.size());
}

double wer(std::string_view reference, std::string_view hypothesis) {
    std::vector<std::string_view> ref = split_tokens(reference);
    if (ref.empty())
        raise(errc::empty_reference, "reference text has no words");
    std::vector<std::string_view> hyp = split_tokens(hypothesis);
    return static_cast<double>(edit_distance<std::string_view>(ref, hyp)) /
           static_cast<double>(ref.size());
}

MetricsReport MetricsReport::measure(const RasterImage& cover,
                                     const RasterImage& stego) {
    QualityMetrics q = quality_metrics(cover, stego);
    MetricsReport r;
    r.mae = q.mae;
    r.mse = q.mse;
    r.snr_db = q.snr_db;
    r.psnr_db = q.psnr_db;
    r.ssim = qpc::ssim(cover, stego);
    return r;
}

namespace {

nlohmann::ordered_json json_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

} // namespace

std::string metrics_report_json(const MetricsReport& report) {
    nlohmann::ordered_json j{
        {"mae", json_number(report.mae)},
        {"mse", json_number(report.mse)},
        {"snr_db", json_number(report.snr_db)},
        {"psnr_db", json_number(report.psnr_db)},
        {"ssim", json_number(report.ssim)},
        {"cer", report.cer ? json_number(*report.cer) : nlohmann::ordered_json(nullptr)},
        {"wer", report.wer ? json_number(*report.wer) : nlohmann::ordered_json(nullptr)},
    };
    return j.dump(2);
}

} // namespace qpc
