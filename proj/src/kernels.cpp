#include "qpc/kernels.hpp"

#include <cstdlib>

namespace qpc::kernels {

namespace scalar {

uint64_t sum_abs_diff(const uint8_t* a, const uint8_t* b, size_t n) {
    uint64_t total = 0;
    for (size_t i = 0; i < n; ++i)
        total += static_cast<uint64_t>(a[i] > b[i] ? a[i] - b[i] : b[i] - a[i]);
    return total;
}

uint64_t sum_squared_diff(const uint8_t* a, const uint8_t* b, size_t n) {
    uint64_t total = 0;
    for (size_t i = 0; i < n; ++i) {
        int d = static_cast<int>(a[i]) - static_cast<int>(b[i]);
        total += static_cast<uint64_t>(d * d);
    }
    return total;
}

uint64_t sum_squares(const uint8_t* a, size_t n) {
    uint64_t total = 0;
    for (size_t i = 0; i < n; ++i)
        total += static_cast<uint64_t>(a[i]) * a[i];
    return total;
}

uint8_t max_abs_diff(const uint8_t* a, const uint8_t* b, size_t n) {
    uint8_t best = 0;
    for (size_t i = 0; i < n; ++i) {
        uint8_t d = a[i] > b[i] ? static_cast<uint8_t>(a[i] - b[i])
                                : static_cast<uint8_t>(b[i] - a[i]);
        if (d > best) best = d;
    }
    return best;
}

void abs_diff(const uint8_t* a, const uint8_t* b, size_t n, uint8_t* out) {
    for (size_t i = 0; i < n; ++i)
        out[i] = a[i] > b[i] ? static_cast<uint8_t>(a[i] - b[i])
                             : static_cast<uint8_t>(b[i] - a[i]);
}

void in_range_mask(const uint8_t* a, size_t n, uint8_t lo, uint8_t hi,
                   uint8_t* out) {
    for (size_t i = 0; i < n; ++i)
        out[i] = (a[i] >= lo && a[i] <= hi) ? 1 : 0;
}

} // namespace scalar

const Ops& scalar_ops() noexcept {
    static constexpr Ops ops{
        "scalar",
        scalar::sum_abs_diff,
        scalar::sum_squared_diff,
        scalar::sum_squares,
        scalar::max_abs_diff,
        scalar::abs_diff,
        scalar::in_range_mask,
    };
    return ops;
}

#if defined(QPC_KERNELS_AVX2_TU)
namespace detail {
const Ops* avx2_ops_if_supported() noexcept;  // defined in kernels_avx2.cpp
}
#endif

const Ops* avx2_ops() noexcept {
#if defined(QPC_KERNELS_AVX2_TU)
    return detail::avx2_ops_if_supported();
#else
    return nullptr;
#endif
}

const Ops& active_ops() noexcept {
    static const Ops* chosen = [] {
        // QPC_FORCE_SCALAR pins the reference path, mainly for testing.
        if (std::getenv("QPC_FORCE_SCALAR") != nullptr) return &scalar_ops();
        if (const Ops* v = avx2_ops()) return v;
        return &scalar_ops();
    }();
    return *chosen;
}

} // namespace qpc::kernels
