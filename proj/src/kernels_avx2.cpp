#include "qpc/kernels.hpp"

#include <immintrin.h>

namespace qpc::kernels {

namespace avx2 {

namespace {

inline uint64_t hsum_epi64(__m256i v) {
    __m128i s = _mm_add_epi64(_mm256_castsi256_si128(v),
                              _mm256_extracti128_si256(v, 1));
    return static_cast<uint64_t>(_mm_extract_epi64(s, 0)) +
           static_cast<uint64_t>(_mm_extract_epi64(s, 1));
}

inline uint64_t hsum_epu32(__m256i v) {
    const __m256i zero = _mm256_setzero_si256();
    __m256i lo = _mm256_unpacklo_epi32(v, zero);
    __m256i hi = _mm256_unpackhi_epi32(v, zero);
    return hsum_epi64(_mm256_add_epi64(lo, hi));
}

inline __m256i absdiff_epu8(__m256i a, __m256i b) {
    return _mm256_sub_epi8(_mm256_max_epu8(a, b), _mm256_min_epu8(a, b));
}

// madd over unpacked u16 adds at most 2*255^2 per u32 lane per call, so a
// lane stays below 2^32 for 8192 iterations of two calls each.
constexpr size_t kFlushInterval = 8192;

} // namespace

uint64_t sum_abs_diff(const uint8_t* a, const uint8_t* b, size_t n) {
    __m256i acc = _mm256_setzero_si256();
    size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        acc = _mm256_add_epi64(acc, _mm256_sad_epu8(va, vb));
    }
    uint64_t total = hsum_epi64(acc);
    for (; i < n; ++i)
        total += static_cast<uint64_t>(a[i] > b[i] ? a[i] - b[i] : b[i] - a[i]);
    return total;
}

uint64_t sum_squared_diff(const uint8_t* a, const uint8_t* b, size_t n) {
    const __m256i zero = _mm256_setzero_si256();
    uint64_t total = 0;
    size_t i = 0;
    while (i + 32 <= n) {
        size_t vectors = (n - i) / 32;
        if (vectors > kFlushInterval) vectors = kFlushInterval;
        __m256i acc = zero;
        for (size_t k = 0; k < vectors; ++k, i += 32) {
            __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
            __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
            __m256i d = absdiff_epu8(va, vb);
            __m256i lo = _mm256_unpacklo_epi8(d, zero);
            __m256i hi = _mm256_unpackhi_epi8(d, zero);
            acc = _mm256_add_epi32(acc, _mm256_madd_epi16(lo, lo));
            acc = _mm256_add_epi32(acc, _mm256_madd_epi16(hi, hi));
        }
        total += hsum_epu32(acc);
    }
    for (; i < n; ++i) {
        int d = static_cast<int>(a[i]) - static_cast<int>(b[i]);
        total += static_cast<uint64_t>(d * d);
    }
    return total;
}

uint64_t sum_squares(const uint8_t* a, size_t n) {
    const __m256i zero = _mm256_setzero_si256();
    uint64_t total = 0;
    size_t i = 0;
    while (i + 32 <= n) {
        size_t vectors = (n - i) / 32;
        if (vectors > kFlushInterval) vectors = kFlushInterval;
        __m256i acc = zero;
        for (size_t k = 0; k < vectors; ++k, i += 32) {
            __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
            __m256i lo = _mm256_unpacklo_epi8(va, zero);
            __m256i hi = _mm256_unpackhi_epi8(va, zero);
            acc = _mm256_add_epi32(acc, _mm256_madd_epi16(lo, lo));
            acc = _mm256_add_epi32(acc, _mm256_madd_epi16(hi, hi));
        }
        total += hsum_epu32(acc);
    }
    for (; i < n; ++i)
        total += static_cast<uint64_t>(a[i]) * a[i];
    return total;
}

uint8_t max_abs_diff(const uint8_t* a, const uint8_t* b, size_t n) {
    __m256i acc = _mm256_setzero_si256();
    size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        acc = _mm256_max_epu8(acc, absdiff_epu8(va, vb));
    }
    __m128i m = _mm_max_epu8(_mm256_castsi256_si128(acc),
                             _mm256_extracti128_si256(acc, 1));
    m = _mm_max_epu8(m, _mm_srli_si128(m, 8));
    m = _mm_max_epu8(m, _mm_srli_si128(m, 4));
    m = _mm_max_epu8(m, _mm_srli_si128(m, 2));
    m = _mm_max_epu8(m, _mm_srli_si128(m, 1));
    uint8_t best = static_cast<uint8_t>(_mm_cvtsi128_si32(m) & 0xFF);
    for (; i < n; ++i) {
        uint8_t d = a[i] > b[i] ? static_cast<uint8_t>(a[i] - b[i])
                                : static_cast<uint8_t>(b[i] - a[i]);
        if (d > best) best = d;
    }
    return best;
}

void abs_diff(const uint8_t* a, const uint8_t* b, size_t n, uint8_t* out) {
    size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), absdiff_epu8(va, vb));
    }
    for (; i < n; ++i)
        out[i] = a[i] > b[i] ? static_cast<uint8_t>(a[i] - b[i])
                             : static_cast<uint8_t>(b[i] - a[i]);
}

void in_range_mask(const uint8_t* a, size_t n, uint8_t lo, uint8_t hi,
                   uint8_t* out) {
    const __m256i vlo = _mm256_set1_epi8(static_cast<char>(lo));
    const __m256i vhi = _mm256_set1_epi8(static_cast<char>(hi));
    const __m256i one = _mm256_set1_epi8(1);
    size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        // unsigned v >= lo  <=>  max(v, lo) == v; likewise for <= hi
        __m256i ge = _mm256_cmpeq_epi8(_mm256_max_epu8(v, vlo), v);
        __m256i le = _mm256_cmpeq_epi8(_mm256_min_epu8(v, vhi), v);
        __m256i mask = _mm256_and_si256(_mm256_and_si256(ge, le), one);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), mask);
    }
    for (; i < n; ++i)
        out[i] = (a[i] >= lo && a[i] <= hi) ? 1 : 0;
}

} // namespace avx2

namespace detail {

const Ops* avx2_ops_if_supported() noexcept {
    static const Ops ops{
        "avx2",
        avx2::sum_abs_diff,
        avx2::sum_squared_diff,
        avx2::sum_squares,
        avx2::max_abs_diff,
        avx2::abs_diff,
        avx2::in_range_mask,
    };
    return __builtin_cpu_supports("avx2") ? &ops : nullptr;
}

} // namespace detail

} // namespace qpc::kernels
