#pragma once

#include <cstddef>
#include <cstdint>

namespace qpc::kernels {

// Exact integer reductions and maps over 8-bit sample buffers. The scalar
// implementations define the semantics; vector variants must produce
// bit-identical results and are selected once at startup based on what the
// CPU supports.
struct Ops {
    const char* name;

    uint64_t (*sum_abs_diff)(const uint8_t* a, const uint8_t* b, size_t n);
    uint64_t (*sum_squared_diff)(const uint8_t* a, const uint8_t* b, size_t n);
    uint64_t (*sum_squares)(const uint8_t* a, size_t n);
    uint8_t (*max_abs_diff)(const uint8_t* a, const uint8_t* b, size_t n);
    void (*abs_diff)(const uint8_t* a, const uint8_t* b, size_t n, uint8_t* out);
    // out[i] = 1 when lo <= a[i] <= hi, else 0.
    void (*in_range_mask)(const uint8_t* a, size_t n, uint8_t lo, uint8_t hi,
                          uint8_t* out);
};

const Ops& scalar_ops() noexcept;

// Non-null only when the AVX2 TU was compiled in and the CPU reports AVX2.
const Ops* avx2_ops() noexcept;

// Fastest implementation available on this machine.
const Ops& active_ops() noexcept;

} // namespace qpc::kernels
