#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "qpc/kernels.hpp"

using namespace qpc::kernels;

namespace {

struct Buffers {
    std::vector<uint8_t> a, b;
};

Buffers random_buffers(std::mt19937& rng, size_t n) {
    Buffers buf;
    buf.a.resize(n);
    buf.b.resize(n);
    std::uniform_int_distribution<int> value(0, 255);
    std::uniform_int_distribution<int> delta(-2, 2);
    std::uniform_int_distribution<int> coin(0, 3);
    for (size_t i = 0; i < n; ++i) {
        buf.a[i] = static_cast<uint8_t>(value(rng));
        // Mix small deltas (the common case here) with unrelated values.
        buf.b[i] = coin(rng) == 0
                       ? static_cast<uint8_t>(value(rng))
                       : static_cast<uint8_t>(
                             std::clamp(buf.a[i] + delta(rng), 0, 255));
    }
    return buf;
}

// Straight-line reference computed independently of the kernel code.
struct Expected {
    uint64_t sad = 0, ssd = 0, squares = 0;
    uint8_t max_diff = 0;
    std::vector<uint8_t> diffs;
    std::vector<uint8_t> mask;
};

Expected reference(const Buffers& buf, uint8_t lo, uint8_t hi) {
    Expected e;
    e.diffs.resize(buf.a.size());
    e.mask.resize(buf.a.size());
    for (size_t i = 0; i < buf.a.size(); ++i) {
        int d = std::abs(static_cast<int>(buf.a[i]) - static_cast<int>(buf.b[i]));
        e.sad += static_cast<uint64_t>(d);
        e.ssd += static_cast<uint64_t>(d) * static_cast<uint64_t>(d);
        e.squares += static_cast<uint64_t>(buf.a[i]) * buf.a[i];
        e.max_diff = std::max(e.max_diff, static_cast<uint8_t>(d));
        e.diffs[i] = static_cast<uint8_t>(d);
        e.mask[i] = buf.a[i] >= lo && buf.a[i] <= hi ? 1 : 0;
    }
    return e;
}

void check_ops_against_reference(const Ops& ops, const Buffers& buf,
                                 const Expected& e, uint8_t lo, uint8_t hi) {
    size_t n = buf.a.size();
    CHECK(ops.sum_abs_diff(buf.a.data(), buf.b.data(), n) == e.sad);
    CHECK(ops.sum_squared_diff(buf.a.data(), buf.b.data(), n) == e.ssd);
    CHECK(ops.sum_squares(buf.a.data(), n) == e.squares);
    CHECK(ops.max_abs_diff(buf.a.data(), buf.b.data(), n) == e.max_diff);

    std::vector<uint8_t> diffs(n), mask(n);
    ops.abs_diff(buf.a.data(), buf.b.data(), n, diffs.data());
    ops.in_range_mask(buf.a.data(), n, lo, hi, mask.data());
    CHECK(diffs == e.diffs);
    CHECK(mask == e.mask);
}

} // namespace

TEST_CASE("scalar kernels match a straight-line reference") {
    std::mt19937 rng(101);
    // Sizes straddle vector width multiples and the accumulator flush point.
    const size_t sizes[] = {0, 1, 31, 32, 33, 97, 1000, 262143, 262144, 300005};
    for (size_t n : sizes) {
        Buffers buf = random_buffers(rng, n);
        Expected e = reference(buf, 2, 253);
        check_ops_against_reference(scalar_ops(), buf, e, 2, 253);
    }
}

TEST_CASE("vector kernels agree exactly with the scalar reference") {
    const Ops* vec = avx2_ops();
    if (vec == nullptr) {
        MESSAGE("AVX2 unavailable on this machine; dispatch falls back to scalar");
        CHECK(&active_ops() == &scalar_ops());
        return;
    }

    std::mt19937 rng(202);
    const size_t sizes[] = {0, 1, 31, 32, 33, 63, 64, 65, 97, 1000,
                            262143, 262144, 262145, 600000};
    for (size_t n : sizes) {
        Buffers buf = random_buffers(rng, n);
        const Ops& scalar = scalar_ops();
        CHECK(vec->sum_abs_diff(buf.a.data(), buf.b.data(), n) ==
              scalar.sum_abs_diff(buf.a.data(), buf.b.data(), n));
        CHECK(vec->sum_squared_diff(buf.a.data(), buf.b.data(), n) ==
              scalar.sum_squared_diff(buf.a.data(), buf.b.data(), n));
        CHECK(vec->sum_squares(buf.a.data(), n) == scalar.sum_squares(buf.a.data(), n));
        CHECK(vec->max_abs_diff(buf.a.data(), buf.b.data(), n) ==
              scalar.max_abs_diff(buf.a.data(), buf.b.data(), n));

        std::vector<uint8_t> dv(n), ds(n), mv(n), ms(n);
        vec->abs_diff(buf.a.data(), buf.b.data(), n, dv.data());
        scalar.abs_diff(buf.a.data(), buf.b.data(), n, ds.data());
        CHECK(dv == ds);
        for (int lo : {0, 2, 100}) {
            for (int hi : {253, 255, 101}) {
                vec->in_range_mask(buf.a.data(), n, static_cast<uint8_t>(lo),
                                   static_cast<uint8_t>(hi), mv.data());
                scalar.in_range_mask(buf.a.data(), n, static_cast<uint8_t>(lo),
                                     static_cast<uint8_t>(hi), ms.data());
                CHECK(mv == ms);
            }
        }
    }
}

TEST_CASE("kernels survive saturated extremes") {
    // All-255 against all-0 maximizes every accumulator; n crosses the
    // flush interval twice.
    const size_t n = 600000;
    std::vector<uint8_t> a(n, 255), b(n, 0);
    const Ops* impls[] = {&scalar_ops(), avx2_ops()};
    for (const Ops* ops : impls) {
        if (ops == nullptr) continue;
        CHECK(ops->sum_abs_diff(a.data(), b.data(), n) == 255ull * n);
        CHECK(ops->sum_squared_diff(a.data(), b.data(), n) == 65025ull * n);
        CHECK(ops->sum_squares(a.data(), n) == 65025ull * n);
        CHECK(ops->max_abs_diff(a.data(), b.data(), n) == 255);
    }
}

TEST_CASE("in_range_mask boundaries are inclusive") {
    const uint8_t values[] = {0, 1, 2, 3, 252, 253, 254, 255};
    uint8_t mask[8];
    const Ops* impls[] = {&scalar_ops(), avx2_ops()};
    for (const Ops* ops : impls) {
        if (ops == nullptr) continue;
        ops->in_range_mask(values, 8, 2, 253, mask);
        const uint8_t expected[] = {0, 0, 1, 1, 1, 1, 0, 0};
        for (int i = 0; i < 8; ++i) CHECK(mask[i] == expected[i]);
    }
}

TEST_CASE("active ops dispatch to something valid") {
    const Ops& ops = active_ops();
    CHECK((std::string(ops.name) == "scalar" || std::string(ops.name) == "avx2"));
    uint8_t a[3] = {10, 20, 30};
    uint8_t b[3] = {12, 19, 30};
    CHECK(ops.sum_abs_diff(a, b, 3) == 3);
    CHECK(ops.sum_squared_diff(a, b, 3) == 5);
    CHECK(ops.max_abs_diff(a, b, 3) == 2);
}
