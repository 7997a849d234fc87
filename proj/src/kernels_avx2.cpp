// AVX2 variants of the kernel ops. Compiled with -mavx2 and FP contraction
// disabled so results stay bit-identical to the scalar reference.
#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>
#include <cstddef>
#include <cstdint>

#include "stablemc/kernels.hpp"
#include "kernels_detail.hpp"

namespace stablemc::kernels {
namespace {

using detail::Block;
using detail::philox_block;
using detail::unit_double;

// lo/hi 32-bit halves of lane-wise u32 * m for all 8 lanes.
inline __m256i mul_u32_lo_hi(__m256i x, __m256i m, __m256i* hi) {
    const __m256i prod_even = _mm256_mul_epu32(x, m);
    const __m256i prod_odd = _mm256_mul_epu32(_mm256_srli_epi64(x, 32), m);
    const __m256i lo =
        _mm256_blend_epi32(prod_even, _mm256_slli_epi64(prod_odd, 32), 0b10101010);
    *hi = _mm256_blend_epi32(_mm256_srli_epi64(prod_even, 32), prod_odd, 0b10101010);
    return lo;
}

// (u64 >> 12) | exponent-of-1 bits, reinterpreted as double, minus 1.0.
inline __m256d unit_doubles(__m256i bits) {
    const __m256i mantissa = _mm256_or_si256(_mm256_srli_epi64(bits, 12),
                                             _mm256_set1_epi64x(0x3FF0000000000000ll));
    return _mm256_sub_pd(_mm256_castsi256_pd(mantissa), _mm256_set1_pd(1.0));
}

void fill_uniform_blocks_avx2(std::uint32_t key0, std::uint32_t key1,
                              std::uint64_t block_start, double* out, std::size_t blocks) {
    const __m256i m0 = _mm256_set1_epi32(static_cast<int>(detail::kPhiloxM0));
    const __m256i m1 = _mm256_set1_epi32(static_cast<int>(detail::kPhiloxM1));
    const __m256i w0 = _mm256_set1_epi32(static_cast<int>(detail::kPhiloxW0));
    const __m256i w1 = _mm256_set1_epi32(static_cast<int>(detail::kPhiloxW1));

    std::size_t i = 0;
    for (; i + 8 <= blocks; i += 8) {
        alignas(32) std::uint32_t clo[8];
        alignas(32) std::uint32_t chi[8];
        for (int j = 0; j < 8; ++j) {
            const std::uint64_t c = block_start + i + static_cast<std::uint64_t>(j);
            clo[j] = static_cast<std::uint32_t>(c);
            chi[j] = static_cast<std::uint32_t>(c >> 32);
        }
        __m256i x0 = _mm256_load_si256(reinterpret_cast<const __m256i*>(clo));
        __m256i x1 = _mm256_load_si256(reinterpret_cast<const __m256i*>(chi));
        __m256i x2 = _mm256_setzero_si256();
        __m256i x3 = _mm256_setzero_si256();
        __m256i k0 = _mm256_set1_epi32(static_cast<int>(key0));
        __m256i k1 = _mm256_set1_epi32(static_cast<int>(key1));

        for (int r = 0; r < detail::kPhiloxRounds; ++r) {
            __m256i hi0, hi1;
            const __m256i lo0 = mul_u32_lo_hi(x0, m0, &hi0);
            const __m256i lo1 = mul_u32_lo_hi(x2, m1, &hi1);
            const __m256i y0 = _mm256_xor_si256(_mm256_xor_si256(hi1, x1), k0);
            const __m256i y2 = _mm256_xor_si256(_mm256_xor_si256(hi0, x3), k1);
            x0 = y0;
            x1 = lo1;
            x2 = y2;
            x3 = lo0;
            k0 = _mm256_add_epi32(k0, w0);
            k1 = _mm256_add_epi32(k1, w1);
        }

        // Interleave the four output words into per-block u64 pairs, convert
        // to unit doubles and lay them out in block order.
        const __m256i a_lo = _mm256_unpacklo_epi32(x0, x1);  // blocks 0,1 | 4,5
        const __m256i a_hi = _mm256_unpackhi_epi32(x0, x1);  // blocks 2,3 | 6,7
        const __m256i b_lo = _mm256_unpacklo_epi32(x2, x3);
        const __m256i b_hi = _mm256_unpackhi_epi32(x2, x3);

        const __m256d da_lo = unit_doubles(a_lo);
        const __m256d da_hi = unit_doubles(a_hi);
        const __m256d db_lo = unit_doubles(b_lo);
        const __m256d db_hi = unit_doubles(b_hi);

        const __m256d t0 = _mm256_unpacklo_pd(da_lo, db_lo);
        const __m256d t1 = _mm256_unpackhi_pd(da_lo, db_lo);
        const __m256d t2 = _mm256_unpacklo_pd(da_hi, db_hi);
        const __m256d t3 = _mm256_unpackhi_pd(da_hi, db_hi);

        double* o = out + 2 * i;
        _mm256_storeu_pd(o + 0, _mm256_permute2f128_pd(t0, t1, 0x20));
        _mm256_storeu_pd(o + 4, _mm256_permute2f128_pd(t2, t3, 0x20));
        _mm256_storeu_pd(o + 8, _mm256_permute2f128_pd(t0, t1, 0x31));
        _mm256_storeu_pd(o + 12, _mm256_permute2f128_pd(t2, t3, 0x31));
    }

    for (; i < blocks; ++i) {
        const Block b = philox_block(key0, key1, block_start + i);
        const std::uint64_t a = static_cast<std::uint64_t>(b.x0) |
                                (static_cast<std::uint64_t>(b.x1) << 32);
        const std::uint64_t c = static_cast<std::uint64_t>(b.x2) |
                                (static_cast<std::uint64_t>(b.x3) << 32);
        out[2 * i] = unit_double(a);
        out[2 * i + 1] = unit_double(c);
    }
}

inline __m256d abs_pd(__m256d v) {
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

double reduce_max_abs_dev_avx2(const double* x, std::size_t n, double center) {
    const __m256d vc = _mm256_set1_pd(center);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_max_pd(acc, abs_pd(_mm256_sub_pd(_mm256_loadu_pd(x + i), vc)));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double m = lanes[0];
    for (int l = 1; l < 4; ++l) {
        if (lanes[l] > m) m = lanes[l];
    }
    for (; i < n; ++i) {
        const double d = std::fabs(x[i] - center);
        if (d > m) m = d;
    }
    return m;
}

double reduce_max_abs_diff_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_max_pd(acc,
                            abs_pd(_mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i))));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double m = lanes[0];
    for (int l = 1; l < 4; ++l) {
        if (lanes[l] > m) m = lanes[l];
    }
    for (; i < n; ++i) {
        const double d = std::fabs(a[i] - b[i]);
        if (d > m) m = d;
    }
    return m;
}

double reduce_sum_avx2(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    const std::size_t body = n - n % 4;
    for (std::size_t i = 0; i < body; i += 4) {
        acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double tail = 0.0;
    for (std::size_t i = body; i < n; ++i) tail += x[i];
    return ((lanes[0] + lanes[2]) + (lanes[1] + lanes[3])) + tail;
}

double reduce_sum_sq_avx2(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    const std::size_t body = n - n % 4;
    for (std::size_t i = 0; i < body; i += 4) {
        const __m256d v = _mm256_loadu_pd(x + i);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double tail = 0.0;
    for (std::size_t i = body; i < n; ++i) tail += x[i] * x[i];
    return ((lanes[0] + lanes[2]) + (lanes[1] + lanes[3])) + tail;
}

std::size_t count_greater_avx2(const double* x, std::size_t n, double threshold) {
    const __m256d vt = _mm256_set1_pd(threshold);
    std::size_t c = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d cmp = _mm256_cmp_pd(_mm256_loadu_pd(x + i), vt, _CMP_GT_OQ);
        c += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(cmp)));
    }
    for (; i < n; ++i) {
        if (x[i] > threshold) ++c;
    }
    return c;
}

}  // namespace

const Ops& avx2_ops() {
    static const Ops ops{
        "avx2",
        &fill_uniform_blocks_avx2,
        &reduce_max_abs_dev_avx2,
        &reduce_max_abs_diff_avx2,
        &reduce_sum_avx2,
        &reduce_sum_sq_avx2,
        &count_greater_avx2,
    };
    return ops;
}

}  // namespace stablemc::kernels

#endif  // x86_64
