#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

// Data-parallel inner loops behind the Monte Carlo machinery: counter-based
// uniform generation and the reductions used by window probes and moment
// estimates. There is a scalar reference implementation plus SIMD variants
// selected at runtime; all variants are bit-for-bit equivalent.
//
// Bit-exactness contract:
//  - max / count reductions are order-insensitive and therefore exact.
//  - sum reductions use a pinned 4-lane accumulation order: lane l sums the
//    elements with index % 4 == l over the first n - n%4 elements, the tail
//    is summed separately, and the total is ((lane0+lane2)+(lane1+lane3))+tail.
//    Every backend (including the scalar reference) follows this order, and
//    kernel translation units are compiled with FP contraction disabled.
namespace stablemc::kernels {

enum class Backend { scalar, avx2 };

struct Ops {
    const char* name;

    // Philox4x32-10 block generator. Writes 2*blocks doubles in [0,1),
    // two per counter block, starting at counter value block_start.
    void (*fill_uniform_blocks)(std::uint32_t key0, std::uint32_t key1,
                                std::uint64_t block_start, double* out, std::size_t blocks);

    // max over i of |x[i] - center|; 0 for n == 0.
    double (*reduce_max_abs_dev)(const double* x, std::size_t n, double center);

    // max over i of |a[i] - b[i]|; 0 for n == 0.
    double (*reduce_max_abs_diff)(const double* a, const double* b, std::size_t n);

    // Sum with the pinned 4-lane order described above.
    double (*reduce_sum)(const double* x, std::size_t n);

    // Sum of squares with the same pinned order.
    double (*reduce_sum_sq)(const double* x, std::size_t n);

    // Number of entries strictly greater than threshold.
    std::size_t (*count_greater)(const double* x, std::size_t n, double threshold);
};

// Active implementation. Resolved once: the STABLEMC_KERNELS environment
// variable ("scalar" or "avx2") wins, otherwise the best supported backend.
const Ops& active();

Backend active_backend();
std::vector<Backend> available_backends();
const Ops& ops_for(Backend b);

// Overrides the active backend; throws DomainError if unsupported on this CPU.
void force_backend(Backend b);

std::string backend_name(Backend b);

}  // namespace stablemc::kernels
