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

void fill_uniform_blocks_scalar(std::uint32_t key0, std::uint32_t key1,
                                std::uint64_t block_start, double* out, std::size_t blocks) {
    for (std::size_t i = 0; i < blocks; ++i) {
        const Block b = philox_block(key0, key1, block_start + i);
        const std::uint64_t a = static_cast<std::uint64_t>(b.x0) |
                                (static_cast<std::uint64_t>(b.x1) << 32);
        const std::uint64_t c = static_cast<std::uint64_t>(b.x2) |
                                (static_cast<std::uint64_t>(b.x3) << 32);
        out[2 * i] = unit_double(a);
        out[2 * i + 1] = unit_double(c);
    }
}

double reduce_max_abs_dev_scalar(const double* x, std::size_t n, double center) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = std::fabs(x[i] - center);
        if (d > m) m = d;
    }
    return m;
}

double reduce_max_abs_diff_scalar(const double* a, const double* b, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = std::fabs(a[i] - b[i]);
        if (d > m) m = d;
    }
    return m;
}

double reduce_sum_scalar(const double* x, std::size_t n) {
    double lane[4] = {0.0, 0.0, 0.0, 0.0};
    const std::size_t body = n - n % 4;
    for (std::size_t i = 0; i < body; i += 4) {
        lane[0] += x[i];
        lane[1] += x[i + 1];
        lane[2] += x[i + 2];
        lane[3] += x[i + 3];
    }
    double tail = 0.0;
    for (std::size_t i = body; i < n; ++i) tail += x[i];
    return ((lane[0] + lane[2]) + (lane[1] + lane[3])) + tail;
}

double reduce_sum_sq_scalar(const double* x, std::size_t n) {
    double lane[4] = {0.0, 0.0, 0.0, 0.0};
    const std::size_t body = n - n % 4;
    for (std::size_t i = 0; i < body; i += 4) {
        lane[0] += x[i] * x[i];
        lane[1] += x[i + 1] * x[i + 1];
        lane[2] += x[i + 2] * x[i + 2];
        lane[3] += x[i + 3] * x[i + 3];
    }
    double tail = 0.0;
    for (std::size_t i = body; i < n; ++i) tail += x[i] * x[i];
    return ((lane[0] + lane[2]) + (lane[1] + lane[3])) + tail;
}

std::size_t count_greater_scalar(const double* x, std::size_t n, double threshold) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i] > threshold) ++c;
    }
    return c;
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops{
        "scalar",
        &fill_uniform_blocks_scalar,
        &reduce_max_abs_dev_scalar,
        &reduce_max_abs_diff_scalar,
        &reduce_sum_scalar,
        &reduce_sum_sq_scalar,
        &count_greater_scalar,
    };
    return ops;
}

}  // namespace stablemc::kernels
