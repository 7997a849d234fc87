#pragma once

#include <bit>
#include <cstdint>

// Shared pieces of the Philox4x32-10 generator. Round structure and constants
// follow the published algorithm: two 32x32 multiplies per round, key bumped
// by the Weyl constants each round, 10 rounds.
namespace stablemc::kernels::detail {

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;
inline constexpr int kPhiloxRounds = 10;

struct Block {
    std::uint32_t x0, x1, x2, x3;
};

inline Block philox_block(std::uint32_t key0, std::uint32_t key1, std::uint64_t counter) {
    std::uint32_t x0 = static_cast<std::uint32_t>(counter);
    std::uint32_t x1 = static_cast<std::uint32_t>(counter >> 32);
    std::uint32_t x2 = 0;
    std::uint32_t x3 = 0;
    std::uint32_t k0 = key0;
    std::uint32_t k1 = key1;
    for (int r = 0; r < kPhiloxRounds; ++r) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * x0;
        const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * x2;
        const std::uint32_t y0 = static_cast<std::uint32_t>(p1 >> 32) ^ x1 ^ k0;
        const std::uint32_t y1 = static_cast<std::uint32_t>(p1);
        const std::uint32_t y2 = static_cast<std::uint32_t>(p0 >> 32) ^ x3 ^ k1;
        const std::uint32_t y3 = static_cast<std::uint32_t>(p0);
        x0 = y0;
        x1 = y1;
        x2 = y2;
        x3 = y3;
        k0 += kPhiloxW0;
        k1 += kPhiloxW1;
    }
    return {x0, x1, x2, x3};
}

// 52 random mantissa bits -> double in [0,1).
inline double unit_double(std::uint64_t bits) {
    const std::uint64_t mantissa = (bits >> 12) | 0x3FF0000000000000ull;
    return std::bit_cast<double>(mantissa) - 1.0;
}

}  // namespace stablemc::kernels::detail
