#include "stablemc/rng.hpp"

#include <cmath>
#include <numbers>

#include "stablemc/kernels.hpp"

namespace stablemc {

namespace rng_detail {

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace rng_detail

RngStream derive_stream(const StreamKey& key) {
    using rng_detail::fnv1a64;
    using rng_detail::splitmix64;
    std::uint64_t k = splitmix64(key.master_seed);
    k = splitmix64(k ^ fnv1a64(key.label));
    k = splitmix64(k ^ key.replicate_id);
    return RngStream(static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32));
}

RngStream derive_stream(std::uint64_t master_seed, std::uint64_t replicate_id,
                        std::string_view label) {
    return derive_stream(StreamKey{master_seed, replicate_id, std::string(label)});
}

double RngStream::uniform01() {
    // Position p lives in block p/2, lane p%2.
    double pair[2];
    kernels::active().fill_uniform_blocks(key0_, key1_, position_ / 2, pair, 1);
    const double v = pair[position_ % 2];
    ++position_;
    return v;
}

void RngStream::fill_uniform01(std::span<double> out) {
    std::size_t i = 0;
    const auto& ops = kernels::active();
    if (position_ % 2 == 1 && i < out.size()) {
        out[i++] = uniform01();
    }
    const std::size_t remaining = out.size() - i;
    const std::size_t blocks = remaining / 2;
    if (blocks > 0) {
        ops.fill_uniform_blocks(key0_, key1_, position_ / 2, out.data() + i, blocks);
        i += 2 * blocks;
        position_ += 2 * blocks;
    }
    while (i < out.size()) {
        out[i++] = uniform01();
    }
}

namespace {

// One normal per counter block: z = sqrt(-2 log(1-u1)) * cos(2 pi u2).
inline double box_muller(double u1, double u2) {
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    return r * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

double RngStream::normal() {
    if (position_ % 2 == 1) ++position_;  // align to a block boundary
    double pair[2];
    kernels::active().fill_uniform_blocks(key0_, key1_, position_ / 2, pair, 1);
    position_ += 2;
    return box_muller(pair[0], pair[1]);
}

void RngStream::fill_normal(std::span<double> out) {
    if (out.empty()) return;
    if (position_ % 2 == 1) ++position_;
    const auto& ops = kernels::active();
    constexpr std::size_t kChunk = 1024;
    double scratch[2 * kChunk];
    std::size_t done = 0;
    while (done < out.size()) {
        const std::size_t take = std::min(kChunk, out.size() - done);
        ops.fill_uniform_blocks(key0_, key1_, position_ / 2, scratch, take);
        for (std::size_t j = 0; j < take; ++j) {
            out[done + j] = box_muller(scratch[2 * j], scratch[2 * j + 1]);
        }
        position_ += 2 * take;
        done += take;
    }
}

}  // namespace stablemc
