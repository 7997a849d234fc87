#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace stablemc {

// Identifies one logical random stream. Distinct (master_seed, replicate_id,
// label) triples give statistically independent streams; the same triple
// always reproduces the same draw sequence within one build.
struct StreamKey {
    std::uint64_t master_seed = 0;
    std::uint64_t replicate_id = 0;
    std::string label;
};

// Counter-based stream (Philox4x32-10 under the hood). Value-like and cheap
// to copy; the n-th draw is a pure function of (key, n). A single stream must
// not be drawn from by two threads concurrently, but any number of streams
// may be used in parallel.
class RngStream {
public:
    RngStream() = default;
    RngStream(std::uint32_t key0, std::uint32_t key1) : key0_(key0), key1_(key1) {}

    // Uniform draw in [0,1); advances the position by one.
    double uniform01();

    // Standard normal via Box-Muller; consumes two uniform positions.
    double normal();

    // Batch fills; same values as the equivalent sequence of single draws.
    void fill_uniform01(std::span<double> out);
    void fill_normal(std::span<double> out);

    std::uint64_t position() const { return position_; }
    void seek(std::uint64_t position) { position_ = position; }

    std::uint32_t key0() const { return key0_; }
    std::uint32_t key1() const { return key1_; }

private:
    std::uint32_t key0_ = 0;
    std::uint32_t key1_ = 0;
    std::uint64_t position_ = 0;  // uniform draw index
};

RngStream derive_stream(const StreamKey& key);

// Convenience: derive_stream({seed, replicate, label}).
RngStream derive_stream(std::uint64_t master_seed, std::uint64_t replicate_id,
                        std::string_view label);

namespace rng_detail {
std::uint64_t fnv1a64(std::string_view s);
std::uint64_t splitmix64(std::uint64_t x);
}  // namespace rng_detail

}  // namespace stablemc
