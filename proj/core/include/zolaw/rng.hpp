#pragma once

#include <cstdint>

namespace zolaw {

// Counter-based SplitMix64 stream. A (master_seed, stream_index) pair names one
// stream; draw i of a stream is mix64(key + (i+1)*GAMMA), where key is derived
// from the pair as below. The full scheme is documented in the README so other
// implementations can reproduce graphs bit for bit.
struct RngSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_index = 0;
};

constexpr std::uint64_t kSplitMixGamma = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t z) {
    z += kSplitMixGamma;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

class RngStream {
public:
    explicit RngStream(RngSpec spec)
        : key_(mix64(spec.master_seed ^ mix64(spec.stream_index ^ 0x5851F42D4C957F2Dull))) {}

    // i-th draw of the stream; pure function of (spec, i).
    std::uint64_t at(std::uint64_t i) const { return mix64(key_ + (i + 1) * kSplitMixGamma); }

    // Sequential interface.
    std::uint64_t next() { return at(counter_++); }
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    // Uniform in [0, bound).
    std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// Threshold such that (draw < threshold) has probability p up to 1 ulp.
std::uint64_t bernoulli_threshold(double p);

} // namespace zolaw
