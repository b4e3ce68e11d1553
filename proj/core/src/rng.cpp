#include "zolaw/rng.hpp"

namespace zolaw {

std::uint64_t bernoulli_threshold(double p) {
    if (p <= 0.0) return 0;
    if (p >= 1.0) return ~0ull;
    long double t = static_cast<long double>(p) * 18446744073709551616.0L; // 2^64
    if (t >= 18446744073709551615.0L) return ~0ull;
    return static_cast<std::uint64_t>(t);
}

} // namespace zolaw
