#pragma once

#include <cstdint>
#include <limits>

namespace entroflow {

// Counter-based generator (splitmix64 over an incrementing counter).
// Streams are keyed by (seed, chain id), so results do not depend on how
// chains are distributed over threads.
class CounterRng {
  public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t seed, std::uint64_t chain = 0) {
        counter_ = mix(seed ^ mix(chain + 0x9e3779b97f4a7c15ull));
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        counter_ += 0x9e3779b97f4a7c15ull;
        return mix(counter_);
    }

    double uniform01() {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t counter_ = 0;
};

}  // namespace entroflow
