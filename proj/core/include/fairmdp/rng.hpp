#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>

namespace fairmdp {

/// Counter-based deterministic random stream (splitmix64 core).
///
/// All randomness in the project flows from one root seed through
/// RandomStream::derive so that seeded runs are reproducible bit-for-bit
/// across platforms; none of the implementation-defined std::random
/// distributions are used.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : state_(seed) {}

    /// Child stream addressed by a path of ids under a root seed.
    static RandomStream derive(std::uint64_t root, std::initializer_list<std::uint64_t> path) {
        std::uint64_t s = mix(root ^ 0x5851f42d4c957f2dULL);
        for (std::uint64_t id : path) s = mix(s ^ mix(id));
        return RandomStream(s);
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix_output(state_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n).
    int uniform_int(int n) {
        int k = static_cast<int>(uniform01() * n);
        return k < n ? k : n - 1;
    }

    /// Index sampled from a probability row (assumed to sum to ~1).
    int categorical(std::span<const double> weights) {
        double u = uniform01();
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            acc += weights[i];
            if (u < acc) return static_cast<int>(i);
        }
        return static_cast<int>(weights.size()) - 1;
    }

  private:
    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        return mix_output(x);
    }
    static std::uint64_t mix_output(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace fairmdp
