#ifndef NUDC_RNG_HPP
#define NUDC_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace nudc {

/// splitmix64 step; used to derive independent seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Deterministic seed derivation: mix_seed(master, a, b) is a pure function
/// of its arguments, used for per-parameter / per-pair / per-epoch streams.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t s = base;
    std::uint64_t h = splitmix64(s);
    s ^= a + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    h = splitmix64(s);
    s ^= b + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    return splitmix64(s);
}

/// Deterministic RNG. std::mt19937_64's output sequence is pinned by the
/// standard; the distribution transforms below are hand-rolled because the
/// std::*_distribution algorithms are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 bits of precision.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi] inclusive.
    long long uniform_int(long long lo, long long hi) {
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<long long>(engine_() % span);
    }

    /// Standard normal via Box-Muller; the spare value is cached so each
    /// pair of uniforms yields two draws.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform(); // (0, 1]
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace nudc

#endif // NUDC_RNG_HPP
