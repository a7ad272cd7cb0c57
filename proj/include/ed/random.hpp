#ifndef ED_RANDOM_HPP
#define ED_RANDOM_HPP

#include <cstdint>
#include <random>

namespace ed {

// splitmix64 step; used to derive independent sub-stream seeds from one
// 64-bit user seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D4A28885747159ULL ^ 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seeded random stream: mt19937_64 keyed by (seed, stream) through
/// splitmix64. Gaussian draws use an explicit Box-Muller transform so the
/// byte stream is identical across standard libraries.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0) {
        std::uint64_t s = seed ^ (0xA5A5A5A55A5A5A5AULL + stream * 0xD1342543DE82EF95ULL);
        gen_.seed(splitmix64(s));
    }

    // Uniform in (0, 1]; never returns 0 so log() below is safe.
    double uniform() {
        return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller (both outputs consumed).
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    std::uint64_t next_raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace ed

#endif
