#ifndef REPRISK_RNG_HPP
#define REPRISK_RNG_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace reprisk {

// splitmix64 finalizer; used both as a stream seeder and as the mixing
// function for deriving child seeds.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Stream labels keep the sampling streams, the grid stream, and any future
// auxiliary streams statistically separated even when the integer parts
// collide.
enum class StreamLabel : std::uint64_t {
    trial_sampling = 0x5EED0001ULL,
    rounding_grid  = 0x5EED0002ULL,
};

// Derives a child seed from (master, parts...). Each part is folded through
// the splitmix64 mixer, so (a, b) and (b, a) yield unrelated seeds.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> parts) {
    std::uint64_t s = master;
    (void)splitmix64_next(s);
    for (std::uint64_t p : parts) {
        s ^= p + 0x9E3779B97F4A7C15ULL + (s << 6) + (s >> 2);
        (void)splitmix64_next(s);
    }
    return splitmix64_next(s);
}

// Deterministic seeded random stream. The raw engine is std::mt19937_64
// (bit-exact per the standard); all floating-point conversions are done
// here rather than through std::*_distribution so that draw sequences are
// a pure function of the seed across standard libraries.
class SeededStream {
public:
    explicit SeededStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0, 1]; safe as a log() argument.
    double uniform01_open_low() {
        return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    // Standard normal via Box-Muller; the second variate of each pair is
    // cached so consecutive calls consume the stream deterministically.
    double standard_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01_open_low();
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace reprisk

#endif
