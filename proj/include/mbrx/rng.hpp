#ifndef MBRX_RNG_HPP
#define MBRX_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace mbrx {

// Reproducibility contract: every random draw in the project goes through
// GaussianRng, which is std::mt19937_64 (bit-exact per the C++ standard)
// plus the Box-Muller transform written out below. Ensembles derive one
// substream per particle id, so results do not depend on how the ensemble
// is partitioned across workers.

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Substream seed for (master seed, stream tag, element id). Stream tags keep
// e.g. the rho0 and Wigner ensembles of one run statistically independent.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream,
                                    std::uint64_t id) {
    std::uint64_t s = master;
    std::uint64_t a = splitmix64(s);
    s ^= stream * 0xD1B54A32D192ED03ULL;
    std::uint64_t b = splitmix64(s);
    s ^= id * 0x8CB92BA72F3D8DD7ULL;
    return a ^ b ^ splitmix64(s);
}

class GaussianRng {
  public:
    explicit GaussianRng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in (0, 1], from the top 53 bits of one engine draw.
    double next_uniform() {
        return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; the second value of each pair is cached.
    double next_normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * M_PI * u2;
        cached_ = r * std::sin(phi);
        have_cached_ = true;
        return r * std::cos(phi);
    }

  private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace mbrx

#endif
