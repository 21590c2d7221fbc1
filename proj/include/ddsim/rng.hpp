#ifndef DDSIM_RNG_HPP
#define DDSIM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace ddsim {

/// SplitMix64 finalizer; decorrelates substream seeds derived from one base.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent substream seed for (base, stream). Every simulated entity
/// (each client, each zombie, the topology builder) draws from its own
/// stream, so paired runs that differ only in attack parameters keep
/// identical legitimate traffic.
inline std::uint64_t stream_seed(std::uint64_t base, std::uint64_t stream) {
    return splitmix64(base ^ splitmix64(stream));
}

/// Seeded generator for one substream.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(eng_); }

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(eng_);
    }

    std::uint64_t uniform_index(std::uint64_t n) {
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(eng_);
    }

    /// Exponential variate by inversion; mean in the caller's unit.
    double exponential(double mean) {
        const double u = uniform();
        return -mean * std::log(1.0 - u);
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace ddsim

#endif  // DDSIM_RNG_HPP
