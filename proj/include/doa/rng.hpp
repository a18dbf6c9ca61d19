#pragma once

#include <cstdint>
#include <random>

#include "doa/types.hpp"

namespace doa {

/// SplitMix64 step; used to turn (seed, counter...) tuples into
/// well-mixed stream seeds so Monte Carlo trials are reproducible and
/// independent of execution order.
std::uint64_t splitmix64(std::uint64_t x);

/// Mix an arbitrary number of counters into one seed.
std::uint64_t seed_for(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0,
                       std::uint64_t c = 0);

/// Random stream with an explicit circular complex Gaussian source.
/// The Box-Muller mapping is spelled out here (instead of relying on
/// std::normal_distribution) so that byte-level reproducibility does not
/// depend on the standard library's distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    /// Uniform in [0, 1).
    double uniform();

    /// Standard circular complex Gaussian: E[z] = 0, E[|z|^2] = 1,
    /// real and imaginary parts i.i.d. N(0, 1/2).
    Complex complex_normal();

    /// Real standard normal N(0, 1).
    double normal();

private:
    std::mt19937_64 engine_;
};

}  // namespace doa
