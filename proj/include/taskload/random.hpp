#pragma once

#include <cstdint>

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

namespace taskload {

/// Deterministic random source keyed by (seed, stream_id).
///
/// The engine is a 64-bit Mersenne Twister seeded with a SplitMix64 hash of
/// (seed, stream_id); for one seed, distinct stream ids always give distinct
/// engine seeds. Seeding this way is cheap enough for one stream per aircraft. Standard normals come from Boost's
/// ziggurat sampler, exponentials from Boost's inversion sampler; both are
/// fixed algorithms, so a key always reproduces the same variates.
///
/// Not thread-safe: each concurrent worker owns its own source.
class RandomSource {
public:
    RandomSource(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    /// Independent child stream; a pure function of (stream_id, index).
    RandomSource substream(std::uint64_t index) const;

    double normal() { return normal_(engine_); }

    /// Uniform on [0, 1).
    double uniform() { return uniform_(engine_); }

    /// Exponential with the given rate (> 0).
    double exponential(double rate);

    /// Poisson count with the given mean (>= 0).
    std::uint64_t poisson(double mean);

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    boost::random::mt19937_64 engine_;
    boost::random::normal_distribution<double> normal_;
    boost::random::uniform_01<double> uniform_;
    boost::random::exponential_distribution<double> exponential_;
};

/// SplitMix64 finaliser, used to derive stream ids.
std::uint64_t mix64(std::uint64_t x);

}  // namespace taskload
