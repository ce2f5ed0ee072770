#include "taskload/random.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/random/poisson_distribution.hpp>

namespace taskload {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RandomSource::RandomSource(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_id_(stream_id) {
    // For a fixed seed the key is a bijection of the stream id.
    engine_.seed(mix64(seed ^ mix64(stream_id ^ 0x5851f42d4c957f2dULL)));
}

RandomSource RandomSource::substream(std::uint64_t index) const {
    return RandomSource(seed_, mix64(mix64(stream_id_) ^ (index * 0xd1b54a32d192ed03ULL + 1)));
}

double RandomSource::exponential(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate)) throw std::invalid_argument("exponential: rate must be positive");
    return exponential_(engine_) / rate;
}

std::uint64_t RandomSource::poisson(double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) throw std::invalid_argument("poisson: mean must be >= 0");
    if (mean == 0.0) return 0;
    // Boost switches between inversion (small means) and PTRS rejection.
    // Large means are split into exact Poisson summands to stay in its
    // well-tested range.
    constexpr double kChunk = 1.0e6;
    std::uint64_t total = 0;
    while (mean > kChunk) {
        total += static_cast<std::uint64_t>(boost::random::poisson_distribution<std::int64_t, double>(kChunk)(engine_));
        mean -= kChunk;
    }
    total += static_cast<std::uint64_t>(boost::random::poisson_distribution<std::int64_t, double>(mean)(engine_));
    return total;
}

}  // namespace taskload
