#ifndef STORVAL_RANDOM_HPP
#define STORVAL_RANDOM_HPP

#include <cstdint>
#include <random>

namespace storval {

using Seed = std::uint64_t;

// splitmix64 finalizer; a bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t x);

// Independent generator for (seed, stream). The same pair always yields the
// same sequence, whatever order or thread the streams are created in.
std::mt19937_64 substream(Seed seed, std::uint64_t stream);

// Uniform double in [0, 1) built from the top 53 bits of one draw.
double uniform01(std::mt19937_64& rng);

}  // namespace storval

#endif  // STORVAL_RANDOM_HPP
