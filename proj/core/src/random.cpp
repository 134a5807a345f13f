#include "storval/random.hpp"

namespace storval {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::mt19937_64 substream(Seed seed, std::uint64_t stream) {
    const std::uint64_t a = mix64(seed);
    return std::mt19937_64(mix64(a ^ mix64(stream + 0x632be59bd9b4e019ULL)));
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace storval
