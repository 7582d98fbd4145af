#ifndef TLPOT_RANDOM_HPP
#define TLPOT_RANDOM_HPP

#include <cstdint>
#include <random>

namespace tlpot {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer. Used to decorrelate nearby seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Counter-based split: stream `index` of `master`. Independent of the
/// order in which streams are requested.
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::uint64_t index) noexcept {
  return mix64(master ^ mix64(index + 0xD1B54A32D192ED03ULL));
}

inline Engine make_engine(std::uint64_t seed) { return Engine(mix64(seed)); }

/// Uniform on the open interval (0, 1) from the top 53 bits.
inline double uniform_open(Engine& eng) {
  return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Gamma(shape, rate) variate; exact for every shape > 0.
inline double gamma_variate(Engine& eng, double shape, double rate) {
  std::gamma_distribution<double> dist(shape, 1.0 / rate);
  return dist(eng);
}

}  // namespace tlpot

#endif  // TLPOT_RANDOM_HPP
