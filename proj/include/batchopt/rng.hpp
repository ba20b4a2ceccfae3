#ifndef BATCHOPT_RNG_HPP_
#define BATCHOPT_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

// Seeded randomness helpers. std::mt19937_64 output is pinned by the
// standard, but the std distributions are not, so everything derived
// from raw engine output is hand-rolled here to keep seeded results
// identical across compilers.
namespace batchopt {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Independent stream seed for row/cell `index` under a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t s = master;
  std::uint64_t a = splitmix64(s);
  s = a ^ (index * 0xD1B54A32D192ED03ULL + 0x2545F4914F6CDD1DULL);
  return splitmix64(s);
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
  std::uint64_t s = seed;
  return std::mt19937_64(splitmix64(s));
}

// Uniform integer in [0, n) by rejection; n >= 1.
inline std::uint64_t bounded(std::mt19937_64& gen, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    std::uint64_t r = gen();
    if (r >= threshold) return r % n;
  }
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Box-Muller transform; returns two independent standard normals.
inline std::pair<double, double> normal_pair(std::mt19937_64& gen) {
  const double u1 = (static_cast<double>(gen() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = uniform01(gen);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * 3.14159265358979323846 * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

// Knuth's product method; fine for small lambda.
inline int poisson(std::mt19937_64& gen, double lambda) {
  const double limit = std::exp(-lambda);
  int k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= uniform01(gen);
  } while (p > limit);
  return k - 1;
}

template <typename T>
void shuffle_fisher_yates(std::vector<T>& values, std::mt19937_64& gen) {
  for (std::size_t i = values.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(bounded(gen, i));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace batchopt

#endif  // BATCHOPT_RNG_HPP_
