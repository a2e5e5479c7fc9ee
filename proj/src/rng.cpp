#include "srp/rng.hpp"

#include <algorithm>
#include <cmath>

namespace srp {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::exponential(double rate) {
  return -std::log(uniform_pos()) / rate;
}

std::uint64_t Rng::poisson(double mean) {
  if (!(mean > 0.0)) return 0;
  // Inversion is exact and cheap for small means; larger means are split
  // into independent pieces (a sum of Poissons is Poisson).
  constexpr double kChunk = 16.0;
  std::uint64_t total = 0;
  while (mean > 0.0) {
    const double m = std::min(mean, kChunk);
    mean -= m;
    double p = std::exp(-m);
    double cdf = p;
    const double u = uniform();
    std::uint64_t k = 0;
    while (u >= cdf) {
      ++k;
      p *= m / static_cast<double>(k);
      const double next = cdf + p;
      if (next == cdf) break;  // pmf underflow: u is in the far tail
      cdf = next;
    }
    total += k;
  }
  return total;
}

std::size_t Rng::categorical(std::span<const double> cumulative) {
  const double u = uniform() * cumulative.back();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  if (it == cumulative.end()) --it;
  return static_cast<std::size_t>(it - cumulative.begin());
}

}  // namespace srp
