#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace srp {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Independent stream seed for (seed, stream). Used for per-replica and
// per-subwindow randomness so that results never depend on scheduling.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

// Thin wrapper over mt19937_64. The variate transforms are implemented here
// rather than with <random> distributions because the latter are
// implementation-defined, and samples must be bit-reproducible across
// toolchains.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1].
  double uniform_pos() { return 1.0 - uniform(); }
  double exponential(double rate = 1.0);
  std::uint64_t poisson(double mean);
  // Index i with probability cumulative[i] - cumulative[i-1], where
  // cumulative is nondecreasing and cumulative.back() is the total mass.
  std::size_t categorical(std::span<const double> cumulative);

private:
  std::mt19937_64 engine_;
};

}  // namespace srp
