#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "srp/cyclegas.hpp"

namespace srp {

inline constexpr std::size_t kDefaultMaxPoints = 9;

// Finite-cycle boundary permutation xi given as a gas over the ambient
// environment. The empty gas is the identity.
struct BoundarySpec {
  GasConfig xi;

  static BoundarySpec identity() { return {}; }
  // Throws a boundary error when two cycles share a point.
  static BoundarySpec from_cycles(std::vector<Cycle> cycles);

  bool is_identity() const noexcept { return xi.empty(); }
  std::uint64_t digest() const;
};

// B(xi, lam): cycles of xi meeting both lam and its complement.
std::vector<Cycle> boundary_cycles(const BoundarySpec& xi, const Box& lam);

// sum_{k=2}^{n} C(n,k) (k-1)!
std::uint64_t cycle_count(std::size_t n);

// All cycles supported in lam, canonical and sorted.
std::vector<Cycle> enumerate_cycles(const Environment& env, const Box& lam,
                                    std::size_t max_points = kDefaultMaxPoints);

// A finite-volume problem in indexed form: points of lam, the cycle space
// Gamma_{theta,lam} with supports as bitmasks over those points, weights,
// and the boundary cycles.
struct Instance {
  Environment env;
  Box lam;
  BoundarySpec xi;
  double alpha = 1.0;
  Potential potential = Potential::quadratic(1);

  std::vector<PointId> points;
  std::vector<Cycle> cycles;
  std::vector<std::uint64_t> masks;
  std::vector<double> weights;
  std::vector<Cycle> boundary;
  // Points of lam used by boundary cycles.
  std::uint64_t boundary_mask = 0;

  double total_weight() const;
  std::size_t index_of(const Cycle& c) const;  // throws if absent
  std::uint64_t mask_of(const GasConfig& eta) const;
};

Instance make_instance(const Environment& env, const Box& lam, const BoundarySpec& xi, double alpha,
                       const Potential& v, std::size_t max_points = kDefaultMaxPoints);

// Every gas of S^xi_{theta,lam}: B(xi,lam) together with each pairwise
// compatible family of inner cycles avoiding the points B uses. Cycles of xi
// lying wholly inside or wholly outside lam are not part of the result.
std::vector<GasConfig> enumerate_compatible(const Environment& env, const Box& lam, const BoundarySpec& xi,
                                            std::size_t max_points = kDefaultMaxPoints);
std::vector<GasConfig> enumerate_compatible(const Instance& inst);

struct SpecEntry {
  GasConfig gas;
  double probability = 0.0;
  double unnormalized = 0.0;  // product of inner cycle weights
};

struct SpecParams {
  double alpha = 0.0;
  std::string potential;
  Box lam;
  std::uint64_t xi_digest = 0;
};

// Exact finite-volume Gibbs law, entries by descending probability.
struct SpecTable {
  std::vector<SpecEntry> entries;
  double partition_value = 0.0;
  SpecParams params;
  // Largest relative gap between the point-Hamiltonian and cycle-product
  // forms of the law.
  double form_mismatch = 0.0;

  std::map<GasConfig, double> as_map() const;
};

SpecTable specification(const Environment& env, const Box& lam, const BoundarySpec& xi, double alpha,
                        const Potential& v, std::size_t max_points = kDefaultMaxPoints);
SpecTable specification(const Instance& inst);

// Inverse-CDF draw over the entries in stored order.
GasConfig sample_exact(const SpecTable& table, std::uint64_t seed);

// Largest relative residual of G(eta) w(gamma) = G(eta + gamma) over every
// entry eta and inner cycle gamma compatible with it.
double detailed_balance_residual(const SpecTable& table, const Instance& inst);

}  // namespace srp
