#pragma once

#include <compare>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "srp/environment.hpp"
#include "srp/potential.hpp"

namespace srp {

// A finite cycle (s_1 ... s_n), n >= 2, stored in canonical rotation: it
// starts at its smallest point. Fixed points are never stored.
class Cycle {
public:
  Cycle() = default;
  // Validates distinctness and length, then rotates into canonical form.
  explicit Cycle(std::vector<PointId> points);

  // Caller guarantees the points are distinct, n >= 2, and points[0] is the
  // smallest element.
  static Cycle from_canonical(std::vector<PointId> points);

  const std::vector<PointId>& points() const noexcept { return pts_; }
  std::size_t length() const noexcept { return pts_.size(); }
  bool contains(const PointId& p) const;
  // Image of p under the cycle; p must be on the cycle.
  const PointId& image(std::size_t position) const { return pts_[(position + 1) % pts_.size()]; }

  friend bool operator==(const Cycle&, const Cycle&) = default;
  friend std::strong_ordering operator<=>(const Cycle& a, const Cycle& b) noexcept;

  std::string str() const;

private:
  std::vector<PointId> pts_;
};

// Sites visited, consecutive repetitions erased cyclically, in the
// lexicographically minimal rotation. m >= 2 implies x_m != x_1.
struct OrderedSupport {
  std::vector<Site> sites;

  std::size_t size() const noexcept { return sites.size(); }
  friend bool operator==(const OrderedSupport&, const OrderedSupport&) = default;
  friend auto operator<=>(const OrderedSupport&, const OrderedSupport&) = default;
};

// Canonical form of an arbitrary site sequence: cyclic erasure of
// consecutive repeats followed by minimal rotation.
OrderedSupport canonical_support(std::vector<Site> sites);
OrderedSupport ordered_support(const Cycle& gamma);

// A set of pairwise point-disjoint cycles, kept sorted.
class GasConfig {
public:
  GasConfig() = default;
  // Sorts and checks pairwise compatibility.
  explicit GasConfig(std::vector<Cycle> cycles);

  struct Unchecked {};
  // Caller guarantees sorted, pairwise compatible cycles.
  GasConfig(std::vector<Cycle> cycles, Unchecked);

  const std::vector<Cycle>& cycles() const noexcept { return cycles_; }
  std::size_t size() const noexcept { return cycles_.size(); }
  bool empty() const noexcept { return cycles_.empty(); }
  bool contains(const Cycle& c) const;
  // The gas with c added; c must be compatible with every cycle.
  GasConfig with(const Cycle& c) const;

  friend bool operator==(const GasConfig&, const GasConfig&) = default;
  friend auto operator<=>(const GasConfig&, const GasConfig&) = default;

private:
  std::vector<Cycle> cycles_;
};

// Only points located at a single site.
bool is_trivial(const Cycle& gamma);
std::set<Site> sites_of(const Cycle& gamma);

// Sum over the cycle's points of V(X(gamma(s)) - X(s)).
double hamiltonian(const Cycle& gamma, const Potential& v);
// Sum over points s with X(s) in region of V(X(sigma(s)) - X(s)).
double hamiltonian(const GasConfig& sigma, const Potential& v, const Box& region);
// As above, after checking every point exists in env.
double hamiltonian(const GasConfig& sigma, const Potential& v, const Box& region, const Environment& env);
// Sum of V(y_{i+1} - y_i) with y_{m+1} = y_1.
double support_hamiltonian(const OrderedSupport& ybar, const Potential& v);

// exp(-alpha H(gamma))
double weight(const Cycle& gamma, double alpha, const Potential& v);

// Point-disjoint supports.
bool compatible(const Cycle& a, const Cycle& b);
bool gas_compatible(const Cycle& g, const GasConfig& eta);
// Projections share a site. Compatible cycles may be neighbours.
bool neighbors(const Cycle& a, const Cycle& b);

// Throws a consistency error naming the first point missing from env.
void check_points(const GasConfig& eta, const Environment& env);

// Finite-support permutation: entries s -> sigma(s); fixed points may be
// present or omitted.
using Permutation = std::map<PointId, PointId>;

GasConfig gas_from_permutation(const Permutation& pi);
Permutation permutation_from_gas(const GasConfig& eta);

}  // namespace srp
