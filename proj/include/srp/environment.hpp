#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "srp/lattice.hpp"

namespace srp {

// A tagged point (x, i) with 1 <= i <= theta(x).
struct PointId {
  Site site;
  int tag = 0;

  friend bool operator==(const PointId&, const PointId&) = default;
  friend std::strong_ordering operator<=>(const PointId& a, const PointId& b) noexcept {
    if (auto c = a.site <=> b.site; c != 0) return c;
    return a.tag <=> b.tag;
  }

  std::string str() const { return site.str() + "#" + std::to_string(tag); }
};

// Quenched disorder: per-site multiplicities on a finite box. Zero sites are
// not stored.
class Environment {
public:
  Environment() = default;
  Environment(Box box, double rho, std::uint64_t seed, std::map<Site, int> theta);

  std::size_t dim() const noexcept { return box_.dim(); }
  const Box& box() const noexcept { return box_; }
  double rho() const noexcept { return rho_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::map<Site, int>& multiplicities() const noexcept { return theta_; }

  int theta(const Site& x) const;
  std::size_t point_count() const noexcept { return n_points_; }
  std::size_t point_count(const Box& region) const;
  bool has_point(const PointId& p) const;

  friend bool operator==(const Environment&, const Environment&) = default;

private:
  Box box_;
  double rho_ = 0.0;
  std::uint64_t seed_ = 0;
  std::map<Site, int> theta_;
  std::size_t n_points_ = 0;
};

// i.i.d. Poisson(rho) multiplicities, sites visited in lexicographic order.
Environment sample_environment(std::size_t dim, const Box& box, double rho, std::uint64_t seed);

// All points of the region, ordered by (site, tag).
std::vector<PointId> points_of(const Environment& env, const Box& region);

struct ContinuumPointSet {
  std::size_t dim = 0;
  RealBox region;
  std::vector<std::vector<double>> points;
  double rho = 0.0;
  std::uint64_t seed = 0;

  friend bool operator==(const ContinuumPointSet&, const ContinuumPointSet&) = default;
};

// Homogeneous Poisson process of intensity rho on a real box.
ContinuumPointSet sample_continuum(std::size_t dim, const RealBox& region, double rho, std::uint64_t seed);

// Bijection between continuum points and tagged lattice points. Point k of
// the set maps to to_point[k].
struct TagMap {
  std::vector<PointId> to_point;
  std::map<PointId, std::size_t> to_index;
};

struct Discretization {
  Environment env;
  TagMap tags;
};

// Collects the points of each unit cube x + [0,1)^d at site x. Within a cube
// tags follow increasing Euclidean distance to the corner x, ties broken by
// lexicographic coordinate order.
Discretization discretize(const ContinuumPointSet& pts);

// floor() applied coordinatewise.
Site floor_site(std::span<const double> x);

}  // namespace srp
