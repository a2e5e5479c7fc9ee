#include "srp/environment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "srp/errors.hpp"
#include "srp/rng.hpp"

namespace srp {

Environment::Environment(Box box, double rho, std::uint64_t seed, std::map<Site, int> theta)
    : box_(std::move(box)), rho_(rho), seed_(seed) {
  for (auto it = theta.begin(); it != theta.end();) {
    if (it->second < 0) throw Error(ErrorKind::parameter, "negative multiplicity at " + it->first.str());
    if (!box_.contains(it->first))
      throw Error(ErrorKind::parameter, "site " + it->first.str() + " outside the environment box");
    if (it->second == 0) {
      it = theta.erase(it);
    } else {
      n_points_ += static_cast<std::size_t>(it->second);
      ++it;
    }
  }
  theta_ = std::move(theta);
}

int Environment::theta(const Site& x) const {
  auto it = theta_.find(x);
  return it == theta_.end() ? 0 : it->second;
}

std::size_t Environment::point_count(const Box& region) const {
  std::size_t n = 0;
  for (const auto& [x, t] : theta_)
    if (region.contains(x)) n += static_cast<std::size_t>(t);
  return n;
}

bool Environment::has_point(const PointId& p) const {
  return p.tag >= 1 && p.tag <= theta(p.site);
}

Environment sample_environment(std::size_t dim, const Box& box, double rho, std::uint64_t seed) {
  if (box.dim() != dim) throw Error(ErrorKind::parameter, "box dimension does not match dim");
  if (box.empty()) throw Error(ErrorKind::parameter, "empty box");
  if (!(rho > 0.0 && rho < 1.0)) throw Error(ErrorKind::parameter, "rho must lie in (0,1)");
  Rng rng(seed);
  std::map<Site, int> theta;
  box.for_each([&](const Site& x) {
    const auto k = rng.poisson(rho);
    if (k > 0) theta.emplace(x, static_cast<int>(k));
  });
  return Environment(box, rho, seed, std::move(theta));
}

std::vector<PointId> points_of(const Environment& env, const Box& region) {
  if (!env.box().contains(region))
    throw Error(ErrorKind::domain, "region " + format_box(region) + " not inside environment box");
  std::vector<PointId> out;
  for (const auto& [x, t] : env.multiplicities()) {
    if (!region.contains(x)) continue;
    for (int i = 1; i <= t; ++i) out.push_back({x, i});
  }
  return out;
}

ContinuumPointSet sample_continuum(std::size_t dim, const RealBox& region, double rho, std::uint64_t seed) {
  if (region.dim() != dim || region.hi.size() != dim || dim == 0)
    throw Error(ErrorKind::parameter, "region dimension does not match dim");
  if (!(region.volume() > 0.0)) throw Error(ErrorKind::parameter, "region must have positive volume");
  if (!(rho > 0.0)) throw Error(ErrorKind::parameter, "rho must be positive");
  Rng rng(seed);
  ContinuumPointSet out{dim, region, {}, rho, seed};
  const auto n = rng.poisson(rho * region.volume());
  std::set<std::vector<double>> seen;
  out.points.reserve(n);
  while (out.points.size() < n) {
    std::vector<double> p(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      p[i] = region.lo[i] + rng.uniform() * (region.hi[i] - region.lo[i]);
      if (p[i] >= region.hi[i]) p[i] = std::nextafter(region.hi[i], region.lo[i]);
    }
    // Coincident draws have probability zero; redraw keeps the set simple.
    if (seen.insert(p).second) out.points.push_back(std::move(p));
  }
  return out;
}

Site floor_site(std::span<const double> x) {
  Site s(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = static_cast<int>(std::floor(x[i]));
  return s;
}

namespace {

double dist2_to_corner(const std::vector<double>& p, const Site& corner) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p[i] - corner[i];
    s += d * d;
  }
  return s;
}

}  // namespace

Discretization discretize(const ContinuumPointSet& pts) {
  const std::size_t d = pts.dim;
  Box box;
  if (pts.region.dim() == d && d > 0) {
    Site lo(d), hi(d);
    for (std::size_t i = 0; i < d; ++i) {
      lo[i] = static_cast<int>(std::floor(pts.region.lo[i]));
      hi[i] = static_cast<int>(std::floor(pts.region.hi[i]));
    }
    box = Box(lo, hi);
  }

  std::map<Site, std::vector<std::size_t>> cells;
  for (std::size_t k = 0; k < pts.points.size(); ++k) {
    const Site x = floor_site(pts.points[k]);
    box = box.dim() == 0 ? Box(x, x) : box.hull(x);
    cells[x].push_back(k);
  }

  Discretization out;
  out.tags.to_point.resize(pts.points.size());
  std::map<Site, int> theta;
  for (auto& [x, idx] : cells) {
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      const double da = dist2_to_corner(pts.points[a], x);
      const double db = dist2_to_corner(pts.points[b], x);
      if (da != db) return da < db;
      return pts.points[a] < pts.points[b];
    });
    for (std::size_t j = 0; j < idx.size(); ++j) {
      const PointId p{x, static_cast<int>(j + 1)};
      out.tags.to_point[idx[j]] = p;
      out.tags.to_index.emplace(p, idx[j]);
    }
    theta.emplace(x, static_cast<int>(idx.size()));
  }
  out.env = Environment(box, pts.rho, pts.seed, std::move(theta));
  return out;
}

}  // namespace srp
