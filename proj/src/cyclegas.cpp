#include "srp/cyclegas.hpp"

#include <algorithm>
#include <cmath>

#include "srp/errors.hpp"

namespace srp {

Cycle::Cycle(std::vector<PointId> points) {
  if (points.size() < 2) throw Error(ErrorKind::structure, "a cycle needs at least two points");
  std::vector<PointId> sorted = points;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw Error(ErrorKind::structure, "cycle visits a point twice");
  auto first = std::min_element(points.begin(), points.end());
  std::rotate(points.begin(), first, points.end());
  pts_ = std::move(points);
}

Cycle Cycle::from_canonical(std::vector<PointId> points) {
  Cycle c;
  c.pts_ = std::move(points);
  return c;
}

bool Cycle::contains(const PointId& p) const {
  return std::find(pts_.begin(), pts_.end(), p) != pts_.end();
}

std::strong_ordering operator<=>(const Cycle& a, const Cycle& b) noexcept {
  return std::lexicographical_compare_three_way(a.pts_.begin(), a.pts_.end(), b.pts_.begin(), b.pts_.end());
}

std::string Cycle::str() const {
  std::string s = "[";
  for (std::size_t i = 0; i < pts_.size(); ++i) {
    if (i) s += ' ';
    s += pts_[i].str();
  }
  return s + "]";
}

OrderedSupport canonical_support(std::vector<Site> sites) {
  std::vector<Site> erased;
  erased.reserve(sites.size());
  for (const Site& x : sites)
    if (erased.empty() || erased.back() != x) erased.push_back(x);
  while (erased.size() > 1 && erased.back() == erased.front()) erased.pop_back();

  const std::size_t m = erased.size();
  std::size_t best = 0;
  for (std::size_t r = 1; r < m; ++r) {
    for (std::size_t k = 0; k < m; ++k) {
      const auto c = erased[(r + k) % m] <=> erased[(best + k) % m];
      if (c < 0) {
        best = r;
        break;
      }
      if (c > 0) break;
    }
  }
  std::rotate(erased.begin(), erased.begin() + static_cast<std::ptrdiff_t>(best), erased.end());
  return {std::move(erased)};
}

OrderedSupport ordered_support(const Cycle& gamma) {
  std::vector<Site> sites;
  sites.reserve(gamma.length());
  for (const auto& p : gamma.points()) sites.push_back(p.site);
  return canonical_support(std::move(sites));
}

GasConfig::GasConfig(std::vector<Cycle> cycles) : cycles_(std::move(cycles)) {
  std::sort(cycles_.begin(), cycles_.end());
  std::vector<PointId> used;
  for (const auto& c : cycles_) {
    if (c.length() < 2) throw Error(ErrorKind::structure, "gas contains a cycle shorter than 2");
    used.insert(used.end(), c.points().begin(), c.points().end());
  }
  std::sort(used.begin(), used.end());
  if (std::adjacent_find(used.begin(), used.end()) != used.end())
    throw Error(ErrorKind::structure, "gas contains incompatible cycles");
}

GasConfig::GasConfig(std::vector<Cycle> cycles, Unchecked) : cycles_(std::move(cycles)) {}

bool GasConfig::contains(const Cycle& c) const {
  return std::binary_search(cycles_.begin(), cycles_.end(), c);
}

GasConfig GasConfig::with(const Cycle& c) const {
  if (!gas_compatible(c, *this)) throw Error(ErrorKind::structure, "cycle incompatible with gas");
  std::vector<Cycle> next = cycles_;
  next.insert(std::upper_bound(next.begin(), next.end(), c), c);
  return GasConfig(std::move(next), Unchecked{});
}

bool is_trivial(const Cycle& gamma) {
  const auto& pts = gamma.points();
  return std::all_of(pts.begin(), pts.end(), [&](const PointId& p) { return p.site == pts.front().site; });
}

std::set<Site> sites_of(const Cycle& gamma) {
  std::set<Site> out;
  for (const auto& p : gamma.points()) out.insert(p.site);
  return out;
}

double hamiltonian(const Cycle& gamma, const Potential& v) {
  double h = 0.0;
  const auto& pts = gamma.points();
  for (std::size_t i = 0; i < pts.size(); ++i) h += v(gamma.image(i).site - pts[i].site);
  return h;
}

double hamiltonian(const GasConfig& sigma, const Potential& v, const Box& region) {
  double h = 0.0;
  for (const auto& c : sigma.cycles()) {
    const auto& pts = c.points();
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (region.contains(pts[i].site)) h += v(c.image(i).site - pts[i].site);
  }
  return h;
}

double hamiltonian(const GasConfig& sigma, const Potential& v, const Box& region, const Environment& env) {
  check_points(sigma, env);
  return hamiltonian(sigma, v, region);
}

double support_hamiltonian(const OrderedSupport& ybar, const Potential& v) {
  const auto& y = ybar.sites;
  if (y.size() < 2) return 0.0;
  double h = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) h += v(y[(i + 1) % y.size()] - y[i]);
  return h;
}

double weight(const Cycle& gamma, double alpha, const Potential& v) {
  return std::exp(-alpha * hamiltonian(gamma, v));
}

bool compatible(const Cycle& a, const Cycle& b) {
  for (const auto& p : a.points())
    if (b.contains(p)) return false;
  return true;
}

bool gas_compatible(const Cycle& g, const GasConfig& eta) {
  return std::all_of(eta.cycles().begin(), eta.cycles().end(), [&](const Cycle& c) { return compatible(g, c); });
}

bool neighbors(const Cycle& a, const Cycle& b) {
  for (const auto& p : a.points())
    for (const auto& q : b.points())
      if (p.site == q.site) return true;
  return false;
}

void check_points(const GasConfig& eta, const Environment& env) {
  for (const auto& c : eta.cycles())
    for (const auto& p : c.points())
      if (!env.has_point(p)) throw Error(ErrorKind::consistency, "point " + p.str() + " does not exist in the environment");
}

GasConfig gas_from_permutation(const Permutation& pi) {
  Permutation moved;
  for (const auto& [s, t] : pi)
    if (s != t) moved.emplace(s, t);

  std::vector<PointId> images;
  images.reserve(moved.size());
  for (const auto& [s, t] : moved) {
    if (!moved.contains(t)) throw Error(ErrorKind::structure, "permutation is not a bijection: " + t.str() + " has no image entry");
    images.push_back(t);
  }
  std::sort(images.begin(), images.end());
  if (std::adjacent_find(images.begin(), images.end()) != images.end())
    throw Error(ErrorKind::structure, "permutation is not injective");

  std::vector<Cycle> cycles;
  std::set<PointId> seen;
  for (const auto& [start, unused] : moved) {
    if (seen.contains(start)) continue;
    std::vector<PointId> orbit;
    PointId s = start;
    do {
      orbit.push_back(s);
      seen.insert(s);
      if (orbit.size() > moved.size()) throw Error(ErrorKind::structure, "orbit longer than the point count");
      s = moved.at(s);
    } while (s != start);
    // Iteration is in increasing order, so start is the orbit minimum.
    cycles.push_back(Cycle::from_canonical(std::move(orbit)));
  }
  std::sort(cycles.begin(), cycles.end());
  return GasConfig(std::move(cycles), GasConfig::Unchecked{});
}

Permutation permutation_from_gas(const GasConfig& eta) {
  Permutation pi;
  for (const auto& c : eta.cycles())
    for (std::size_t i = 0; i < c.length(); ++i) pi.emplace(c.points()[i], c.image(i));
  return pi;
}

}  // namespace srp
