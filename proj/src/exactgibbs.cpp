#include "srp/exactgibbs.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>

#include "srp/errors.hpp"
#include "srp/rng.hpp"

namespace srp {

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

bool meets(const Cycle& c, const Box& lam, bool inside) {
  return std::any_of(c.points().begin(), c.points().end(),
                     [&](const PointId& p) { return lam.contains(p.site) == inside; });
}

void check_cap(std::size_t n, std::size_t max_points) {
  if (n > max_points)
    throw Error(ErrorKind::cap_exceeded, std::to_string(n) + " points exceed the cap of " + std::to_string(max_points) +
                                             " (cycle space would hold " + std::to_string(cycle_count(n)) + " cycles)");
  if (n > 64) throw Error(ErrorKind::cap_exceeded, "more than 64 points cannot be indexed");
}

// Depth-first over sequences whose first entry is their minimum; emits in
// lexicographic order, which is the canonical cycle order.
void enumerate_indexed(std::size_t n, const std::function<void(const std::vector<std::uint8_t>&)>& emit) {
  std::vector<std::uint8_t> seq;
  std::uint64_t used = 0;
  std::function<void()> extend = [&]() {
    if (seq.size() >= 2) emit(seq);
    for (std::size_t j = seq.front() + 1u; j < n; ++j) {
      if (used >> j & 1u) continue;
      seq.push_back(static_cast<std::uint8_t>(j));
      used |= std::uint64_t{1} << j;
      extend();
      used &= ~(std::uint64_t{1} << j);
      seq.pop_back();
    }
  };
  for (std::size_t s = 0; s < n; ++s) {
    seq.assign(1, static_cast<std::uint8_t>(s));
    used = std::uint64_t{1} << s;
    extend();
  }
}

}  // namespace

BoundarySpec BoundarySpec::from_cycles(std::vector<Cycle> cycles) {
  try {
    return {GasConfig(std::move(cycles))};
  } catch (const Error& e) {
    throw Error(ErrorKind::boundary, std::string("invalid boundary condition: ") + e.what());
  }
}

std::uint64_t BoundarySpec::digest() const {
  std::string s;
  for (const auto& c : xi.cycles()) s += c.str();
  return fnv1a(s);
}

std::vector<Cycle> boundary_cycles(const BoundarySpec& xi, const Box& lam) {
  std::vector<Cycle> out;
  for (const auto& c : xi.xi.cycles())
    if (meets(c, lam, true) && meets(c, lam, false)) out.push_back(c);
  return out;
}

std::uint64_t cycle_count(std::size_t n) {
  // C(n,k) (k-1)! = n! / (k (n-k)!)
  std::uint64_t total = 0;
  for (std::size_t k = 2; k <= n; ++k) {
    std::uint64_t term = 1;
    for (std::size_t i = n - k + 1; i <= n; ++i) term *= i;
    total += term / k;
  }
  return total;
}

std::vector<Cycle> enumerate_cycles(const Environment& env, const Box& lam, std::size_t max_points) {
  const auto pts = points_of(env, lam);
  check_cap(pts.size(), max_points);
  std::vector<Cycle> out;
  out.reserve(cycle_count(pts.size()));
  enumerate_indexed(pts.size(), [&](const std::vector<std::uint8_t>& seq) {
    std::vector<PointId> c;
    c.reserve(seq.size());
    for (auto i : seq) c.push_back(pts[i]);
    out.push_back(Cycle::from_canonical(std::move(c)));
  });
  return out;
}

double Instance::total_weight() const {
  double w = 0.0;
  for (double x : weights) w += x;
  return w;
}

std::size_t Instance::index_of(const Cycle& c) const {
  auto it = std::lower_bound(cycles.begin(), cycles.end(), c);
  if (it == cycles.end() || *it != c) throw Error(ErrorKind::contract, "cycle " + c.str() + " not in the cycle space");
  return static_cast<std::size_t>(it - cycles.begin());
}

std::uint64_t Instance::mask_of(const GasConfig& eta) const {
  std::uint64_t m = 0;
  for (const auto& c : eta.cycles())
    for (const auto& p : c.points()) {
      auto it = std::lower_bound(points.begin(), points.end(), p);
      if (it != points.end() && *it == p) m |= std::uint64_t{1} << (it - points.begin());
    }
  return m;
}

Instance make_instance(const Environment& env, const Box& lam, const BoundarySpec& xi, double alpha,
                       const Potential& v, std::size_t max_points) {
  if (!(alpha > 0.0)) throw Error(ErrorKind::parameter, "alpha must be positive");
  if (v.dim() != env.dim()) throw Error(ErrorKind::parameter, "potential and environment dimensions differ");
  check_points(xi.xi, env);

  Instance inst;
  inst.env = env;
  inst.lam = lam;
  inst.xi = xi;
  inst.alpha = alpha;
  inst.potential = v;
  inst.points = points_of(env, lam);
  check_cap(inst.points.size(), max_points);

  inst.cycles.reserve(cycle_count(inst.points.size()));
  enumerate_indexed(inst.points.size(), [&](const std::vector<std::uint8_t>& seq) {
    std::vector<PointId> c;
    c.reserve(seq.size());
    std::uint64_t mask = 0;
    for (auto i : seq) {
      c.push_back(inst.points[i]);
      mask |= std::uint64_t{1} << i;
    }
    Cycle cyc = Cycle::from_canonical(std::move(c));
    inst.weights.push_back(weight(cyc, alpha, v));
    inst.masks.push_back(mask);
    inst.cycles.push_back(std::move(cyc));
  });

  inst.boundary = boundary_cycles(xi, lam);
  inst.boundary_mask = inst.mask_of(GasConfig(inst.boundary, GasConfig::Unchecked{}));
  return inst;
}

std::vector<GasConfig> enumerate_compatible(const Environment& env, const Box& lam, const BoundarySpec& xi,
                                            std::size_t max_points) {
  return enumerate_compatible(make_instance(env, lam, xi, 1.0, Potential::quadratic(env.dim()), max_points));
}

std::vector<GasConfig> enumerate_compatible(const Instance& inst) {
  const std::size_t n = inst.points.size();
  // Cycles grouped by their smallest point.
  std::vector<std::vector<std::size_t>> by_first(n);
  for (std::size_t k = 0; k < inst.cycles.size(); ++k)
    by_first[static_cast<std::size_t>(std::countr_zero(inst.masks[k]))].push_back(k);

  std::vector<GasConfig> out;
  std::vector<std::size_t> chosen;
  const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;

  std::function<void(std::uint64_t)> assign = [&](std::uint64_t free) {
    if (free == 0) {
      std::vector<Cycle> cycles = inst.boundary;
      for (auto k : chosen) cycles.push_back(inst.cycles[k]);
      std::sort(cycles.begin(), cycles.end());
      out.emplace_back(std::move(cycles), GasConfig::Unchecked{});
      return;
    }
    const auto p = static_cast<std::size_t>(std::countr_zero(free));
    const std::uint64_t rest = free & ~(std::uint64_t{1} << p);
    assign(rest);  // p is a fixed point
    for (auto k : by_first[p]) {
      if ((inst.masks[k] & ~free) != 0) continue;
      chosen.push_back(k);
      assign(free & ~inst.masks[k]);
      chosen.pop_back();
    }
  };
  assign(all & ~inst.boundary_mask);
  return out;
}

std::map<GasConfig, double> SpecTable::as_map() const {
  std::map<GasConfig, double> m;
  for (const auto& e : entries) m.emplace(e.gas, e.probability);
  return m;
}

SpecTable specification(const Environment& env, const Box& lam, const BoundarySpec& xi, double alpha,
                        const Potential& v, std::size_t max_points) {
  return specification(make_instance(env, lam, xi, alpha, v, max_points));
}

SpecTable specification(const Instance& inst) {
  auto gases = enumerate_compatible(inst);

  SpecTable table;
  table.params = {inst.alpha, inst.potential.name(), inst.lam, inst.xi.digest()};
  table.entries.reserve(gases.size());

  std::vector<double> point_form;
  point_form.reserve(gases.size());
  double z_point = 0.0;
  for (auto& g : gases) {
    double w = 1.0;
    for (const auto& c : g.cycles()) {
      auto it = std::lower_bound(inst.cycles.begin(), inst.cycles.end(), c);
      if (it != inst.cycles.end() && *it == c) w *= inst.weights[static_cast<std::size_t>(it - inst.cycles.begin())];
    }
    const double p = std::exp(-inst.alpha * hamiltonian(g, inst.potential, inst.lam));
    point_form.push_back(p);
    z_point += p;
    table.partition_value += w;
    table.entries.push_back({std::move(g), 0.0, w});
  }

  for (std::size_t i = 0; i < table.entries.size(); ++i) {
    auto& e = table.entries[i];
    e.probability = e.unnormalized / table.partition_value;
    const double q = point_form[i] / z_point;
    table.form_mismatch = std::max(table.form_mismatch, std::abs(e.probability - q) / std::max(e.probability, q));
  }
  if (table.form_mismatch > 1e-12)
    throw Error(ErrorKind::contract, "point and cycle-product forms of the Gibbs law disagree");

  std::sort(table.entries.begin(), table.entries.end(), [](const SpecEntry& a, const SpecEntry& b) {
    if (a.probability != b.probability) return a.probability > b.probability;
    return a.gas < b.gas;
  });
  return table;
}

GasConfig sample_exact(const SpecTable& table, std::uint64_t seed) {
  if (table.entries.empty()) throw Error(ErrorKind::parameter, "empty Gibbs table");
  Rng rng(seed);
  const double u = rng.uniform();
  double cdf = 0.0;
  for (const auto& e : table.entries) {
    cdf += e.probability;
    if (u < cdf) return e.gas;
  }
  return table.entries.back().gas;
}

double detailed_balance_residual(const SpecTable& table, const Instance& inst) {
  const auto law = table.as_map();
  double worst = 0.0;
  for (const auto& [eta, p] : law) {
    const std::uint64_t occupied = inst.mask_of(eta) | inst.boundary_mask;
    for (std::size_t k = 0; k < inst.cycles.size(); ++k) {
      if (inst.masks[k] & occupied) continue;
      auto it = law.find(eta.with(inst.cycles[k]));
      if (it == law.end()) throw Error(ErrorKind::contract, "eta + gamma missing from the state space");
      const double lhs = p * inst.weights[k];
      worst = std::max(worst, std::abs(lhs - it->second) / std::max(lhs, it->second));
    }
  }
  return worst;
}

}  // namespace srp
