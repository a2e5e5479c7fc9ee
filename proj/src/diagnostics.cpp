#include "srp/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "srp/errors.hpp"

namespace srp {

KfResult kf_event(const GasConfig& eta, const std::function<double(const Site&)>& f, const Potential& v,
                  const Box& region) {
  KfResult out;
  for (const auto& c : eta.cycles()) {
    const double h = hamiltonian(c, v);
    for (const Site& x : sites_of(c))
      if (region.contains(x) && h > f(x)) out.violations.emplace_back(x, c);
  }
  out.holds = out.violations.empty();
  return out;
}

namespace {

template <class Inside>
bool separates_by(const GasPair& pair, Inside inside) {
  for (const GasConfig* g : {&pair.first, &pair.second})
    for (const auto& c : g->cycles()) {
      const bool first = inside(c.points().front().site);
      for (const auto& p : c.points())
        if (inside(p.site) != first) return false;
    }
  return true;
}

}  // namespace

bool separates(const GasPair& pair, const std::set<Site>& delta) {
  return separates_by(pair, [&](const Site& x) { return delta.contains(x); });
}

bool separates(const GasPair& pair, const Box& delta) {
  return separates_by(pair, [&](const Site& x) { return delta.contains(x); });
}

SeparationResult separating_set_search(const GasPair& pair, int n, const Box& search_box) {
  const Box start = Box::centered(search_box.dim(), n);
  SeparationResult out;
  if (!search_box.contains(start)) return out;

  std::vector<const Cycle*> cycles;
  bool escapes = false;
  for (const GasConfig* g : {&pair.first, &pair.second})
    for (const auto& c : g->cycles()) {
      cycles.push_back(&c);
      for (const auto& p : c.points())
        if (!search_box.contains(p.site)) escapes = true;
    }

  Box delta = start;
  for (bool grew = true; grew;) {
    grew = false;
    for (const Cycle* c : cycles) {
      bool in = false, out_ = false;
      for (const auto& p : c->points()) (delta.contains(p.site) ? in : out_) = true;
      if (in && out_) {
        for (const auto& p : c->points()) delta = delta.hull(p.site);
        grew = true;
      }
    }
    if (!search_box.contains(delta)) {
      out.status = escapes ? SeparationStatus::inconclusive : SeparationStatus::no_box;
      return out;
    }
  }
  out.status = SeparationStatus::found;
  out.delta = delta;
  return out;
}

bool open_path_D(const GasPair& pair, const Site& x0, int n) {
  if (n <= 0) return true;
  std::vector<Cycle> open;
  for (const GasConfig* g : {&pair.first, &pair.second})
    for (const auto& c : g->cycles())
      if (!is_trivial(c)) open.push_back(c);
  std::sort(open.begin(), open.end());
  open.erase(std::unique(open.begin(), open.end()), open.end());

  const std::size_t m = open.size();
  std::vector<std::set<Site>> sites(m);
  for (std::size_t i = 0; i < m; ++i) sites[i] = sites_of(open[i]);
  std::vector<std::vector<std::size_t>> adj(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (std::any_of(sites[i].begin(), sites[i].end(), [&](const Site& x) { return sites[j].contains(x); })) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }

  // Simple paths only: component size alone would overcount on branching
  // graphs.
  std::vector<char> on_path(m, 0);
  std::function<bool(std::size_t, int)> dfs = [&](std::size_t i, int len) {
    if (len >= n) return true;
    on_path[i] = 1;
    for (auto j : adj[i])
      if (!on_path[j] && dfs(j, len + 1)) {
        on_path[i] = 0;
        return true;
      }
    on_path[i] = 0;
    return false;
  };
  for (std::size_t i = 0; i < m; ++i)
    if (sites[i].contains(x0) && dfs(i, 1)) return true;
  return false;
}

double CycleStats::frac_nontrivial() const {
  return n_cycles == 0 ? 0.0 : static_cast<double>(n_nontrivial) / static_cast<double>(n_cycles);
}

double CycleStats::frac_samples_nontrivial() const {
  return n_samples == 0 ? 0.0 : static_cast<double>(samples_with_nontrivial) / static_cast<double>(n_samples);
}

void CycleStats::add(const GasConfig& eta) {
  ++n_samples;
  bool any = false;
  for (const auto& c : eta.cycles()) {
    ++n_cycles;
    ++histogram[c.length()];
    const auto s = sites_of(c);
    ++site_histogram[s.size()];
    if (!is_trivial(c)) {
      ++n_nontrivial;
      any = true;
    }
    for (std::size_t i = 0; i < c.length(); ++i)
      max_jump = std::max(max_jump, (c.image(i).site - c.points()[i].site).norm());
    for (const Site& a : s)
      for (const Site& b : s) max_diameter = std::max(max_diameter, (a - b).norm());
  }
  if (any) ++samples_with_nontrivial;
}

void CycleStats::merge(const CycleStats& o) {
  for (const auto& [k, v] : o.histogram) histogram[k] += v;
  for (const auto& [k, v] : o.site_histogram) site_histogram[k] += v;
  max_jump = std::max(max_jump, o.max_jump);
  max_diameter = std::max(max_diameter, o.max_diameter);
  n_cycles += o.n_cycles;
  n_nontrivial += o.n_nontrivial;
  n_samples += o.n_samples;
  samples_with_nontrivial += o.samples_with_nontrivial;
}

CycleStats cycle_stats(const std::vector<GasConfig>& samples) {
  CycleStats s;
  for (const auto& g : samples) s.add(g);
  return s;
}

void write_histogram_csv(std::ostream& out, const CycleStats& stats) {
  out << "length,count\n";
  for (const auto& [len, n] : stats.histogram) out << len << ',' << n << '\n';
}

double tv_distance(const std::map<GasConfig, std::uint64_t>& empirical, const SpecTable& exact) {
  const auto law = exact.as_map();
  std::uint64_t total = 0;
  for (const auto& [g, n] : empirical) {
    if (n && !law.contains(g)) throw Error(ErrorKind::contract, "empirical mass on a state outside the exact table");
    total += n;
  }
  if (total == 0) throw Error(ErrorKind::contract, "empty empirical law");
  double l1 = 0.0;
  for (const auto& [g, p] : law) {
    auto it = empirical.find(g);
    const double q = it == empirical.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(total);
    l1 += std::abs(p - q);
  }
  return 0.5 * l1;
}

}  // namespace srp
