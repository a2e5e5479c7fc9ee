#include "srp/lossnet.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <deque>

#include "srp/errors.hpp"
#include "srp/rng.hpp"

namespace srp {

namespace {

bool mark_less(const Mark& a, const Mark& b) {
  if (a.birth != b.birth) return a.birth < b.birth;
  return a.cycle < b.cycle;
}

void finish_model(NetworkModel& m) {
  m.cumulative.resize(m.weights.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < m.weights.size(); ++k) {
    if (!(m.weights[k] >= 0.0) || !std::isfinite(m.weights[k]))
      throw Error(ErrorKind::parameter, "cycle weights must be finite and nonnegative");
    acc += m.weights[k];
    m.cumulative[k] = acc;
  }
  m.total_weight = acc;
}

// A first-generation list for each relevant mark, keyed by position in
// `order`, which holds mark indices in increasing order.
struct ClanGraph {
  std::vector<std::size_t> order;
  std::vector<std::vector<std::size_t>> parents;
  std::vector<int> depth;
};

void check_horizon(const MarkSet& marks, std::size_t i) {
  if (marks.marks[i].birth < marks.horizon)
    throw Error(ErrorKind::window_too_small,
                "clan reaches a mark born at " + std::to_string(marks.marks[i].birth) +
                    ", before the window horizon " + std::to_string(marks.horizon));
}

ClanGraph build_clans(const std::vector<std::size_t>& roots, const MarkSet& marks, const NetworkModel& model) {
  std::vector<int> depth(marks.size(), -1);
  std::vector<std::vector<std::size_t>> a1(marks.size());
  std::deque<std::size_t> queue;
  for (auto r : roots) {
    if (depth[r] >= 0) continue;
    depth[r] = 0;
    queue.push_back(r);
  }
  std::vector<std::size_t> members;
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    check_horizon(marks, i);
    members.push_back(i);
    const Mark& m = marks.marks[i];
    a1[i] = first_generation(marks, model, m.cycle, m.birth, i);
    for (auto j : a1[i]) {
      if (depth[j] >= 0) continue;
      depth[j] = depth[i] + 1;
      queue.push_back(j);
    }
  }
  std::sort(members.begin(), members.end());
  ClanGraph g;
  g.order = members;
  g.parents.reserve(members.size());
  g.depth.reserve(members.size());
  for (auto i : members) {
    g.parents.push_back(std::move(a1[i]));
    g.depth.push_back(depth[i]);
  }
  return g;
}

ThinningResult classify(const ClanGraph& g, const MarkSet& marks, const NetworkModel& model) {
  // 0 unknown, 1 kept, 2 deleted. Parents precede children in birth order.
  std::vector<char> state(marks.size(), 0);
  ThinningResult out;
  for (std::size_t p = 0; p < g.order.size(); ++p) {
    const std::size_t i = g.order[p];
    bool keep = !model.blocked(marks.marks[i].cycle);
    if (keep)
      for (auto j : g.parents[p]) {
        if (state[j] == 0) throw Error(ErrorKind::contract, "ancestor classified after its descendant");
        if (state[j] == 1) {
          keep = false;
          break;
        }
      }
    state[i] = keep ? 1 : 2;
    (keep ? out.kept : out.deleted).push_back(i);
    out.generations.emplace(i, g.depth[p]);
  }
  return out;
}

}  // namespace

NetworkModel make_model(const Instance& inst, double weight_scale) {
  if (!(weight_scale > 0.0)) throw Error(ErrorKind::parameter, "weight scale must be positive");
  NetworkModel m;
  m.masks = inst.masks;
  m.weights = inst.weights;
  for (auto& w : m.weights) w *= weight_scale;
  m.boundary_mask = inst.boundary_mask;
  finish_model(m);
  return m;
}

NetworkModel make_model(std::vector<std::uint64_t> masks, std::vector<double> weights, std::uint64_t boundary_mask) {
  if (masks.size() != weights.size()) throw Error(ErrorKind::parameter, "masks and weights differ in length");
  NetworkModel m;
  m.masks = std::move(masks);
  m.weights = std::move(weights);
  m.boundary_mask = boundary_mask;
  finish_model(m);
  return m;
}

void MarkSet::normalize() {
  std::sort(marks.begin(), marks.end(), mark_less);
  max_lifetime = 0.0;
  for (const auto& m : marks) {
    if (!(m.lifetime > 0.0)) throw Error(ErrorKind::parameter, "mark lifetime must be positive");
    max_lifetime = std::max(max_lifetime, m.lifetime);
  }
}

std::uint64_t weights_digest(const NetworkModel& model) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (double w : model.weights) {
    std::uint64_t bits;
    std::memcpy(&bits, &w, sizeof bits);
    h = splitmix64(h ^ bits);
  }
  return h;
}

std::map<Cycle, std::uint64_t> nu_sample(const std::vector<std::pair<Cycle, double>>& gammas,
                                         const std::vector<Cycle>& boundary, std::uint64_t seed) {
  Rng rng(seed);
  std::map<Cycle, std::uint64_t> out;
  for (const auto& [c, w] : gammas) {
    if (!(w > 0.0 && w <= 1.0)) throw Error(ErrorKind::parameter, "cycle weights must lie in (0, 1]");
    const auto n = rng.poisson(w);
    if (n) out[c] += n;
  }
  for (const auto& b : boundary) out[b] += 1;
  return out;
}

std::vector<std::uint64_t> nu_counts(const NetworkModel& model, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::uint64_t> out(model.size());
  for (std::size_t k = 0; k < model.size(); ++k) out[k] = rng.poisson(model.weights[k]);
  return out;
}

MarkSet generate_marks(const NetworkModel& model, double t_lo, double t_hi, std::uint64_t seed) {
  if (!(t_hi >= t_lo)) throw Error(ErrorKind::parameter, "window end precedes its start");
  MarkSet set;
  set.t_lo = t_lo;
  set.t_hi = t_hi;
  set.horizon = t_lo;
  set.weights_digest = weights_digest(model);
  const double len = t_hi - t_lo;
  if (model.total_weight > 0.0 && len > 0.0) {
    Rng rng(seed);
    const auto n = rng.poisson(model.total_weight * len);
    set.marks.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      Mark m;
      m.cycle = static_cast<std::uint32_t>(rng.categorical(model.cumulative));
      m.birth = t_lo + len * rng.uniform();
      m.lifetime = rng.exponential();
      set.marks.push_back(m);
    }
  }
  set.normalize();
  return set;
}

StationaryMarks::StationaryMarks(const NetworkModel& model, std::uint64_t seed)
    : model_(&model), seed_(seed), t0_(4.0 / std::min(1.0, model.total_weight)) {
  if (!(model.total_weight > 0.0)) t0_ = 4.0;
  set_.weights_digest = weights_digest(model);
  extend();
}

void StationaryMarks::extend() {
  const NetworkModel& model = *model_;
  const int k = stages_;
  Rng rng(derive_seed(seed_, static_cast<std::uint64_t>(k)));
  const double w = model.total_weight;
  auto draw_cycle = [&]() { return static_cast<std::uint32_t>(rng.categorical(model.cumulative)); };

  double hi, len;
  if (k == 0) {
    hi = 0.0;
    len = t0_;
    if (w > 0.0) {
      const auto n_alive = rng.poisson(w);
      for (std::uint64_t i = 0; i < n_alive; ++i) {
        Mark m;
        m.cycle = draw_cycle();
        const double age = rng.exponential();
        m.birth = -age;
        m.lifetime = age + rng.exponential();
        set_.marks.push_back(m);
      }
    }
  } else {
    hi = -t0_ * std::ldexp(1.0, k - 1);
    len = t0_ * std::ldexp(1.0, k - 1);
  }
  if (w > 0.0) {
    const auto n_dead = rng.poisson(w * len);
    for (std::uint64_t i = 0; i < n_dead; ++i) {
      Mark m;
      m.cycle = draw_cycle();
      const double death = hi - len * rng.uniform();
      m.lifetime = rng.exponential();
      m.birth = death - m.lifetime;
      set_.marks.push_back(m);
    }
  }
  ++stages_;
  set_.horizon = -t0_ * std::ldexp(1.0, k);
  set_.t_lo = set_.horizon;
  set_.t_hi = 0.0;
  set_.normalize();
}

std::vector<std::size_t> first_generation(const MarkSet& marks, const NetworkModel& model, std::size_t cycle,
                                          double t, std::size_t self) {
  std::vector<std::size_t> out;
  const auto& ms = marks.marks;
  auto it = std::lower_bound(ms.begin(), ms.end(), t, [](const Mark& m, double x) { return m.birth < x; });
  const double oldest = t - marks.max_lifetime;
  for (auto j = static_cast<std::size_t>(it - ms.begin()); j-- > 0;) {
    const Mark& m = ms[j];
    if (m.birth < oldest) break;
    if (j == self) continue;
    if (m.death() > t && (model.masks[m.cycle] & model.masks[cycle]) != 0) out.push_back(j);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> clan(std::size_t zeta, const MarkSet& marks, const NetworkModel& model) {
  if (zeta >= marks.size()) throw Error(ErrorKind::parameter, "mark index out of range");
  auto g = build_clans({zeta}, marks, model);
  std::vector<std::size_t> out;
  for (auto i : g.order)
    if (i != zeta) out.push_back(i);
  return out;
}

std::vector<std::size_t> clan(std::size_t cycle, double t, const MarkSet& marks, const NetworkModel& model) {
  if (t < marks.horizon) throw Error(ErrorKind::window_too_small, "query mark born before the window horizon");
  auto roots = first_generation(marks, model, cycle, t);
  return build_clans(roots, marks, model).order;
}

bool ThinningResult::is_kept(std::size_t i) const {
  return std::binary_search(kept.begin(), kept.end(), i);
}

ThinningResult thin(const MarkSet& marks, const NetworkModel& model, double query_time) {
  return classify(build_clans(alive_at(marks, query_time), marks, model), marks, model);
}

ThinningResult thin_all(const MarkSet& marks, const NetworkModel& model) {
  std::vector<std::size_t> all(marks.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  auto g = build_clans(all, marks, model);
  std::fill(g.depth.begin(), g.depth.end(), 0);
  return classify(g, marks, model);
}

ThinningResult thin_fixed_point(const MarkSet& marks, const NetworkModel& model) {
  const std::size_t n = marks.size();
  std::vector<std::vector<std::size_t>> a1(n);
  for (std::size_t i = 0; i < n; ++i) {
    check_horizon(marks, i);
    a1[i] = first_generation(marks, model, marks.marks[i].cycle, marks.marks[i].birth, i);
  }
  std::vector<char> d0(n), deleted(n), kept(n);
  for (std::size_t i = 0; i < n; ++i) d0[i] = deleted[i] = model.blocked(marks.marks[i].cycle);

  ThinningResult out;
  for (int step = 1;; ++step) {
    std::vector<char> k_next(n), d_next = d0;
    for (std::size_t i = 0; i < n; ++i)
      if (!d0[i]) k_next[i] = std::all_of(a1[i].begin(), a1[i].end(), [&](std::size_t j) { return deleted[j] != 0; });
    for (std::size_t i = 0; i < n; ++i)
      if (std::any_of(a1[i].begin(), a1[i].end(), [&](std::size_t j) { return k_next[j] != 0; })) d_next[i] = 1;
    for (std::size_t i = 0; i < n; ++i)
      if ((k_next[i] || d_next[i]) && !out.generations.contains(i)) out.generations.emplace(i, step);
    if (k_next == kept && d_next == deleted) break;
    kept.swap(k_next);
    deleted.swap(d_next);
    if (step > static_cast<int>(n) + 1) throw Error(ErrorKind::contract, "fixed-point thinning does not stabilize");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (kept[i] && deleted[i]) throw Error(ErrorKind::contract, "mark both kept and deleted");
    if (!kept[i] && !deleted[i]) throw Error(ErrorKind::contract, "mark left unclassified");
    (kept[i] ? out.kept : out.deleted).push_back(i);
  }
  return out;
}

std::vector<std::size_t> alive_at(const MarkSet& marks, double t) {
  std::vector<std::size_t> out;
  const auto& ms = marks.marks;
  auto it = std::upper_bound(ms.begin(), ms.end(), t, [](double x, const Mark& m) { return x < m.birth; });
  const double oldest = t - marks.max_lifetime;
  for (auto j = static_cast<std::size_t>(it - ms.begin()); j-- > 0;) {
    if (ms[j].birth < oldest) break;
    if (ms[j].alive(t)) out.push_back(j);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<std::uint64_t> free_counts(const MarkSet& marks, std::size_t n_cycles, double t) {
  std::vector<std::uint64_t> out(n_cycles, 0);
  for (auto i : alive_at(marks, t)) ++out.at(marks.marks[i].cycle);
  return out;
}

std::optional<double> latest_empty_instant(const MarkSet& marks, double t) {
  std::vector<std::size_t> idx;
  idx.reserve(marks.size());
  for (std::size_t i = 0; i < marks.size(); ++i)
    if (marks.marks[i].birth <= t) idx.push_back(i);
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return marks.marks[a].death() > marks.marks[b].death(); });
  double cur = t;
  for (auto i : idx) {
    const Mark& m = marks.marks[i];
    if (!(m.death() > cur)) break;
    cur = std::min(cur, m.birth);
  }
  if (cur > marks.horizon) return cur;
  return std::nullopt;
}

namespace {

bool window_suffices(const MarkSet& marks, const NetworkModel& model, StoppingRule rule) {
  if (rule == StoppingRule::empty_instant) return latest_empty_instant(marks, 0.0).has_value();
  try {
    build_clans(alive_at(marks, 0.0), marks, model);
    return true;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::window_too_small) throw;
    return false;
  }
}

// Runs the stationary construction until the stopping rule holds.
StationaryMarks run_window(const NetworkModel& model, std::uint64_t seed, const SampleOptions& opts) {
  StationaryMarks gen(model, seed);
  for (;;) {
    const int doublings = gen.stages() - 1;
    if (doublings >= opts.min_doublings && window_suffices(gen.marks(), model, opts.rule)) return gen;
    if (doublings >= opts.max_doublings)
      throw Error(ErrorKind::nontermination,
                  "no admissible window after " + std::to_string(doublings) + " doublings (T = " +
                      std::to_string(gen.initial_length() * std::ldexp(1.0, doublings)) + ", " +
                      std::to_string(gen.marks().size()) + " marks, total weight " +
                      std::to_string(model.total_weight) + ")");
    gen.extend();
  }
}

GasConfig state_at_zero(const Instance& inst, const NetworkModel& model, const MarkSet& marks,
                        const ThinningResult& th) {
  std::vector<Cycle> cycles = inst.boundary;
  std::uint64_t used = inst.boundary_mask;
  for (auto i : th.kept) {
    const Mark& m = marks.marks[i];
    if (!m.alive(0.0)) continue;
    if (used & model.masks[m.cycle]) throw Error(ErrorKind::contract, "loss network holds incompatible cycles");
    used |= model.masks[m.cycle];
    cycles.push_back(inst.cycles[m.cycle]);
  }
  std::sort(cycles.begin(), cycles.end());
  return GasConfig(std::move(cycles), GasConfig::Unchecked{});
}

}  // namespace

SampleResult perfect_sample(const Instance& inst, std::uint64_t seed, const SampleOptions& opts) {
  const NetworkModel model = make_model(inst, opts.weight_scale);
  SampleResult out;
  if (model.size() == 0) {
    out.sample = GasConfig(inst.boundary);
    return out;
  }
  StationaryMarks gen = run_window(model, seed, opts);
  const MarkSet& marks = gen.marks();
  out.sample = state_at_zero(inst, model, marks, thin(marks, model, 0.0));
  out.doublings = gen.stages() - 1;
  out.t_final = gen.initial_length() * std::ldexp(1.0, out.doublings);
  out.n_marks = marks.size();
  if (opts.keep_marks) out.marks = marks;
  return out;
}

SampleResult perfect_sample(const Environment& env, const Box& lam, const BoundarySpec& xi, double alpha,
                            const Potential& v, std::uint64_t seed, std::size_t max_points) {
  return perfect_sample(make_instance(env, lam, xi, alpha, v, max_points), seed);
}

CoupledResult coupled_pair(const Instance& inst, std::uint64_t seed, const SampleOptions& opts) {
  const NetworkModel xi_model = make_model(inst, opts.weight_scale);
  NetworkModel id_model = xi_model;
  id_model.boundary_mask = 0;

  CoupledResult out;
  Instance id_inst = inst;
  id_inst.boundary.clear();
  id_inst.boundary_mask = 0;
  for (const auto& b : inst.boundary) out.xi_free[b] = 1;
  if (xi_model.size() == 0) {
    out.xi_sample = GasConfig(inst.boundary);
    return out;
  }

  StationaryMarks gen = run_window(xi_model, seed, opts);
  const MarkSet& marks = gen.marks();
  out.t_final = gen.initial_length() * std::ldexp(1.0, gen.stages() - 1);
  out.n_marks = marks.size();

  const auto th_xi = thin(marks, xi_model, 0.0);
  const auto th_id = thin(marks, id_model, 0.0);
  out.xi_sample = state_at_zero(inst, xi_model, marks, th_xi);
  out.id_sample = state_at_zero(id_inst, id_model, marks, th_id);

  // The free processes share every mark; the xi process adds one permanent
  // copy of each boundary cycle. Check this at 0 and at every birth in the
  // known part of the window.
  std::vector<double> times{0.0};
  for (const auto& m : marks.marks)
    if (m.birth > marks.horizon && m.birth <= 0.0) times.push_back(m.birth);
  for (double t : times) {
    std::map<Cycle, std::uint64_t> id_free, xi_free;
    for (const auto& b : inst.boundary) xi_free[b] = 1;
    for (auto i : alive_at(marks, t)) {
      const Cycle& c = inst.cycles[marks.marks[i].cycle];
      ++id_free[c];
      ++xi_free[c];
    }
    for (const auto& [c, n] : xi_free) {
      auto it = id_free.find(c);
      const std::uint64_t base = it == id_free.end() ? 0 : it->second;
      const std::uint64_t shift = std::binary_search(inst.boundary.begin(), inst.boundary.end(), c) ? 1 : 0;
      if (n != base + shift) throw Error(ErrorKind::contract, "free processes differ off the boundary cycles");
    }
    if (t == 0.0) {
      out.xi_free = std::move(xi_free);
      out.id_free = std::move(id_free);
    }
  }

  auto dominated = [](const GasConfig& g, const std::map<Cycle, std::uint64_t>& free) {
    return std::all_of(g.cycles().begin(), g.cycles().end(), [&](const Cycle& c) { return free.contains(c); });
  };
  if (!dominated(out.xi_sample, out.xi_free) || !dominated(out.id_sample, out.id_free))
    throw Error(ErrorKind::contract, "loss network state exceeds its free process");
  return out;
}

}  // namespace srp
