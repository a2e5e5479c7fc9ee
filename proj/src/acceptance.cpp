#include "srp/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>

#include "srp/errors.hpp"
#include "srp/parallel.hpp"
#include "srp/rng.hpp"

namespace srp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Environment make_env(const Box& box, std::map<Site, int> theta) {
  return Environment(box, 0.25, 0, std::move(theta));
}

using Counts = std::map<GasConfig, std::uint64_t>;

Counts sample_counts(const Instance& inst, std::size_t n, std::uint64_t seed, int jobs, const SampleOptions& so) {
  return parallel_reduce(
      n, jobs, Counts{},
      [&](std::size_t lo, std::size_t hi) {
        Counts c;
        for (std::size_t i = lo; i < hi; ++i) ++c[perfect_sample(inst, derive_seed(seed, i), so).sample];
        return c;
      },
      [](Counts& acc, Counts part) {
        for (auto& [g, k] : part) acc[g] += k;
      });
}

// Random finite-cycle permutation of the given points restricted to a
// random subset.
GasConfig random_gas(const std::vector<PointId>& pts, Rng& rng, double keep_prob) {
  std::vector<PointId> chosen;
  for (const auto& p : pts)
    if (rng.uniform() < keep_prob) chosen.push_back(p);
  std::vector<PointId> image = chosen;
  for (std::size_t i = image.size(); i > 1; --i) std::swap(image[i - 1], image[rng.next() % i]);
  Permutation pi;
  for (std::size_t i = 0; i < chosen.size(); ++i) pi.emplace(chosen[i], image[i]);
  return gas_from_permutation(pi);
}

Environment random_env(std::size_t dim, int side, int max_theta, Rng& rng) {
  std::map<Site, int> theta;
  Box box{Site(dim), Site(dim)};
  for (std::size_t i = 0; i < dim; ++i) box.hi[i] = side - 1;
  box.for_each([&](const Site& x) {
    const int t = static_cast<int>(rng.next() % static_cast<std::uint64_t>(max_theta + 1));
    if (t) theta[x] = t;
  });
  return make_env(box, std::move(theta));
}

// ---------------------------------------------------------------- criteria

CriterionResult c1_r0() {
  CriterionResult r{1, "constant r0", false, {}, 0.0};
  const auto t0 = Clock::now();
  const double root = srp::r0(1e-10);
  const double elapsed = seconds_since(t0);
  const double residual = std::abs(root / ((1.0 - root) * (1.0 - root)) - root - 0.5);
  r.pass = root >= 0.35541 && root <= 0.35543 && residual < 1e-10 && elapsed < 1e-3;
  r.measured = {{"r0", root}, {"residual", residual}, {"runtime_s", elapsed}};
  return r;
}

CriterionResult c2_oracle(const AcceptanceOptions& opts) {
  CriterionResult r{2, "perfect sampler matches the exact Gibbs law (TV < 0.01)", true, Json::array(), 0.0};
  constexpr std::size_t kSamples = 100000;
  SampleOptions so;
  so.weight_scale = opts.weight_fault;
  int k = 0;
  for (const auto& fx : acceptance_fixtures()) {
    const auto table = specification(fx.instance);
    double tv = 1.0;
    std::string note;
    try {
      const auto counts = sample_counts(fx.instance, kSamples, derive_seed(opts.seed, 200 + k), opts.jobs, so);
      tv = tv_distance(counts, table);
    } catch (const Error& e) {
      note = e.what();
    }
    ++k;
    const bool ok = tv < 0.01;
    r.pass = r.pass && ok;
    r.measured.push_back({{"fixture", fx.name},
                          {"points", fx.instance.points.size()},
                          {"states", table.entries.size()},
                          {"total_weight", fx.instance.total_weight()},
                          {"tv", tv},
                          {"expected_noise", expected_tv_noise(table, kSamples)},
                          {"pass", ok},
                          {"note", note}});
  }
  return r;
}

CriterionResult c3_balance() {
  CriterionResult r{3, "detailed balance and the two Gibbs-law forms agree to 1e-12", true, Json::array(), 0.0};
  for (const auto& fx : acceptance_fixtures()) {
    double balance = 1.0, forms = 1.0;
    std::string note;
    try {
      const auto table = specification(fx.instance);
      forms = table.form_mismatch;
      balance = detailed_balance_residual(table, fx.instance);
    } catch (const Error& e) {
      note = e.what();
    }
    const bool ok = balance <= 1e-12 && forms <= 1e-12;
    r.pass = r.pass && ok;
    r.measured.push_back(
        {{"fixture", fx.name}, {"balance_residual", balance}, {"form_mismatch", forms}, {"pass", ok}, {"note", note}});
  }
  return r;
}

// Chi-square goodness of fit of observed counts against Poisson(mean); the
// upper bins are merged until each expects at least 5.
std::pair<double, int> poisson_chi_square(const std::vector<std::uint64_t>& hist, double mean, std::size_t n) {
  std::vector<double> expected, observed;
  double pmf = std::exp(-mean), tail = 1.0;
  for (std::size_t k = 0;; ++k) {
    const double rest = (tail - pmf) * static_cast<double>(n);
    if (rest < 5.0) {
      double all = 0.0;
      for (std::size_t j = k; j < hist.size(); ++j) all += static_cast<double>(hist[j]);
      expected.push_back(tail * static_cast<double>(n));
      observed.push_back(all);
      break;
    }
    expected.push_back(pmf * static_cast<double>(n));
    observed.push_back(k < hist.size() ? static_cast<double>(hist[k]) : 0.0);
    tail -= pmf;
    pmf *= mean / static_cast<double>(k + 1);
  }
  double stat = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i)
    stat += (observed[i] - expected[i]) * (observed[i] - expected[i]) / expected[i];
  return {stat, static_cast<int>(expected.size()) - 1};
}

CriterionResult c4_free_process(const AcceptanceOptions& opts) {
  CriterionResult r{4, "stationary free process is Poisson(w) per cycle plus the boundary cycles, chi-square at 1%",
                    true, Json::array(), 0.0};
  constexpr std::size_t kReplicas = 100000;
  constexpr std::size_t kTested = 3;
  Instance inst;
  for (auto& fx : acceptance_fixtures())
    if (!fx.instance.boundary.empty()) {
      inst = fx.instance;
      break;
    }
  // The heaviest cycles of the volume, plus every boundary cycle.
  std::vector<std::size_t> order(inst.cycles.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return inst.weights[a] > inst.weights[b]; });
  order.resize(std::min(kTested, order.size()));

  struct Tally {
    std::vector<std::vector<std::uint64_t>> hists;
    std::uint64_t boundary_ok = 0;
  };
  auto bump = [](std::vector<std::uint64_t>& h, std::uint64_t v) {
    if (h.size() <= v) h.resize(v + 1, 0);
    ++h[v];
  };
  const Tally t = parallel_reduce(
      kReplicas, opts.jobs, Tally{std::vector<std::vector<std::uint64_t>>(order.size()), 0},
      [&](std::size_t lo, std::size_t hi) {
        Tally t{std::vector<std::vector<std::uint64_t>>(order.size()), 0};
        for (std::size_t i = lo; i < hi; ++i) {
          const auto c = coupled_pair(inst, derive_seed(opts.seed ^ 0x4444, i));
          for (std::size_t k = 0; k < order.size(); ++k) {
            const auto it = c.xi_free.find(inst.cycles[order[k]]);
            bump(t.hists[k], it == c.xi_free.end() ? 0 : it->second);
          }
          bool ok = true;
          for (const auto& b : inst.boundary) {
            const auto it = c.xi_free.find(b);
            ok = ok && it != c.xi_free.end() && it->second == 1 && !c.id_free.contains(b);
          }
          t.boundary_ok += ok;
        }
        return t;
      },
      [](Tally& acc, Tally part) {
        acc.boundary_ok += part.boundary_ok;
        for (std::size_t c = 0; c < acc.hists.size(); ++c) {
          if (acc.hists[c].size() < part.hists[c].size()) acc.hists[c].resize(part.hists[c].size(), 0);
          for (std::size_t v = 0; v < part.hists[c].size(); ++v) acc.hists[c][v] += part.hists[c][v];
        }
      });

  for (std::size_t k = 0; k < order.size(); ++k) {
    const double w = inst.weights[order[k]];
    const auto [stat, df] = poisson_chi_square(t.hists[k], w, kReplicas);
    double p = 0.0;
    if (std::isfinite(stat) && df > 0) p = boost::math::cdf(boost::math::complement(boost::math::chi_squared(df), stat));
    const bool ok = p > 0.01;
    r.pass = r.pass && ok;
    r.measured.push_back({{"model", "straddle4_d1_a1"},
                          {"cycle", to_json(inst.cycles[order[k]])},
                          {"weight", w},
                          {"chi_square", stat},
                          {"df", df},
                          {"p_value", p},
                          {"pass", ok}});
  }
  // Abstract three-cycle space: a triangle of pairwise incompatible cycles.
  const NetworkModel tri = make_model({0b011, 0b110, 0b101}, {0.9, 0.4, 0.15});
  using Hists = std::vector<std::vector<std::uint64_t>>;
  const Hists tri_hists = parallel_reduce(
      kReplicas, opts.jobs, Hists(3),
      [&](std::size_t lo, std::size_t hi) {
        Hists h(3);
        for (std::size_t i = lo; i < hi; ++i) {
          const StationaryMarks sm(tri, derive_seed(opts.seed ^ 0x4545, i));
          const auto counts = free_counts(sm.marks(), tri.size(), 0.0);
          for (std::size_t c = 0; c < 3; ++c) bump(h[c], counts[c]);
        }
        return h;
      },
      [](Hists& acc, Hists part) {
        for (std::size_t c = 0; c < acc.size(); ++c) {
          if (acc[c].size() < part[c].size()) acc[c].resize(part[c].size(), 0);
          for (std::size_t v = 0; v < part[c].size(); ++v) acc[c][v] += part[c][v];
        }
      });
  for (std::size_t c = 0; c < 3; ++c) {
    const auto [stat, df] = poisson_chi_square(tri_hists[c], tri.weights[c], kReplicas);
    const double p = df > 0 ? boost::math::cdf(boost::math::complement(boost::math::chi_squared(df), stat)) : 0.0;
    const bool ok = p > 0.01;
    r.pass = r.pass && ok;
    r.measured.push_back({{"model", "triangle"},
                          {"cycle", c},
                          {"weight", tri.weights[c]},
                          {"chi_square", stat},
                          {"df", df},
                          {"p_value", p},
                          {"pass", ok}});
  }

  const bool boundary_ok = t.boundary_ok == kReplicas && !inst.boundary.empty();
  r.pass = r.pass && boundary_ok;
  r.measured.push_back({{"boundary_cycles", inst.boundary.size()},
                        {"replicas_with_exactly_one_copy", t.boundary_ok},
                        {"replicas", kReplicas},
                        {"pass", boundary_ok}});
  return r;
}
CriterionResult c5_count_bound(const AcceptanceOptions& opts) {
  CriterionResult r{5, "cycle count per ordered support is at most M", true, {}, 0.0};
  // Worked instance.
  const Environment worked = make_env(Box(Site{6}, Site{7}), {{Site{6}, 3}, {Site{7}, 1}});
  const OrderedSupport y67{{Site{6}, Site{7}}};
  const auto n67 = count_exact(y67, worked);
  const double m67 = count_bound(y67, worked);
  const bool worked_ok = n67 == 15 && std::abs(m67 - 24.0 * std::numbers::e) < 1e-9;

  Rng rng(derive_seed(opts.seed, 5));
  int violations = 0, multinomial_violations = 0, nonzero = 0;
  double worst_ratio = 0.0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t dim = 1 + static_cast<std::size_t>(i % 2);
    const int l = 1 + static_cast<int>(rng.next() % 3);
    std::vector<Site> sites;
    const Box box(Site(dim), [&] {
      Site s(dim);
      for (std::size_t a = 0; a < dim; ++a) s[a] = 3;
      return s;
    }());
    const auto all = box.sites();
    while (static_cast<int>(sites.size()) < l) {
      const Site& z = all[rng.next() % all.size()];
      if (std::find(sites.begin(), sites.end(), z) == sites.end()) sites.push_back(z);
    }
    std::map<Site, int> theta;
    for (const Site& z : sites) {
      const int t = rng.uniform() < 0.1 ? 0 : 1 + static_cast<int>(rng.next() % 3);
      if (t) theta[z] = t;
    }
    // A random sequence using every site, no cyclic consecutive repeat.
    std::vector<Site> seq;
    const int m = l == 1 ? 1 : l + static_cast<int>(rng.next() % 3);
    for (int attempt = 0; attempt < 1000; ++attempt) {
      seq.clear();
      for (int k = 0; k < m; ++k) seq.push_back(sites[rng.next() % sites.size()]);
      bool ok = true;
      for (const Site& z : sites) ok = ok && std::find(seq.begin(), seq.end(), z) != seq.end();
      for (int k = 0; ok && m > 1 && k < m; ++k) ok = seq[k] != seq[(k + 1) % m];
      if (ok) break;
      seq = sites;
    }
    const Environment env = make_env(box, theta);
    const OrderedSupport ybar{seq};
    const auto n = count_exact(ybar, env);
    const double bound = count_bound(ybar, env);
    const double mult = count_multinomial(ybar, env);
    if (static_cast<double>(n) > bound) ++violations;
    if (static_cast<double>(n) > mult) ++multinomial_violations;
    if (n > 0) {
      ++nonzero;
      worst_ratio = std::max(worst_ratio, static_cast<double>(n) / bound);
    }
  }
  r.pass = worked_ok && violations == 0;
  r.measured = {{"worked_count", n67},
                {"worked_bound", m67},
                {"instances", 200},
                {"nonzero_instances", nonzero},
                {"violations", violations},
                {"max_count_over_bound", worst_ratio},
                {"intermediate_sum_violations", multinomial_violations}};
  return r;
}

CriterionResult c6_coupling(const AcceptanceOptions& opts) {
  CriterionResult r{6, "coupled free processes differ exactly by the boundary cycles", false, {}, 0.0};
  constexpr std::size_t kRuns = 10000;
  Instance inst;
  for (auto& fx : acceptance_fixtures())
    if (!fx.instance.boundary.empty()) {
      inst = fx.instance;
      break;
    }
  struct Tally {
    std::uint64_t violations = 0, runs = 0, xi_nontrivial = 0, id_nontrivial = 0;
  };
  const Tally t = parallel_reduce(
      kRuns, opts.jobs, Tally{},
      [&](std::size_t lo, std::size_t hi) {
        Tally t;
        for (std::size_t i = lo; i < hi; ++i) {
          ++t.runs;
          try {
            const auto c = coupled_pair(inst, derive_seed(opts.seed ^ 0x6666, i));
            t.xi_nontrivial += c.xi_sample.size() > inst.boundary.size();
            t.id_nontrivial += !c.id_sample.empty();
          } catch (const Error& e) {
            if (e.kind() != ErrorKind::contract) throw;
            ++t.violations;
          }
        }
        return t;
      },
      [](Tally& a, Tally b) {
        a.violations += b.violations;
        a.runs += b.runs;
        a.xi_nontrivial += b.xi_nontrivial;
        a.id_nontrivial += b.id_nontrivial;
      });
  r.pass = t.violations == 0 && t.runs == kRuns;
  r.measured = {{"runs", t.runs},
                {"violations", t.violations},
                {"boundary_cycles", inst.boundary.size()},
                {"freq_inner_cycle_xi", double(t.xi_nontrivial) / double(kRuns)},
                {"freq_inner_cycle_id", double(t.id_nontrivial) / double(kRuns)}};
  return r;
}

CriterionResult c7_varphi() {
  CriterionResult r{7, "phi below its closed bound; weight sums below phi^m", true, {}, 0.0};
  Json phi = Json::array(), sums = Json::array();
  for (std::size_t d = 1; d <= 3; ++d)
    for (double a : {0.5, 1.0, 2.0, 5.0}) {
      const double v = varphi(Potential::quadratic(d), a, 1e-9).value;
      const double b = varphi_quadratic_bound(a, d);
      const bool ok = v < b;
      r.pass = r.pass && ok;
      phi.push_back({{"dim", d}, {"alpha", a}, {"varphi", v}, {"bound", b}, {"pass", ok}});
    }
  for (std::size_t d = 1; d <= 3; ++d)
    for (double a : {0.5, 1.0, 2.0, 5.0})
      for (int m : {2, 3, 4}) {
        const auto ws = weight_sum_check(a, m, d, 20);
        const bool ok = ws.partial_sum <= ws.bound;
        r.pass = r.pass && ok;
        sums.push_back(
            {{"dim", d}, {"alpha", a}, {"m", m}, {"partial_sum", ws.partial_sum}, {"bound", ws.bound}, {"pass", ok}});
      }
  r.measured = {{"varphi", phi}, {"weight_sums", sums}};
  return r;
}

CriterionResult c8_continuum(const AcceptanceOptions& opts) {
  CriterionResult r{8, "continuum comparison inequality and discretization round trip", true, {}, 0.0};
  Json per_dim = Json::array();
  for (std::size_t d = 1; d <= 3; ++d) {
    const Potential v = Potential::continuum_comparison(d);
    Rng rng(derive_seed(opts.seed, 800 + d));
    std::uint64_t violations = 0;
    std::vector<double> x(d), z(d), diff(d);
    for (int i = 0; i < 100000; ++i) {
      for (std::size_t a = 0; a < d; ++a) {
        x[a] = -10.0 + 20.0 * rng.uniform();
        z[a] = -10.0 + 20.0 * rng.uniform();
        diff[a] = x[a] - z[a];
      }
      double dist2 = 0.0;
      for (double c : diff) dist2 += c * c;
      if (dist2 < v(floor_site(x) - floor_site(z))) ++violations;
    }
    r.pass = r.pass && violations == 0;
    per_dim.push_back({{"dim", d}, {"pairs", 100000}, {"violations", violations}});
  }

  std::uint64_t failures = 0, total_points = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t d = 1 + static_cast<std::size_t>(i % 3);
    RealBox region{std::vector<double>(d, -2.5), std::vector<double>(d, 2.5)};
    const auto pts = sample_continuum(d, region, 0.5, derive_seed(opts.seed ^ 0x8888, i));
    const auto disc = discretize(pts);
    bool ok = disc.tags.to_point.size() == pts.points.size() && disc.env.point_count() == pts.points.size() &&
              disc.tags.to_index.size() == pts.points.size();
    for (std::size_t k = 0; ok && k < pts.points.size(); ++k) {
      const PointId& p = disc.tags.to_point[k];
      ok = disc.env.has_point(p) && p.site == floor_site(pts.points[k]) && disc.tags.to_index.at(p) == k;
    }
    total_points += pts.points.size();
    if (!ok) ++failures;
  }
  r.pass = r.pass && failures == 0;
  r.measured = {{"comparison", per_dim},
                {"round_trip_sets", 1000},
                {"round_trip_points", total_points},
                {"round_trip_failures", failures}};
  return r;
}

CriterionResult c9_regime() {
  CriterionResult r{9, "alpha* and the uniqueness gate", false, {}, 0.0};
  const double rho = 0.25;
  const double a_star = alpha_star(rho, 1);
  const double ratio = srp::r0() / c_rho(rho);
  const double by_hand = std::numbers::pi / (ratio * ratio);
  RegimeOptions closed;
  closed.closed_bound = true;
  const auto q = Potential::quadratic(1);
  const auto below = regime_report(rho, a_star - 0.01, q, closed);
  const auto above = regime_report(rho, a_star + 0.01, q, closed);
  const auto at11 = regime_report(rho, 11.0, q);
  const auto at1 = regime_report(rho, 1.0, q);
  r.pass = std::abs(a_star - 10.25) <= 0.01 && std::abs(a_star - by_hand) <= 1e-9 && !below.uniqueness_ok &&
           above.uniqueness_ok && at11.uniqueness_ok && !at1.uniqueness_ok;
  r.measured = {{"alpha_star", a_star},
                {"alpha_star_direct", by_hand},
                {"uniqueness_below", below.uniqueness_ok},
                {"uniqueness_above", above.uniqueness_ok},
                {"uniqueness_alpha_11", at11.uniqueness_ok},
                {"uniqueness_alpha_1", at1.uniqueness_ok}};
  return r;
}

CriterionResult c10_structure(const AcceptanceOptions& opts) {
  CriterionResult r{10, "structural properties and low-temperature cycle structure", true, {}, 0.0};
  constexpr int kTrials = 1000;
  Rng rng(derive_seed(opts.seed, 10));

  // K_f^c is increasing.
  int kf_fail = 0, kf_nonvacuous = 0;
  for (int i = 0; i < kTrials; ++i) {
    const Environment env = random_env(1, 6, 2, rng);
    const auto pts = points_of(env, env.box());
    const GasConfig eta = random_gas(pts, rng, 0.6);
    std::vector<PointId> free;
    for (const auto& p : pts)
      if (!std::any_of(eta.cycles().begin(), eta.cycles().end(), [&](const Cycle& c) { return c.contains(p); }))
        free.push_back(p);
    if (free.size() < 2) continue;
    const GasConfig extra = random_gas(free, rng, 1.0);
    std::map<Site, double> fv;
    env.box().for_each([&](const Site& x) { fv[x] = 6.0 * rng.uniform(); });
    auto f = [&](const Site& x) { return fv.at(x); };
    const auto q = Potential::quadratic(1);
    GasConfig bigger = eta;
    for (const auto& c : extra.cycles()) bigger = bigger.with(c);
    const bool small_violates = !kf_event(eta, f, q, env.box()).holds;
    const bool big_violates = !kf_event(bigger, f, q, env.box()).holds;
    if (small_violates) ++kf_nonvacuous;
    if (small_violates && !big_violates) ++kf_fail;
  }

  // D(n + 1) implies D(n).
  int d_fail = 0, d_nonvacuous = 0;
  for (int i = 0; i < kTrials; ++i) {
    const Environment env = random_env(2, 4, 2, rng);
    const auto pts = points_of(env, env.box());
    if (pts.empty()) continue;
    const GasPair pair{random_gas(pts, rng, 0.7), random_gas(pts, rng, 0.7)};
    const Site x0 = pts[rng.next() % pts.size()].site;
    bool prev = open_path_D(pair, x0, 1);
    if (prev) ++d_nonvacuous;
    for (int n = 2; n <= 7; ++n) {
      const bool cur = open_path_D(pair, x0, n);
      if (cur && !prev) ++d_fail;
      prev = cur;
    }
  }

  // Separating sets are closed under union.
  int u_fail = 0, search_fail = 0;
  for (int i = 0; i < kTrials; ++i) {
    const Environment env = random_env(2, 5, 2, rng);
    const auto pts = points_of(env, env.box());
    const GasPair pair{random_gas(pts, rng, 0.5), random_gas(pts, rng, 0.5)};
    // Unions of site-connected clusters of cycles separate by construction.
    std::vector<std::set<Site>> clusters;
    for (const GasConfig* g : {&pair.first, &pair.second})
      for (const auto& c : g->cycles()) {
        std::set<Site> s = sites_of(c);
        for (auto it = clusters.begin(); it != clusters.end();) {
          if (std::any_of(it->begin(), it->end(), [&](const Site& x) { return s.contains(x); })) {
            s.insert(it->begin(), it->end());
            it = clusters.erase(it);
          } else {
            ++it;
          }
        }
        clusters.push_back(std::move(s));
      }
    auto random_delta = [&] {
      std::set<Site> d;
      for (const auto& c : clusters)
        if (rng.uniform() < 0.5) d.insert(c.begin(), c.end());
      env.box().for_each([&](const Site& x) {
        const bool covered = std::any_of(clusters.begin(), clusters.end(), [&](const auto& c) { return c.contains(x); });
        if (!covered && rng.uniform() < 0.3) d.insert(x);
      });
      return d;
    };
    std::set<Site> d1 = random_delta(), d2 = random_delta();
    if (!separates(pair, d1) || !separates(pair, d2)) {
      ++u_fail;
      continue;
    }
    std::set<Site> u = d1;
    u.insert(d2.begin(), d2.end());
    if (!separates(pair, u)) ++u_fail;
    Box search(Site{-1, -1}, Site{5, 5});
    const auto found = separating_set_search(pair, 0, Box(Site{-1, -1}, Site{6, 6}));
    if (found.status == SeparationStatus::found && !separates(pair, *found.delta)) ++search_fail;
  }

  // Low temperature: alpha = 12 on a 9-site line.
  constexpr std::size_t kSamples = 10000;
  const Box line(Site{0}, Site{8});
  Environment env;
  for (std::uint64_t k = 0;; ++k) {
    env = sample_environment(1, line, 0.25, derive_seed(opts.seed ^ 0x1010, k));
    const auto& th = env.multiplicities();
    const bool stacked = std::any_of(th.begin(), th.end(), [](const auto& kv) { return kv.second >= 2; });
    if (env.point_count() >= 4 && env.point_count() <= kDefaultMaxPoints && stacked && th.size() >= 3) break;
  }
  const Instance inst = make_instance(env, line, BoundarySpec::identity(), 12.0, Potential::quadratic(1));
  const CycleStats stats = parallel_reduce(
      kSamples, opts.jobs, CycleStats{},
      [&](std::size_t lo, std::size_t hi) {
        CycleStats s;
        for (std::size_t i = lo; i < hi; ++i) s.add(perfect_sample(inst, derive_seed(opts.seed ^ 0x1212, i)).sample);
        return s;
      },
      [](CycleStats& a, CycleStats b) { a.merge(b); });
  const double p = 2.0 * std::exp(-12.0) * static_cast<double>(line.volume());
  const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(kSamples));
  const double freq = stats.frac_samples_nontrivial();
  const bool low_t_ok = stats.max_diameter <= 3.0 && freq < p + 5.0 * sigma;

  r.pass = kf_fail == 0 && d_fail == 0 && u_fail == 0 && search_fail == 0 && low_t_ok;
  r.measured = {{"kf_trials", kTrials},
                {"kf_nonvacuous", kf_nonvacuous},
                {"kf_failures", kf_fail},
                {"d_trials", kTrials},
                {"d_nonvacuous", d_nonvacuous},
                {"d_failures", d_fail},
                {"union_trials", kTrials},
                {"union_failures", u_fail},
                {"search_failures", search_fail},
                {"low_t_points", env.point_count()},
                {"low_t_environment", to_json(env)},
                {"low_t_samples", kSamples},
                {"low_t_max_diameter", stats.max_diameter},
                {"low_t_freq_nontrivial", freq},
                {"low_t_threshold_3sigma", p + 3.0 * sigma},
                {"low_t_threshold_5sigma", p + 5.0 * sigma},
                {"low_t_pass", low_t_ok}};
  return r;
}

}  // namespace

std::vector<Fixture> acceptance_fixtures() {
  std::vector<Fixture> out;
  const auto q1 = Potential::quadratic(1);
  const auto q2 = Potential::quadratic(2);
  const auto id = BoundarySpec::identity();
  {
    const Box b(Site{0}, Site{1});
    out.push_back({"line2_d1_a1", make_instance(make_env(b, {{Site{0}, 1}, {Site{1}, 1}}), b, id, 1.0, q1)});
  }
  {
    const Box b(Site{0}, Site{3});
    out.push_back({"line4_d1_a0.5",
                   make_instance(make_env(b, {{Site{0}, 1}, {Site{1}, 1}, {Site{2}, 1}, {Site{3}, 1}}), b, id, 0.5, q1)});
  }
  {
    const Box b(Site{0, 0}, Site{1, 1});
    out.push_back(
        {"square5_d2_a2",
         make_instance(make_env(b, {{Site{0, 0}, 2}, {Site{0, 1}, 1}, {Site{1, 0}, 1}, {Site{1, 1}, 1}}), b, id, 2.0, q2)});
  }
  {
    const Box b(Site{-1}, Site{3});
    const Environment env =
        make_env(b, {{Site{-1}, 1}, {Site{0}, 1}, {Site{1}, 2}, {Site{2}, 1}, {Site{3}, 1}});
    const auto xi = BoundarySpec::from_cycles({Cycle({{Site{-1}, 1}, {Site{0}, 1}})});
    out.push_back({"straddle4_d1_a1", make_instance(env, Box(Site{0}, Site{2}), xi, 1.0, q1)});
  }
  {
    const Box b(Site{0, 0}, Site{2, 1});
    out.push_back({"strip6_d2_a2",
                   make_instance(make_env(b, {{Site{0, 0}, 1},
                                              {Site{1, 0}, 2},
                                              {Site{2, 0}, 1},
                                              {Site{0, 1}, 1},
                                              {Site{1, 1}, 1}}),
                                 b, id, 2.0, q2)});
  }
  {
    const Box b(Site{0, 0}, Site{2, 1});
    const Environment env =
        make_env(b, {{Site{0, 0}, 1}, {Site{1, 0}, 1}, {Site{2, 0}, 1}, {Site{0, 1}, 1}, {Site{1, 1}, 2}});
    const auto xi = BoundarySpec::from_cycles({Cycle({{Site{1, 0}, 1}, {Site{2, 0}, 1}})});
    out.push_back({"straddle5_d2_a2", make_instance(env, Box(Site{0, 0}, Site{1, 1}), xi, 2.0, q2)});
  }
  return out;
}

double expected_tv_noise(const SpecTable& table, std::size_t n) {
  double s = 0.0;
  for (const auto& e : table.entries)
    s += std::sqrt(e.probability * (1.0 - e.probability) / (2.0 * std::numbers::pi * static_cast<double>(n)));
  return s;
}

CriterionResult run_criterion(int id, const AcceptanceOptions& opts) {
  const auto t0 = Clock::now();
  CriterionResult r;
  try {
    switch (id) {
      case 1: r = c1_r0(); break;
      case 2: r = c2_oracle(opts); break;
      case 3: r = c3_balance(); break;
      case 4: r = c4_free_process(opts); break;
      case 5: r = c5_count_bound(opts); break;
      case 6: r = c6_coupling(opts); break;
      case 7: r = c7_varphi(); break;
      case 8: r = c8_continuum(opts); break;
      case 9: r = c9_regime(); break;
      case 10: r = c10_structure(opts); break;
      default: throw Error(ErrorKind::parameter, "no acceptance criterion " + std::to_string(id));
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::parameter && (id < 1 || id > 10)) throw;
    r.id = id;
    r.title = "criterion " + std::to_string(id);
    r.pass = false;
    r.measured = {{"error", e.what()}, {"kind", to_string(e.kind())}};
  }
  r.seconds = seconds_since(t0);
  return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
  std::vector<int> ids = opts.only;
  if (ids.empty())
    for (int i = 1; i <= 10; ++i) ids.push_back(i);
  std::vector<CriterionResult> out;
  for (int id : ids) out.push_back(run_criterion(id, opts));
  return out;
}

Json acceptance_report(const std::vector<CriterionResult>& results, const AcceptanceOptions& opts) {
  Json criteria = Json::array();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.pass;
    criteria.push_back(
        {{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"seconds", r.seconds}, {"measured", r.measured}});
  }
  return {{"criteria", criteria},
          {"all_pass", all},
          {"options", {{"seed", opts.seed}, {"jobs", opts.jobs}, {"weight_fault", opts.weight_fault}}}};
}

}  // namespace srp
