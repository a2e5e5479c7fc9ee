#include "doctest.h"

#include <sstream>

#include "srp/diagnostics.hpp"
#include "srp/errors.hpp"
#include "srp/exactgibbs.hpp"

using namespace srp;

namespace {
PointId P(int x, int tag = 1) { return {Site{x}, tag}; }
}  // namespace

TEST_CASE("K_f event") {
  const auto q = Potential::quadratic(1);
  const GasConfig eta({Cycle({P(0), P(1), P(3)})});
  const Box region(Site{0}, Site{3});
  CHECK(kf_event(eta, [](const Site&) { return 20.0; }, q, region).holds);
  const auto r = kf_event(eta, [](const Site&) { return 10.0; }, q, region);
  CHECK_FALSE(r.holds);
  CHECK(r.violations.size() == 3);
  CHECK(kf_event(eta, [](const Site&) { return 10.0; }, q, Box(Site{2}, Site{2})).holds);
  CHECK(kf_event(GasConfig{}, [](const Site&) { return 0.0; }, q, region).holds);
}

TEST_CASE("separating sets") {
  const GasPair pair{GasConfig({Cycle({P(0), P(1)})}), GasConfig({Cycle({P(1, 2), P(2)}), Cycle({P(5), P(6)})})};
  CHECK(separates(pair, Box(Site{0}, Site{2})));
  CHECK(separates(pair, Box(Site{0}, Site{6})));
  CHECK_FALSE(separates(pair, Box(Site{0}, Site{1})));
  CHECK(separates(pair, std::set<Site>{Site{0}, Site{1}, Site{2}, Site{9}}));
  CHECK(separates(pair, std::set<Site>{}));

  const auto found = separating_set_search(pair, 0, Box(Site{-5}, Site{10}));
  REQUIRE(found.status == SeparationStatus::found);
  CHECK(*found.delta == Box(Site{0}, Site{2}));
  CHECK(separates(pair, *found.delta));

  const auto escape = separating_set_search(pair, 0, Box(Site{-1}, Site{1}));
  CHECK(escape.status == SeparationStatus::inconclusive);
  CHECK(separating_set_search(pair, 3, Box(Site{-1}, Site{1})).status == SeparationStatus::no_box);
  CHECK(separating_set_search(GasPair{}, 2, Box(Site{-5}, Site{5})).delta == Box(Site{-2}, Site{2}));
}

TEST_CASE("open paths of disagreement") {
  // Chain 0-1, 1-2, 2-3 across the two gases plus a single-site cycle.
  const GasPair pair{GasConfig({Cycle({P(0), P(1)}), Cycle({P(2), P(3)}), Cycle({P(7, 1), P(7, 2)})}),
                     GasConfig({Cycle({P(1, 2), P(2, 2)})})};
  CHECK(open_path_D(pair, Site{0}, 0));
  CHECK(open_path_D(pair, Site{0}, 3));
  CHECK_FALSE(open_path_D(pair, Site{0}, 4));
  CHECK(open_path_D(pair, Site{1}, 2));
  CHECK_FALSE(open_path_D(pair, Site{7}, 1));
  CHECK_FALSE(open_path_D(pair, Site{5}, 1));

  // A star: one centre cycle with three leaves gives paths of length 3, not 4.
  const GasPair star{GasConfig({Cycle({P(0), P(1), P(2)})}),
                     GasConfig({Cycle({P(0, 2), P(10)}), Cycle({P(1, 2), P(11)}), Cycle({P(2, 2), P(12)})})};
  CHECK(open_path_D(star, Site{10}, 3));
  CHECK_FALSE(open_path_D(star, Site{10}, 4));
}

TEST_CASE("cycle statistics") {
  const GasConfig a({Cycle({P(0), P(2)}), Cycle({P(5, 1), P(5, 2)})});
  const GasConfig b;
  const auto s = cycle_stats({a, b});
  CHECK(s.n_samples == 2);
  CHECK(s.n_cycles == 2);
  CHECK(s.n_nontrivial == 1);
  CHECK(s.samples_with_nontrivial == 1);
  CHECK(s.max_jump == doctest::Approx(2.0));
  CHECK(s.max_diameter == doctest::Approx(2.0));
  CHECK(s.histogram.at(2) == 2);
  CHECK(s.site_histogram.at(1) == 1);
  CHECK(s.frac_samples_nontrivial() == 0.5);

  CycleStats x, y;
  x.add(a);
  y.add(b);
  x.merge(y);
  CHECK(x.n_cycles == s.n_cycles);
  CHECK(x.histogram == s.histogram);

  std::ostringstream out;
  write_histogram_csv(out, s);
  CHECK(out.str() == "length,count\n2,2\n");
}

TEST_CASE("total variation") {
  const Environment env(Box(Site{0}, Site{1}), 0.5, 0, {{Site{0}, 1}, {Site{1}, 1}});
  const auto t = specification(env, env.box(), BoundarySpec::identity(), 1.0, Potential::quadratic(1));
  const GasConfig swap({Cycle({P(0), P(1)})});
  CHECK(tv_distance({{GasConfig{}, 1}}, t) == doctest::Approx(t.entries[1].probability));
  CHECK(tv_distance({{swap, 1}}, t) == doctest::Approx(t.entries[0].probability));
  CHECK_THROWS_AS(tv_distance({}, t), Error);
  CHECK_THROWS_AS(tv_distance({{GasConfig({Cycle({P(0), P(4)})}), 1}}, t), Error);
}
