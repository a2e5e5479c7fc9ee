#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "srp/errors.hpp"
#include "srp/exactgibbs.hpp"

using namespace srp;

namespace {

Environment line_env(std::vector<int> theta) {
  std::map<Site, int> m;
  for (std::size_t i = 0; i < theta.size(); ++i)
    if (theta[i]) m[Site{static_cast<int>(i)}] = theta[i];
  return Environment(Box(Site{0}, Site{static_cast<int>(theta.size()) - 1}), 0.5, 0, m);
}

// Law over permutations of the points of the whole box by brute force over
// every bijection.
std::map<GasConfig, double> permutation_law(const Environment& env, double alpha, const Potential& v) {
  const auto pts = points_of(env, env.box());
  std::vector<std::size_t> image(pts.size());
  for (std::size_t i = 0; i < image.size(); ++i) image[i] = i;
  std::map<GasConfig, double> law;
  double z = 0.0;
  do {
    Permutation pi;
    double h = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      pi.emplace(pts[i], pts[image[i]]);
      h += v(pts[image[i]].site - pts[i].site);
    }
    const double w = std::exp(-alpha * h);
    law[gas_from_permutation(pi)] += w;
    z += w;
  } while (std::next_permutation(image.begin(), image.end()));
  for (auto& [g, p] : law) p /= z;
  return law;
}

}  // namespace

TEST_CASE("cycle counts") {
  CHECK(cycle_count(2) == 1);
  CHECK(cycle_count(3) == 5);
  CHECK(cycle_count(4) == 20);
  CHECK(cycle_count(5) == 84);
  for (std::size_t n = 1; n <= 6; ++n) {
    std::vector<int> theta(n, 1);
    CHECK(enumerate_cycles(line_env(theta), Box(Site{0}, Site{int(n) - 1})).size() == cycle_count(n));
  }
  const auto cycles = enumerate_cycles(line_env({2, 1, 1}), Box(Site{0}, Site{2}));
  CHECK(std::is_sorted(cycles.begin(), cycles.end()));
  CHECK(std::adjacent_find(cycles.begin(), cycles.end()) == cycles.end());
}

TEST_CASE("compatible configurations of n points number n!") {
  std::size_t fact = 1;
  for (std::size_t n = 1; n <= 6; ++n) {
    fact *= n;
    std::vector<int> theta(n, 1);
    const auto env = line_env(theta);
    CHECK(enumerate_compatible(env, env.box(), BoundarySpec::identity()).size() == fact);
  }
  const auto env = line_env({3, 0, 2});
  CHECK(enumerate_compatible(env, env.box(), BoundarySpec::identity()).size() == 120);
}

TEST_CASE("two-site swap probability") {
  const auto env = line_env({1, 1});
  const auto t = specification(env, env.box(), BoundarySpec::identity(), 1.0, Potential::quadratic(1));
  REQUIRE(t.entries.size() == 2);
  CHECK(t.entries[0].gas.empty());
  CHECK(t.entries[1].probability == doctest::Approx(0.119203).epsilon(1e-5));
  CHECK(t.partition_value == doctest::Approx(1.0 + std::exp(-2.0)));
}

TEST_CASE("Gibbs table matches the brute-force permutation law") {
  for (double alpha : {0.3, 1.0, 2.5}) {
    const auto env = line_env({2, 0, 1, 2});
    const auto q = Potential::quadratic(1);
    const auto table = specification(env, env.box(), BoundarySpec::identity(), alpha, q);
    const auto law = permutation_law(env, alpha, q);
    REQUIRE(table.entries.size() == law.size());
    double sum = 0.0;
    for (const auto& e : table.entries) {
      CHECK(e.probability == doctest::Approx(law.at(e.gas)).epsilon(1e-12));
      sum += e.probability;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(table.form_mismatch < 1e-12);
    for (std::size_t i = 1; i < table.entries.size(); ++i)
      CHECK(table.entries[i - 1].probability >= table.entries[i].probability);
  }
}

TEST_CASE("boundary cycles are always present") {
  const Environment env(Box(Site{-1}, Site{3}), 0.5, 0,
                        {{Site{-1}, 1}, {Site{0}, 1}, {Site{1}, 2}, {Site{2}, 1}, {Site{3}, 1}});
  const Cycle straddle({{Site{-1}, 1}, {Site{0}, 1}});
  const Cycle outside({{Site{3}, 1}, {Site{2}, 1}});
  const Box lam(Site{0}, Site{1});
  const auto xi = BoundarySpec::from_cycles({straddle});
  CHECK(boundary_cycles(xi, lam) == std::vector<Cycle>{straddle});
  CHECK(boundary_cycles(BoundarySpec::from_cycles({outside}), lam).empty());

  const auto table = specification(env, lam, xi, 1.0, Potential::quadratic(1));
  // Point (0)#1 is taken, leaving the two points at site 1: identity or swap.
  REQUIRE(table.entries.size() == 2);
  for (const auto& e : table.entries) CHECK(e.gas.contains(straddle));
  CHECK(table.entries[1].probability == doctest::Approx(0.5));

  CHECK_THROWS_AS(BoundarySpec::from_cycles({straddle, Cycle({{Site{0}, 1}, {Site{1}, 1}})}), Error);
  const auto bad = BoundarySpec::from_cycles({Cycle({{Site{0}, 1}, {Site{7}, 1}})});
  CHECK_THROWS_AS(specification(env, lam, bad, 1.0, Potential::quadratic(1)), Error);
}

TEST_CASE("point and cycle forms agree with a straddling boundary") {
  const Environment env(Box(Site{0, 0}, Site{2, 1}), 0.5, 0,
                        {{Site{0, 0}, 1}, {Site{1, 0}, 1}, {Site{2, 0}, 1}, {Site{0, 1}, 1}, {Site{1, 1}, 2}});
  const auto xi = BoundarySpec::from_cycles({Cycle({{Site{1, 0}, 1}, {Site{2, 0}, 1}})});
  const auto inst = make_instance(env, Box(Site{0, 0}, Site{1, 1}), xi, 0.7, Potential::quadratic(2));
  const auto table = specification(inst);
  CHECK(table.form_mismatch < 1e-12);
  CHECK(detailed_balance_residual(table, inst) < 1e-12);
  CHECK(table.entries.size() == 24);
}

TEST_CASE("cap on the number of points") {
  std::vector<int> theta(10, 1);
  const auto env = line_env(theta);
  try {
    make_instance(env, env.box(), BoundarySpec::identity(), 1.0, Potential::quadratic(1));
    FAIL("expected the cap to trigger");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::cap_exceeded);
  }
  CHECK_NOTHROW(make_instance(env, env.box(), BoundarySpec::identity(), 1.0, Potential::quadratic(1), 10));
  CHECK_THROWS_AS(make_instance(env, env.box(), BoundarySpec::identity(), 0.0, Potential::quadratic(1)), Error);
  CHECK_THROWS_AS(make_instance(env, env.box(), BoundarySpec::identity(), 1.0, Potential::quadratic(2)), Error);
}

TEST_CASE("exact sampler frequencies") {
  const auto env = line_env({1, 1, 1});
  const auto table = specification(env, env.box(), BoundarySpec::identity(), 0.5, Potential::quadratic(1));
  std::map<GasConfig, int> hits;
  constexpr int n = 60000;
  for (int i = 0; i < n; ++i) ++hits[sample_exact(table, static_cast<std::uint64_t>(i))];
  for (const auto& e : table.entries) {
    const double sd = std::sqrt(e.probability * (1.0 - e.probability) / n);
    CHECK(std::abs(hits[e.gas] / double(n) - e.probability) < 5.0 * sd);
  }
  CHECK(sample_exact(table, 42) == sample_exact(table, 42));
}
