#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "srp/errors.hpp"
#include "srp/lossnet.hpp"
#include "srp/rng.hpp"

using namespace srp;

namespace {

MarkSet hand_marks(std::vector<Mark> marks, double horizon) {
  MarkSet m;
  m.t_lo = m.horizon = horizon;
  m.t_hi = 10.0;
  m.marks = std::move(marks);
  m.normalize();
  return m;
}

std::vector<std::size_t> sorted(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  return v;
}

NetworkModel random_model(Rng& rng) {
  const std::size_t n = 2 + rng.next() % 6;
  std::vector<std::uint64_t> masks;
  std::vector<double> weights;
  for (std::size_t k = 0; k < n; ++k) {
    std::uint64_t m = 0;
    while (!m) m = rng.next() & 0x3f;
    masks.push_back(m);
    weights.push_back(0.05 + 0.5 * rng.uniform());
  }
  return make_model(masks, weights, rng.uniform() < 0.5 ? (1ULL << (rng.next() % 6)) : 0);
}

Instance two_site() {
  const Environment env(Box(Site{0}, Site{1}), 0.5, 0, {{Site{0}, 1}, {Site{1}, 1}});
  return make_instance(env, env.box(), BoundarySpec::identity(), 1.0, Potential::quadratic(1));
}

Instance straddle() {
  const Environment env(Box(Site{-1}, Site{3}), 0.5, 0,
                        {{Site{-1}, 1}, {Site{0}, 1}, {Site{1}, 2}, {Site{2}, 1}, {Site{3}, 1}});
  const auto xi = BoundarySpec::from_cycles({Cycle({{Site{-1}, 1}, {Site{0}, 1}})});
  return make_instance(env, Box(Site{0}, Site{2}), xi, 1.0, Potential::quadratic(1));
}

}  // namespace

TEST_CASE("clan of a chain of overlapping marks") {
  // Cycle 0 meets 1, cycle 1 meets 2, cycles 0 and 2 are compatible.
  const auto model = make_model({0b011, 0b110, 0b100}, {0.5, 0.5, 0.5});
  const auto marks = hand_marks({{0, 0.0, 3.0}, {1, 1.0, 3.0}, {2, 2.0, 3.0}}, -10.0);
  CHECK(first_generation(marks, model, 2, 2.0, 2) == std::vector<std::size_t>{1});
  CHECK(first_generation(marks, model, 1, 1.0, 1) == std::vector<std::size_t>{0});
  CHECK(first_generation(marks, model, 0, 0.0, 0).empty());
  CHECK(sorted(clan(2, marks, model)) == std::vector<std::size_t>{0, 1});
  // A virtual cycle-0 mark at 3.5 sees marks 1 (alive until 4).
  CHECK(sorted(clan(0, 3.5, marks, model)) == std::vector<std::size_t>{0, 1});

  const auto t = thin_all(marks, model);
  CHECK(sorted(t.kept) == std::vector<std::size_t>{0, 2});
  CHECK(t.deleted == std::vector<std::size_t>{1});
  const auto fp = thin_fixed_point(marks, model);
  CHECK(sorted(fp.kept) == sorted(t.kept));

  const auto q = thin(marks, model, 2.5);
  CHECK(q.is_kept(2));
  CHECK_FALSE(q.is_kept(1));
  CHECK(q.generations.at(2) == 0);

  const auto late = hand_marks({{0, 0.0, 3.0}, {1, 1.0, 3.0}, {2, 2.0, 3.0}}, 0.5);
  try {
    clan(2, late, model);
    FAIL("expected window_too_small");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::window_too_small);
  }
}

TEST_CASE("boundary-blocked marks are deleted and release their descendants") {
  const auto model = make_model({0b011, 0b110, 0b100}, {0.5, 0.5, 0.5}, 0b001);
  const auto marks = hand_marks({{0, 0.0, 3.0}, {1, 1.0, 3.0}, {2, 2.0, 3.0}}, -10.0);
  const auto t = thin_all(marks, model);
  CHECK(t.kept == std::vector<std::size_t>{1});
  CHECK(sorted(t.deleted) == std::vector<std::size_t>{0, 2});
  CHECK(sorted(thin_fixed_point(marks, model).kept) == t.kept);
}

TEST_CASE("birth-order thinning agrees with the fixed-point iteration") {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const auto model = random_model(rng);
    const auto marks = generate_marks(model, -15.0, 0.0, derive_seed(99, trial));
    const auto a = thin_all(marks, model);
    const auto b = thin_fixed_point(marks, model);
    REQUIRE(sorted(a.kept) == sorted(b.kept));
    REQUIRE(sorted(a.deleted) == sorted(b.deleted));
    CHECK(a.kept.size() + a.deleted.size() == marks.size());

    // Kept marks never overlap in time unless compatible, and never meet
    // the boundary.
    for (std::size_t i : a.kept) {
      CHECK_FALSE(model.blocked(marks.marks[i].cycle));
      for (std::size_t j : a.kept) {
        if (i >= j) continue;
        const Mark& x = marks.marks[i];
        const Mark& y = marks.marks[j];
        const bool overlap = x.birth < y.death() && y.birth < x.death();
        if (overlap) CHECK_FALSE(model.incompatible(x.cycle, y.cycle));
      }
    }
  }
}

TEST_CASE("mark generation") {
  const auto model = make_model({0b1, 0b10}, {0.3, 0.7});
  CHECK(generate_marks(model, 0.0, 0.0, 1).marks.empty());
  const auto m = generate_marks(model, 0.0, 2000.0, 5);
  // Births at total rate W = 1.
  CHECK(m.size() == doctest::Approx(2000.0).epsilon(0.1));
  CHECK(std::is_sorted(m.marks.begin(), m.marks.end(), [](auto& a, auto& b) { return a.birth < b.birth; }));
  double life = 0.0;
  std::size_t ones = 0;
  for (const auto& k : m.marks) {
    life += k.lifetime;
    ones += k.cycle == 1;
  }
  CHECK(life / double(m.size()) == doctest::Approx(1.0).epsilon(0.1));
  CHECK(ones / double(m.size()) == doctest::Approx(0.7).epsilon(0.05));
  CHECK(m.weights_digest == weights_digest(model));
}

TEST_CASE("stationary marks keep earlier stages when extended") {
  const auto model = make_model({0b011, 0b110, 0b101}, {0.9, 0.4, 0.15});
  StationaryMarks sm(model, 17);
  const double t0 = sm.initial_length();
  CHECK(t0 == doctest::Approx(4.0 / 1.0));
  const auto before = sm.marks().marks;
  sm.extend();
  sm.extend();
  CHECK(sm.stages() == 3);
  CHECK(sm.marks().horizon == doctest::Approx(-4.0 * t0));
  std::vector<Mark> recent;
  for (const auto& k : sm.marks().marks)
    if (k.death() > -t0) recent.push_back(k);
  REQUIRE(recent.size() == before.size());
  for (std::size_t i = 0; i < recent.size(); ++i) {
    CHECK(recent[i].birth == before[i].birth);
    CHECK(recent[i].lifetime == before[i].lifetime);
    CHECK(recent[i].cycle == before[i].cycle);
  }
  for (const auto& k : sm.marks().marks) CHECK(k.death() > sm.marks().horizon);
}

TEST_CASE("empty instants") {
  const auto m = hand_marks({{0, 0.0, 1.0}, {0, 2.0, 1.0}}, -1.0);
  const auto e1 = latest_empty_instant(m, 3.5);
  REQUIRE(e1);
  CHECK(*e1 == 3.5);
  const auto e2 = latest_empty_instant(m, 2.5);
  REQUIRE(e2);
  CHECK(*e2 >= 1.0);
  CHECK(*e2 <= 2.0);
  CHECK(alive_at(m, 1.5).empty());
  const auto covered = hand_marks({{0, -2.0, 5.0}}, -1.0);
  CHECK_FALSE(latest_empty_instant(covered, 2.5));
  CHECK(free_counts(m, 1, 2.5) == std::vector<std::uint64_t>{1});
}

TEST_CASE("free process at a fixed time has Poisson marginals") {
  const auto model = make_model({0b01, 0b10}, {0.6, 0.25});
  constexpr int n = 40000;
  double s0 = 0.0, s1 = 0.0, q0 = 0.0;
  for (int i = 0; i < n; ++i) {
    const StationaryMarks sm(model, derive_seed(8, i));
    const auto c = free_counts(sm.marks(), 2, 0.0);
    s0 += double(c[0]);
    s1 += double(c[1]);
    q0 += double(c[0]) * double(c[0]);
  }
  CHECK(s0 / n == doctest::Approx(0.6).epsilon(0.03));
  CHECK(s1 / n == doctest::Approx(0.25).epsilon(0.05));
  // Poisson variance equals its mean.
  CHECK(q0 / n - (s0 / n) * (s0 / n) == doctest::Approx(0.6).epsilon(0.05));
}

TEST_CASE("nu sampling") {
  const Cycle a({{Site{0}, 1}, {Site{1}, 1}}), b({{Site{2}, 1}, {Site{3}, 1}}), c({{Site{4}, 1}, {Site{5}, 1}});
  double sa = 0.0;
  constexpr int n = 20000;
  for (int i = 0; i < n; ++i) {
    const auto s = nu_sample({{a, 0.4}, {b, 0.1}}, {c}, static_cast<std::uint64_t>(i));
    CHECK(s.at(c) >= 1);
    sa += s.count(a) ? double(s.at(a)) : 0.0;
  }
  CHECK(sa / n == doctest::Approx(0.4).epsilon(0.05));
  CHECK_THROWS_AS(nu_sample({{a, 1.5}}, {}, 1), Error);
  CHECK_THROWS_AS(nu_sample({{a, 0.0}}, {}, 1), Error);

  const auto model = make_model({0b1}, {0.3});
  CHECK(nu_counts(model, 4) == nu_counts(model, 4));
}

TEST_CASE("perfect sampler basics") {
  const auto inst = two_site();
  const auto r1 = perfect_sample(inst, 5);
  const auto r2 = perfect_sample(inst, 5);
  CHECK(r1.sample == r2.sample);
  CHECK(r1.t_final == r2.t_final);

  // Extra doublings reuse the randomness and cannot change the sample.
  const auto straddled = straddle();
  for (std::uint64_t s = 0; s < 200; ++s) {
    SampleOptions more;
    more.min_doublings = 3;
    const auto base = perfect_sample(straddled, s);
    const auto longer = perfect_sample(straddled, s, more);
    REQUIRE(base.sample == longer.sample);
    CHECK(longer.doublings >= 3);
    SampleOptions cc;
    cc.rule = StoppingRule::clan_closure;
    REQUIRE(perfect_sample(straddled, s, cc).sample == base.sample);
    for (const auto& b : straddled.boundary) CHECK(base.sample.contains(b));
  }

  // No points: nothing to sample beyond the boundary.
  const Environment lonely(Box(Site{0}, Site{2}), 0.5, 0, {{Site{1}, 1}});
  const auto r = perfect_sample(lonely, lonely.box(), BoundarySpec::identity(), 1.0, Potential::quadratic(1), 3);
  CHECK(r.sample.empty());
}

TEST_CASE("supercritical instance exhausts the window doublings") {
  const Environment env(Box(Site{0, 0}, Site{2, 1}), 0.5, 0,
                        {{Site{0, 0}, 1}, {Site{1, 0}, 1}, {Site{2, 0}, 1}, {Site{0, 1}, 1}, {Site{1, 1}, 2}});
  const auto xi = BoundarySpec::from_cycles({Cycle({{Site{1, 0}, 1}, {Site{2, 0}, 1}})});
  const auto inst = make_instance(env, Box(Site{0, 0}, Site{1, 1}), xi, 0.5, Potential::quadratic(2));
  SampleOptions opts;
  opts.max_doublings = 3;
  try {
    perfect_sample(inst, 1, opts);
    FAIL("expected nontermination");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::nontermination);
  }
}

TEST_CASE("coupled pair dominance") {
  const auto inst = straddle();
  for (std::uint64_t s = 0; s < 300; ++s) {
    const auto c = coupled_pair(inst, s);
    for (const auto& g : c.xi_sample.cycles()) CHECK(c.xi_free.count(g));
    for (const auto& g : c.id_sample.cycles()) CHECK(c.id_free.count(g));
    for (const auto& b : inst.boundary) {
      CHECK(c.xi_sample.contains(b));
      CHECK_FALSE(c.id_free.count(b));
    }
    // Same marks, same perfect-sample result for the xi coordinate.
    CHECK(c.xi_sample == perfect_sample(inst, s).sample);
  }
}
