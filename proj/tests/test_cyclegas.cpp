#include "doctest.h"

#include <cmath>

#include "srp/cyclegas.hpp"
#include "srp/errors.hpp"

using namespace srp;

namespace {
PointId P(int x, int tag = 1) { return {Site{x}, tag}; }
}  // namespace

TEST_CASE("cycles are stored in canonical rotation") {
  const Cycle a({P(2), P(0), P(1)});
  CHECK(a.points().front() == P(0));
  CHECK(a == Cycle({P(0), P(1), P(2)}));
  CHECK_FALSE(a == Cycle({P(0), P(2), P(1)}));
  CHECK(a.length() == 3);
  CHECK(a.contains(P(1)));
  CHECK_FALSE(a.contains(P(1, 2)));
  CHECK_THROWS_AS(Cycle({P(0)}), Error);
  CHECK_THROWS_AS(Cycle({P(0), P(1), P(0)}), Error);
}

TEST_CASE("ordered support") {
  CHECK(canonical_support({Site{1}, Site{1}, Site{2}, Site{0}}).sites == std::vector<Site>{Site{0}, Site{1}, Site{2}});
  CHECK(canonical_support({Site{1}, Site{0}, Site{1}}).sites == std::vector<Site>{Site{0}, Site{1}});
  CHECK(canonical_support({Site{3}, Site{3}}).sites == std::vector<Site>{Site{3}});
  const Cycle c({P(0, 1), P(0, 2), P(5), P(0, 3)});
  CHECK(ordered_support(c).sites == std::vector<Site>{Site{0}, Site{5}});
  CHECK(is_trivial(Cycle({P(4, 1), P(4, 2)})));
  CHECK_FALSE(is_trivial(c));
}

TEST_CASE("hamiltonian and weight") {
  const auto q = Potential::quadratic(1);
  const Cycle swap({P(0), P(1)});
  CHECK(hamiltonian(swap, q) == 2.0);
  CHECK(weight(swap, 1.0, q) == doctest::Approx(std::exp(-2.0)));
  const Cycle tri({P(0), P(1), P(3)});
  CHECK(hamiltonian(tri, q) == 1.0 + 4.0 + 9.0);
  CHECK(hamiltonian(Cycle({P(2, 1), P(2, 2)}), q) == 0.0);
  CHECK(support_hamiltonian(ordered_support(tri), q) == 14.0);

  const GasConfig g({tri});
  CHECK(hamiltonian(g, q, Box(Site{0}, Site{3})) == 14.0);
  // Only points located in the region contribute: 0 -> 1 and 3 -> 0.
  CHECK(hamiltonian(g, q, Box(Site{0}, Site{0})) == 1.0);
  CHECK(hamiltonian(g, q, Box(Site{3}, Site{3})) == 9.0);
  CHECK(hamiltonian(GasConfig{}, q, Box(Site{0}, Site{3})) == 0.0);
}

TEST_CASE("compatibility and gases") {
  const Cycle a({P(0), P(1)}), b({P(1), P(2)}), c({P(1, 2), P(2, 2)});
  CHECK_FALSE(compatible(a, b));
  CHECK(compatible(a, c));
  CHECK(neighbors(a, c));
  CHECK_FALSE(neighbors(a, Cycle({P(5), P(6)})));
  CHECK_THROWS_AS(GasConfig({a, b}), Error);
  const GasConfig g({c, a});
  CHECK(g.cycles().front() == a);
  CHECK(g.contains(c));
  CHECK(gas_compatible(Cycle({P(7), P(8)}), g));
  CHECK_FALSE(gas_compatible(b, g));
  CHECK_THROWS_AS(g.with(b), Error);

  const Environment env(Box(Site{0}, Site{2}), 0.5, 0, {{Site{0}, 1}, {Site{1}, 1}, {Site{2}, 1}});
  CHECK_NOTHROW(check_points(GasConfig({a}), env));
  try {
    check_points(GasConfig({c}), env);
    FAIL("expected a consistency error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::consistency);
  }
}

TEST_CASE("permutation round trip") {
  Permutation pi{{P(0), P(1)}, {P(1), P(2)}, {P(2), P(0)}, {P(5), P(5)}, {P(7), P(8)}, {P(8), P(7)}};
  const GasConfig g = gas_from_permutation(pi);
  CHECK(g.size() == 2);
  const Permutation back = permutation_from_gas(g);
  pi.erase(P(5));
  CHECK(back == pi);
  CHECK(gas_from_permutation({}).empty());
  CHECK_THROWS_AS(gas_from_permutation({{P(0), P(1)}, {P(1), P(1)}}), Error);
  CHECK_THROWS_AS(gas_from_permutation({{P(0), P(1)}}), Error);
}
