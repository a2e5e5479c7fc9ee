#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "srp/errors.hpp"
#include "srp/potential.hpp"

using namespace srp;

TEST_CASE("potential values") {
  const auto q = Potential::quadratic(2);
  CHECK(q(Site{1, 2}) == 5.0);
  CHECK(q(Site{0, 0}) == 0.0);
  const auto c = Potential::continuum_comparison(1);
  CHECK(c(Site{1}) == 0.0);
  CHECK(c(Site{2}) == 0.0);
  CHECK(c(Site{3}) == doctest::Approx(3.0));
  const auto c2 = Potential::continuum_comparison(2);
  CHECK(c2(Site{3, 4}) == doctest::Approx(25.0 - 2.0 * std::sqrt(2.0) * 5.0));
}

TEST_CASE("phi for the quadratic potential") {
  // Direct sum 2 sum_{k>=1} e^{-k^2}.
  double direct = 0.0;
  for (int k = 1; k < 20; ++k) direct += 2.0 * std::exp(-double(k * k));
  const auto r = varphi(Potential::quadratic(1), 1.0, 1e-12);
  CHECK(r.value == doctest::Approx(direct).epsilon(1e-12));
  CHECK(r.value == doctest::Approx(0.772637).epsilon(1e-6));
  CHECK(r.tail_bound < 1e-12);

  // Separable in d: phi_d = (1 + phi_1)^d - 1.
  for (double a : {0.5, 2.0}) {
    const double p1 = varphi(Potential::quadratic(1), a, 1e-13).value;
    const double p3 = varphi(Potential::quadratic(3), a, 1e-13).value;
    CHECK(p3 == doctest::Approx(std::pow(1.0 + p1, 3.0) - 1.0).epsilon(1e-10));
  }
  CHECK(varphi_quadratic_bound(1.0, 1) == doctest::Approx(std::sqrt(std::numbers::pi)));
  CHECK_THROWS_AS(varphi(Potential::quadratic(1), 0.0, 1e-9), Error);
}

TEST_CASE("phi increases as alpha decreases") {
  const auto q = Potential::quadratic(2);
  double prev = 0.0;
  for (double a : {8.0, 4.0, 2.0, 1.0, 0.5}) {
    const double v = varphi(q, a, 1e-10).value;
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("jump range") {
  CHECK(jump_range(Potential::quadratic(2), 5) == 0.0);
  CHECK(jump_range(Potential::continuum_comparison(1), 5) == doctest::Approx(2.0));
  CHECK(jump_range(Potential::continuum_comparison(2), 5) == doctest::Approx(std::sqrt(8.0)));
}

TEST_CASE("radial table potential") {
  const auto t = Potential::radial_table(1, {{0.0, 0.0}, {1.0, 2.0}, {4.0, 5.0}}, QuadraticEnvelope{1.0, 3.0});
  CHECK(t(Site{0}) == 0.0);
  CHECK(t(Site{1}) == 2.0);
  CHECK(t(Site{2}) == 5.0);
  CHECK(t(Site{10}) == doctest::Approx(97.0));
  const double v = varphi(t, 1.0, 1e-10).value;
  double direct = 2.0 * (std::exp(-2.0) + std::exp(-5.0));
  for (int k = 3; k < 20; ++k) direct += 2.0 * std::exp(-std::max(5.0, double(k * k) - 3.0));
  CHECK(v == doctest::Approx(direct).epsilon(1e-9));

  const auto no_env = Potential::radial_table(1, {{0.0, 0.0}, {1.0, 2.0}});
  CHECK_THROWS_AS(varphi(no_env, 1.0, 1e-9), Error);

  const std::string path = (std::filesystem::temp_directory_path() / "srp_radial_table_test.txt").string();
  std::ofstream(path) << "# r2 value\n0 0\n1 2\n4 5\nenvelope 1 3\n";
  const auto loaded = Potential::load_radial_table(1, path);
  CHECK(loaded(Site{2}) == 5.0);
  CHECK(varphi(loaded, 1.0, 1e-10).value == doctest::Approx(v));
  std::filesystem::remove(path);
}
