#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "srp/cyclegas.hpp"

namespace srp {

// Root in (0,1) of r/(1-r)^2 - r = 1/2, with residual below tol.
double r0(double tol = 1e-12);

// rho e^{-rho + 1/2} / (1 - 2 rho), rho in (0, 1/2).
double c_rho(double rho);

// pi / [(r0/C_rho + 1)^{1/d} - 1]^2
double alpha_star(double rho, std::size_t dim);

inline constexpr std::size_t kCountMaxPoints = 10;

// Number of cycles whose ordered support is ybar (up to rotation), by
// exhaustive enumeration over the points at the sites of ybar. Sequences
// that are not ordered supports (a consecutive repeat, cyclically) count 0.
std::uint64_t count_exact(const OrderedSupport& ybar, const Environment& env,
                          std::size_t max_points = kCountMaxPoints);

// M(ybar) = prod over distinct sites z of (e^{1/2}/2) theta(z)! 2^theta(z),
// zero if some theta(z) = 0.
double count_bound(const OrderedSupport& ybar, const Environment& env);

// Intermediate sum sum_a prod_j C(theta_j, a_j) a_j! C(a_j - 1, k_j - 1),
// which sits between count_exact and count_bound.
double count_multinomial(const OrderedSupport& ybar, const Environment& env);

// C_rho^m
double expected_bound(double rho, int m);
// E[(e^{1/2}/2) theta! 2^theta 1{theta != 0}] for theta ~ Poisson(rho), by
// partial sums of the series; equals C_rho.
double expected_site_factor_series(double rho, int terms = 400);

struct WeightSum {
  double partial_sum = 0.0;
  double bound = 0.0;  // phi(alpha)^m for the quadratic potential
};

// Sum over ordered supports (y_1 = 0, y_2, ..., y_m) inside [-R,R]^d with
// cyclically distinct neighbours of prod exp(-alpha |y_{i+1} - y_i|^2).
WeightSum weight_sum_check(double alpha, int m, std::size_t dim, int radius);
// Same sum by direct enumeration; for small radius only.
double weight_sum_bruteforce(double alpha, int m, std::size_t dim, int radius);

enum class GoodDensity { good, not_good, unknown };
std::string to_string(GoodDensity g);
GoodDensity parse_good_density(const std::string& s);

struct GoodDensityResult {
  GoodDensity value = GoodDensity::unknown;
  double jump_range = 0.0;
  bool overridden = false;
};

// good when the jump range L_V is below 1, unknown otherwise unless an
// override is supplied.
GoodDensityResult good_density_check(const Potential& v, double rho,
                                     std::optional<GoodDensity> override_value = std::nullopt);

struct RegimeOptions {
  // Use (1 + sqrt(pi/alpha))^d - 1 in place of phi (quadratic only).
  bool closed_bound = false;
  double varphi_tol = 1e-12;
  std::optional<GoodDensity> good_density_override;
};

struct RegimeReport {
  double rho = 0.0;
  double alpha = 0.0;
  std::size_t dim = 0;
  std::string potential;
  double r0 = 0.0;
  double c_rho = 0.0;
  std::optional<double> alpha_star;
  double varphi_half = 0.0;
  double varphi_full = 0.0;
  std::string varphi_source;  // "series" or "closed_bound"
  bool existence_ok = false;
  bool uniqueness_ok = false;
  GoodDensityResult good_density;
};

RegimeReport regime_report(double rho, double alpha, const Potential& v, const RegimeOptions& opts = {});

}  // namespace srp
