#include "srp/regime.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <set>

#include "srp/errors.hpp"

namespace srp {

namespace {

void check_rho(double rho) {
  if (!(rho > 0.0 && rho < 0.5)) throw Error(ErrorKind::domain, "rho must lie in (0, 1/2)");
}

double r0_lhs(double r) { return r / ((1.0 - r) * (1.0 - r)) - r - 0.5; }

const double kSiteConstant = std::exp(0.5) / 2.0;

std::set<Site> distinct_sites(const OrderedSupport& ybar) {
  return {ybar.sites.begin(), ybar.sites.end()};
}

bool is_ordered_support(const OrderedSupport& ybar) {
  const auto& y = ybar.sites;
  if (y.empty()) return false;
  if (y.size() == 1) return true;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (y[i] == y[(i + 1) % y.size()]) return false;
  return true;
}

// Matrix power of the 1-D Gaussian kernel on [-R, R]; returns (G^j)(0,0)
// for j = 0..m.
std::vector<double> kernel_diagonal_powers(double alpha, int radius, int m) {
  const int n = 2 * radius + 1;
  std::vector<double> g(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) g[a * n + b] = std::exp(-alpha * double(a - b) * double(a - b));
  std::vector<double> row(n, 0.0);  // e_0^T G^j, origin at index radius
  row[radius] = 1.0;
  std::vector<double> out{1.0};
  for (int j = 1; j <= m; ++j) {
    std::vector<double> next(n, 0.0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) next[b] += row[a] * g[a * n + b];
    row.swap(next);
    out.push_back(row[radius]);
  }
  return out;
}

}  // namespace

double r0(double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::parameter, "tol must be positive");
  double lo = 0.0, hi = 1.0;
  double mid = 0.5;
  for (int i = 0; i < 200; ++i) {
    mid = 0.5 * (lo + hi);
    const double f = r0_lhs(mid);
    if (std::abs(f) < tol && hi - lo < 1e-15) break;
    (f < 0.0 ? lo : hi) = mid;
  }
  return mid;
}

double c_rho(double rho) {
  check_rho(rho);
  return rho * std::exp(-rho + 0.5) / (1.0 - 2.0 * rho);
}

double alpha_star(double rho, std::size_t dim) {
  check_rho(rho);
  if (dim == 0) throw Error(ErrorKind::domain, "dimension must be positive");
  const double root = std::pow(r0() / c_rho(rho) + 1.0, 1.0 / static_cast<double>(dim)) - 1.0;
  return std::numbers::pi / (root * root);
}

std::uint64_t count_exact(const OrderedSupport& ybar, const Environment& env, std::size_t max_points) {
  if (!is_ordered_support(ybar)) return 0;
  const OrderedSupport target = canonical_support(ybar.sites);

  std::vector<PointId> pts;
  for (const Site& z : distinct_sites(ybar))
    for (int i = 1; i <= env.theta(z); ++i) pts.push_back({z, i});
  if (pts.size() > max_points)
    throw Error(ErrorKind::cap_exceeded,
                std::to_string(pts.size()) + " points at the support exceed the cap of " + std::to_string(max_points));
  if (pts.empty()) return 0;

  // Cycles rooted at their smallest point, grown one point at a time.
  const std::size_t n = pts.size();
  std::uint64_t count = 0;
  std::vector<std::size_t> seq;
  std::vector<char> used(n, 0);
  std::function<void()> extend = [&]() {
    if (seq.size() >= 2) {
      std::vector<Site> sites;
      sites.reserve(seq.size());
      for (auto i : seq) sites.push_back(pts[i].site);
      if (canonical_support(std::move(sites)) == target) ++count;
    }
    for (std::size_t j = seq.front() + 1; j < n; ++j) {
      if (used[j]) continue;
      used[j] = 1;
      seq.push_back(j);
      extend();
      seq.pop_back();
      used[j] = 0;
    }
  };
  for (std::size_t s = 0; s < n; ++s) {
    seq.assign(1, s);
    used.assign(n, 0);
    used[s] = 1;
    extend();
  }
  return count;
}

double count_bound(const OrderedSupport& ybar, const Environment& env) {
  double m = 1.0;
  for (const Site& z : distinct_sites(ybar)) {
    const int t = env.theta(z);
    if (t == 0) return 0.0;
    m *= kSiteConstant * std::tgamma(t + 1.0) * std::ldexp(1.0, t);
  }
  return m;
}

double count_multinomial(const OrderedSupport& ybar, const Environment& env) {
  double total = 1.0;
  for (const Site& z : distinct_sites(ybar)) {
    const int t = env.theta(z);
    const int k = static_cast<int>(std::count(ybar.sites.begin(), ybar.sites.end(), z));
    if (t == 0 || k > t) return 0.0;
    double s = 0.0;
    for (int a = k; a <= t; ++a) {
      // C(t,a) a! = t!/(t-a)!
      const double falling = std::tgamma(t + 1.0) / std::tgamma(t - a + 1.0);
      const double boxes = std::tgamma(double(a)) / (std::tgamma(double(k)) * std::tgamma(double(a - k + 1)));
      s += falling * boxes;
    }
    total *= s;
  }
  return total;
}

double expected_bound(double rho, int m) {
  check_rho(rho);
  if (m < 0) throw Error(ErrorKind::domain, "support length must be nonnegative");
  return std::pow(c_rho(rho), m);
}

double expected_site_factor_series(double rho, int terms) {
  check_rho(rho);
  // sum_{i>=1} P(theta = i) (e^{1/2}/2) i! 2^i = (e^{1/2}/2) e^{-rho} sum (2 rho)^i
  double s = 0.0, term = 1.0;
  for (int i = 1; i <= terms; ++i) {
    term *= 2.0 * rho;
    s += term;
  }
  return kSiteConstant * std::exp(-rho) * s;
}

WeightSum weight_sum_check(double alpha, int m, std::size_t dim, int radius) {
  if (!(alpha > 0.0)) throw Error(ErrorKind::parameter, "alpha must be positive");
  if (m < 2) throw Error(ErrorKind::domain, "support length must be at least 2");
  if (dim == 0 || dim > kMaxDim) throw Error(ErrorKind::parameter, "dimension out of range");
  WeightSum out;
  out.bound = std::pow(varphi(Potential::quadratic(dim), alpha, 1e-14).value, m);
  if (radius <= 0) return out;
  // With K = G - I on the cube and G separable, (K^m)(0,0) is the sum over
  // closed walks of length m whose consecutive sites differ.
  const auto diag = kernel_diagonal_powers(alpha, radius, m);
  double sum = 0.0, binom = 1.0;
  for (int j = 0; j <= m; ++j) {
    if (j > 0) binom = binom * (m - j + 1) / j;
    const double sign = ((m - j) % 2 == 0) ? 1.0 : -1.0;
    sum += sign * binom * std::pow(diag[j], static_cast<double>(dim));
  }
  out.partial_sum = std::max(sum, 0.0);
  return out;
}

double weight_sum_bruteforce(double alpha, int m, std::size_t dim, int radius) {
  if (m < 2) throw Error(ErrorKind::domain, "support length must be at least 2");
  if (radius <= 0) return 0.0;
  const Box cube = Box::centered(dim, radius);
  const auto sites = cube.sites();
  const Site origin(dim);
  double total = 0.0;
  std::vector<Site> path{origin};
  std::function<void(double)> walk = [&](double w) {
    if (static_cast<int>(path.size()) == m) {
      if (path.back() == origin) return;
      total += w * std::exp(-alpha * static_cast<double>((origin - path.back()).norm2()));
      return;
    }
    for (const Site& y : sites) {
      if (y == path.back()) continue;
      const double step = std::exp(-alpha * static_cast<double>((y - path.back()).norm2()));
      path.push_back(y);
      walk(w * step);
      path.pop_back();
    }
  };
  walk(1.0);
  return total;
}

std::string to_string(GoodDensity g) {
  switch (g) {
    case GoodDensity::good: return "good";
    case GoodDensity::not_good: return "not_good";
    case GoodDensity::unknown: return "unknown";
  }
  return "unknown";
}

GoodDensity parse_good_density(const std::string& s) {
  if (s == "good") return GoodDensity::good;
  if (s == "not_good") return GoodDensity::not_good;
  if (s == "unknown") return GoodDensity::unknown;
  throw Error(ErrorKind::parameter, "good density must be good, not_good or unknown");
}

GoodDensityResult good_density_check(const Potential& v, double rho, std::optional<GoodDensity> override_value) {
  if (!(rho > 0.0)) throw Error(ErrorKind::domain, "rho must be positive");
  GoodDensityResult out;
  int search = 2 + static_cast<int>(std::ceil(2.0 * std::sqrt(static_cast<double>(v.dim()))));
  if (!v.rows().empty()) search = std::max(search, 2 + static_cast<int>(std::ceil(std::sqrt(v.rows().back().radius2))));
  out.jump_range = jump_range(v, search);
  out.value = out.jump_range < 1.0 ? GoodDensity::good : GoodDensity::unknown;
  if (override_value) {
    out.value = *override_value;
    out.overridden = true;
  }
  return out;
}

RegimeReport regime_report(double rho, double alpha, const Potential& v, const RegimeOptions& opts) {
  check_rho(rho);
  if (!(alpha > 0.0)) throw Error(ErrorKind::parameter, "alpha must be positive");
  RegimeReport r;
  r.rho = rho;
  r.alpha = alpha;
  r.dim = v.dim();
  r.potential = v.name();
  r.r0 = r0();
  r.c_rho = c_rho(rho);
  if (v.kind() == PotentialKind::quadratic) r.alpha_star = alpha_star(rho, v.dim());
  if (opts.closed_bound) {
    if (v.kind() != PotentialKind::quadratic)
      throw Error(ErrorKind::parameter, "the closed phi bound applies to the quadratic potential only");
    r.varphi_half = varphi_quadratic_bound(alpha / 2.0, v.dim());
    r.varphi_full = varphi_quadratic_bound(alpha, v.dim());
    r.varphi_source = "closed_bound";
  } else {
    r.varphi_half = varphi(v, alpha / 2.0, opts.varphi_tol).value;
    r.varphi_full = varphi(v, alpha, opts.varphi_tol).value;
    r.varphi_source = "series";
  }
  r.existence_ok = r.c_rho * r.varphi_half < 1.0;
  r.uniqueness_ok = r.c_rho * r.varphi_full < r.r0;
  r.good_density = good_density_check(v, rho, opts.good_density_override);
  return r;
}

}  // namespace srp
