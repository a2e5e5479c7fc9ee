#include "srp/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "srp/errors.hpp"

namespace srp {

namespace {

void check_dim(std::size_t dim) {
  if (dim == 0 || dim > kMaxDim) throw Error(ErrorKind::parameter, "potential dimension out of range");
}

// counts[r2] = number of x in [-R,R]^d with |x|^2 = r2.
std::vector<double> cube_norm2_counts(std::size_t dim, int radius) {
  const std::size_t r2max = dim * static_cast<std::size_t>(radius) * static_cast<std::size_t>(radius);
  if (r2max > 20'000'000)
    throw Error(ErrorKind::divergence, "phi truncation radius " + std::to_string(radius) + " too large to evaluate");
  std::vector<double> counts(r2max + 1, 0.0);
  counts[0] = 1.0;
  std::size_t reach = 0;
  for (std::size_t axis = 0; axis < dim; ++axis) {
    std::vector<double> next(r2max + 1, 0.0);
    for (std::size_t r2 = 0; r2 <= reach; ++r2) {
      if (counts[r2] == 0.0) continue;
      for (int t = -radius; t <= radius; ++t) next[r2 + static_cast<std::size_t>(t) * t] += counts[r2];
    }
    reach += static_cast<std::size_t>(radius) * static_cast<std::size_t>(radius);
    counts.swap(next);
  }
  return counts;
}

}  // namespace

Potential Potential::quadratic(std::size_t dim) {
  check_dim(dim);
  Potential v;
  v.kind_ = PotentialKind::quadratic;
  v.dim_ = dim;
  return v;
}

Potential Potential::continuum_comparison(std::size_t dim) {
  check_dim(dim);
  Potential v;
  v.kind_ = PotentialKind::continuum_comparison;
  v.dim_ = dim;
  return v;
}

Potential Potential::radial_table(std::size_t dim, std::vector<RadialRow> rows,
                                  std::optional<QuadraticEnvelope> envelope) {
  check_dim(dim);
  if (rows.empty()) throw Error(ErrorKind::parameter, "radial table has no rows");
  if (rows.front().radius2 != 0.0) throw Error(ErrorKind::parameter, "radial table must start at radius2 = 0");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!(rows[i].value >= 0.0)) throw Error(ErrorKind::parameter, "radial table values must be nonnegative");
    if (i > 0 && !(rows[i].radius2 > rows[i - 1].radius2))
      throw Error(ErrorKind::parameter, "radial table radius2 column must increase strictly");
  }
  if (envelope) {
    if (!(envelope->coefficient > 0.0))
      throw Error(ErrorKind::divergence, "envelope coefficient must be positive");
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
      const double need = envelope->coefficient * rows[i + 1].radius2 - envelope->offset;
      if (rows[i].value < need)
        throw Error(ErrorKind::parameter, "envelope does not lie below the table at row " + std::to_string(i));
    }
  }
  Potential v;
  v.kind_ = PotentialKind::custom_radial_table;
  v.dim_ = dim;
  v.rows_ = std::move(rows);
  v.envelope_ = envelope;
  return v;
}

Potential Potential::load_radial_table(std::size_t dim, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::parameter, "cannot open potential table '" + path + "'");
  std::vector<RadialRow> rows;
  std::optional<QuadraticEnvelope> envelope;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "envelope") {
      QuadraticEnvelope e;
      if (!(ls >> e.coefficient >> e.offset)) throw Error(ErrorKind::parameter, "malformed envelope line");
      envelope = e;
      continue;
    }
    RadialRow row;
    try {
      row.radius2 = std::stod(first);
    } catch (const std::exception&) {
      throw Error(ErrorKind::parameter, "malformed table line '" + line + "'");
    }
    if (!(ls >> row.value)) throw Error(ErrorKind::parameter, "malformed table line '" + line + "'");
    rows.push_back(row);
  }
  return radial_table(dim, std::move(rows), envelope);
}

double Potential::of_norm2(double r2) const {
  switch (kind_) {
    case PotentialKind::quadratic:
      return r2;
    case PotentialKind::continuum_comparison: {
      // r (r - 2 sqrt d) is exactly zero at r = 2 sqrt d since sqrt(4d) is
      // computed exactly as 2 sqrt(d).
      const double r = std::sqrt(r2);
      return std::max(r * (r - 2.0 * std::sqrt(static_cast<double>(dim_))), 0.0);
    }
    case PotentialKind::custom_radial_table: {
      auto it = std::upper_bound(rows_.begin(), rows_.end(), r2,
                                 [](double x, const RadialRow& row) { return x < row.radius2; });
      const RadialRow& row = *(it - 1);
      if (it == rows_.end() && envelope_)
        return std::max(row.value, envelope_->coefficient * r2 - envelope_->offset);
      return row.value;
    }
  }
  return 0.0;
}

double Potential::operator()(const Site& delta) const {
  if (delta.dim() != dim_) throw Error(ErrorKind::parameter, "potential evaluated at a vector of the wrong dimension");
  return of_norm2(static_cast<double>(delta.norm2()));
}

double Potential::operator()(std::span<const double> delta) const {
  if (delta.size() != dim_) throw Error(ErrorKind::parameter, "potential evaluated at a vector of the wrong dimension");
  double r2 = 0.0;
  for (double c : delta) r2 += c * c;
  return of_norm2(r2);
}

std::optional<QuadraticEnvelope> Potential::envelope() const {
  switch (kind_) {
    case PotentialKind::quadratic:
      return QuadraticEnvelope{1.0, 0.0};
    case PotentialKind::continuum_comparison:
      // 2 sqrt(d) |x| <= |x|^2 / 2 + 2d
      return QuadraticEnvelope{0.5, 2.0 * static_cast<double>(dim_)};
    case PotentialKind::custom_radial_table:
      return envelope_;
  }
  return std::nullopt;
}

std::string Potential::name() const {
  switch (kind_) {
    case PotentialKind::quadratic: return "quadratic";
    case PotentialKind::continuum_comparison: return "continuum_comparison";
    case PotentialKind::custom_radial_table: return "radial_table";
  }
  return "unknown";
}

double varphi_partial(const Potential& v, double alpha, int radius) {
  if (!(alpha > 0.0)) throw Error(ErrorKind::parameter, "alpha must be positive");
  if (radius <= 0) return 0.0;
  const auto counts = cube_norm2_counts(v.dim(), radius);
  double sum = 0.0;
  // Far shells first so that small terms are not absorbed.
  for (std::size_t r2 = counts.size(); r2-- > 1;)
    if (counts[r2] != 0.0) sum += counts[r2] * std::exp(-alpha * v.of_norm2(static_cast<double>(r2)));
  return sum;
}

double varphi_tail_bound(const Potential& v, double alpha, int radius) {
  if (!(alpha > 0.0)) throw Error(ErrorKind::parameter, "alpha must be positive");
  const auto env = v.envelope();
  if (!env)
    throw Error(ErrorKind::divergence, "cannot certify phi for " + v.name() + " without a quadratic envelope");
  const double beta = alpha * env->coefficient;
  double s = 0.0;
  for (int t = -radius; t <= radius; ++t) s += std::exp(-beta * t * t);
  const double tau = std::sqrt(std::numbers::pi / beta) * std::erfc(radius * std::sqrt(beta));
  const double d = static_cast<double>(v.dim());
  return std::exp(alpha * env->offset) * (std::pow(s + tau, d) - std::pow(s, d));
}

VarphiResult varphi(const Potential& v, double alpha, double tol) {
  if (!(alpha > 0.0)) throw Error(ErrorKind::parameter, "alpha must be positive");
  if (!(tol > 0.0)) throw Error(ErrorKind::parameter, "tol must be positive");
  int radius = 1;
  double tail = varphi_tail_bound(v, alpha, radius);
  while (!(tail < tol)) {
    ++radius;
    tail = varphi_tail_bound(v, alpha, radius);
    if (!std::isfinite(tail) || radius > 100000)
      throw Error(ErrorKind::divergence, "phi tail does not fall below tol");
  }
  return {varphi_partial(v, alpha, radius), radius, tail};
}

double varphi_quadratic_bound(double alpha, std::size_t dim) {
  if (!(alpha > 0.0)) throw Error(ErrorKind::parameter, "alpha must be positive");
  return std::pow(1.0 + std::sqrt(std::numbers::pi / alpha), static_cast<double>(dim)) - 1.0;
}

double jump_range(const Potential& v, int search_radius) {
  if (search_radius <= 0) return 0.0;
  const auto counts = cube_norm2_counts(v.dim(), search_radius);
  double best = 0.0;
  for (std::size_t r2 = 1; r2 < counts.size(); ++r2)
    if (counts[r2] != 0.0 && v.of_norm2(static_cast<double>(r2)) == 0.0)
      best = std::sqrt(static_cast<double>(r2));
  return best;
}

}  // namespace srp
