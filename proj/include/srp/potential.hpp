#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "srp/lattice.hpp"

namespace srp {

enum class PotentialKind { quadratic, continuum_comparison, custom_radial_table };

// Lower bound V(x) >= coefficient * |x|^2 - offset, used to certify the tail
// of the phi series.
struct QuadraticEnvelope {
  double coefficient = 0.0;
  double offset = 0.0;
};

// One row of a radial table: V = value for |x|^2 in [radius2, next radius2).
struct RadialRow {
  double radius2 = 0.0;
  double value = 0.0;
};

// Nonnegative radial jump potential.
//
//   quadratic             V(x) = |x|^2
//   continuum_comparison  V(x) = max{|x|^2 - 2 sqrt(d) |x|, 0}
//   custom_radial_table   step function on |x|^2, extended beyond the last
//                         row by max{last value, c|x|^2 - b} when an envelope
//                         is supplied
class Potential {
public:
  static Potential quadratic(std::size_t dim);
  static Potential continuum_comparison(std::size_t dim);
  static Potential radial_table(std::size_t dim, std::vector<RadialRow> rows,
                                std::optional<QuadraticEnvelope> envelope = std::nullopt);
  // Two-column text file "radius2 value"; '#' starts a comment; an optional
  // line "envelope <c> <b>" supplies the quadratic envelope.
  static Potential load_radial_table(std::size_t dim, const std::string& path);

  PotentialKind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return dim_; }
  const std::vector<RadialRow>& rows() const noexcept { return rows_; }

  double operator()(const Site& delta) const;
  double operator()(std::span<const double> delta) const;
  double of_norm2(double r2) const;

  // Envelope valid for every x, if one is known.
  std::optional<QuadraticEnvelope> envelope() const;

  std::string name() const;

private:
  PotentialKind kind_ = PotentialKind::quadratic;
  std::size_t dim_ = 1;
  std::vector<RadialRow> rows_;
  std::optional<QuadraticEnvelope> envelope_;
};

struct VarphiResult {
  double value = 0.0;      // sum over 0 < |x|_inf <= radius
  int radius = 0;
  double tail_bound = 0.0; // certified bound on the omitted terms
};

// phi_V(alpha) = sum over x in Z^d \ {0} of exp(-alpha V(x)), truncated to
// the cube of the returned radius with a certified tail below tol. The zero
// vector is excluded.
VarphiResult varphi(const Potential& v, double alpha, double tol);

// Partial sum over 0 < |x|_inf <= radius.
double varphi_partial(const Potential& v, double alpha, int radius);

// Certified bound on the terms with |x|_inf > radius.
double varphi_tail_bound(const Potential& v, double alpha, int radius);

// (1 + sqrt(pi/alpha))^d - 1
double varphi_quadratic_bound(double alpha, std::size_t dim);

// sup{|x| : V(x) = 0, x in Z^d \ {0}, |x|_inf <= search_radius}, 0 if none.
double jump_range(const Potential& v, int search_radius);

}  // namespace srp
