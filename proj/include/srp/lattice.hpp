#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace srp {

inline constexpr std::size_t kMaxDim = 6;

// A point of Z^d with inline storage. Ordering is lexicographic on the
// coordinates (sites of different dimension compare by dimension first).
class Site {
public:
  Site() = default;
  explicit Site(std::size_t dim);
  Site(std::initializer_list<int> coords);
  explicit Site(std::span<const int> coords);

  std::size_t dim() const noexcept { return dim_; }
  int operator[](std::size_t i) const noexcept { return c_[i]; }
  int& operator[](std::size_t i) noexcept { return c_[i]; }
  std::span<const int> coords() const noexcept { return {c_.data(), dim_}; }

  Site operator-(const Site& o) const;
  Site operator+(const Site& o) const;
  std::int64_t norm2() const noexcept;
  double norm() const noexcept;

  friend bool operator==(const Site& a, const Site& b) noexcept {
    return a.dim_ == b.dim_ && a.c_ == b.c_;
  }
  friend std::strong_ordering operator<=>(const Site& a, const Site& b) noexcept;

  std::string str() const;

private:
  std::array<int, kMaxDim> c_{};
  std::uint8_t dim_ = 0;
};

// Axis-aligned integer box with inclusive bounds.
struct Box {
  Site lo;
  Site hi;

  Box() = default;
  Box(Site lo_, Site hi_);

  // [-n, n]^d
  static Box centered(std::size_t dim, int n);

  std::size_t dim() const noexcept { return lo.dim(); }
  bool empty() const noexcept;
  std::size_t volume() const noexcept;
  bool contains(const Site& x) const noexcept;
  bool contains(const Box& b) const noexcept;
  Box hull(const Site& x) const;
  Box hull(const Box& b) const;

  // Visits every site in lexicographic order.
  void for_each(const std::function<void(const Site&)>& fn) const;
  std::vector<Site> sites() const;

  friend bool operator==(const Box&, const Box&) = default;
};

// Axis-aligned real box [lo_i, hi_i).
struct RealBox {
  std::vector<double> lo;
  std::vector<double> hi;

  std::size_t dim() const noexcept { return lo.size(); }
  double volume() const noexcept;
  bool contains(std::span<const double> x) const noexcept;
  friend bool operator==(const RealBox&, const RealBox&) = default;
};

// Parses "a:b" or "a:b,c:d,..." into a box with inclusive bounds.
Box parse_box(const std::string& text);
std::string format_box(const Box& box);

}  // namespace srp

template <>
struct std::hash<srp::Site> {
  std::size_t operator()(const srp::Site& s) const noexcept;
};
