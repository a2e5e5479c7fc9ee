#include "srp/lattice.hpp"

#include <cmath>
#include <sstream>

#include "srp/errors.hpp"
#include "srp/rng.hpp"

namespace srp {

Site::Site(std::size_t dim) {
  if (dim == 0 || dim > kMaxDim)
    throw Error(ErrorKind::parameter, "dimension must be in 1.." + std::to_string(kMaxDim));
  dim_ = static_cast<std::uint8_t>(dim);
}

Site::Site(std::initializer_list<int> coords) : Site(std::span<const int>(coords.begin(), coords.size())) {}

Site::Site(std::span<const int> coords) : Site(coords.size()) {
  for (std::size_t i = 0; i < coords.size(); ++i) c_[i] = coords[i];
}

Site Site::operator-(const Site& o) const {
  if (o.dim_ != dim_) throw Error(ErrorKind::parameter, "site dimension mismatch");
  Site r(dim_);
  for (std::size_t i = 0; i < dim_; ++i) r.c_[i] = c_[i] - o.c_[i];
  return r;
}

Site Site::operator+(const Site& o) const {
  if (o.dim_ != dim_) throw Error(ErrorKind::parameter, "site dimension mismatch");
  Site r(dim_);
  for (std::size_t i = 0; i < dim_; ++i) r.c_[i] = c_[i] + o.c_[i];
  return r;
}

std::int64_t Site::norm2() const noexcept {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < dim_; ++i) s += static_cast<std::int64_t>(c_[i]) * c_[i];
  return s;
}

double Site::norm() const noexcept { return std::sqrt(static_cast<double>(norm2())); }

std::strong_ordering operator<=>(const Site& a, const Site& b) noexcept {
  if (auto c = a.dim_ <=> b.dim_; c != 0) return c;
  for (std::size_t i = 0; i < a.dim_; ++i)
    if (auto c = a.c_[i] <=> b.c_[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

std::string Site::str() const {
  std::string s = "(";
  for (std::size_t i = 0; i < dim_; ++i) {
    if (i) s += ',';
    s += std::to_string(c_[i]);
  }
  return s + ")";
}

Box::Box(Site lo_, Site hi_) : lo(lo_), hi(hi_) {
  if (lo.dim() != hi.dim()) throw Error(ErrorKind::parameter, "box corner dimension mismatch");
}

Box Box::centered(std::size_t dim, int n) {
  Site lo(dim), hi(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    lo[i] = -n;
    hi[i] = n;
  }
  return Box(lo, hi);
}

bool Box::empty() const noexcept {
  if (lo.dim() == 0) return true;
  for (std::size_t i = 0; i < lo.dim(); ++i)
    if (lo[i] > hi[i]) return true;
  return false;
}

std::size_t Box::volume() const noexcept {
  if (empty()) return 0;
  std::size_t v = 1;
  for (std::size_t i = 0; i < lo.dim(); ++i) v *= static_cast<std::size_t>(hi[i] - lo[i] + 1);
  return v;
}

bool Box::contains(const Site& x) const noexcept {
  if (x.dim() != lo.dim()) return false;
  for (std::size_t i = 0; i < x.dim(); ++i)
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  return true;
}

bool Box::contains(const Box& b) const noexcept {
  return b.empty() || (contains(b.lo) && contains(b.hi));
}

Box Box::hull(const Site& x) const {
  Box r = *this;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    r.lo[i] = std::min(r.lo[i], x[i]);
    r.hi[i] = std::max(r.hi[i], x[i]);
  }
  return r;
}

Box Box::hull(const Box& b) const { return hull(b.lo).hull(b.hi); }

void Box::for_each(const std::function<void(const Site&)>& fn) const {
  if (empty()) return;
  Site x = lo;
  const std::size_t d = lo.dim();
  while (true) {
    fn(x);
    // Odometer with the last axis fastest gives lexicographic order.
    std::size_t i = d;
    while (i > 0) {
      --i;
      if (x[i] < hi[i]) {
        ++x[i];
        break;
      }
      x[i] = lo[i];
      if (i == 0) return;
    }
  }
}

std::vector<Site> Box::sites() const {
  std::vector<Site> out;
  out.reserve(volume());
  for_each([&](const Site& x) { out.push_back(x); });
  return out;
}

double RealBox::volume() const noexcept {
  if (lo.empty()) return 0.0;
  double v = 1.0;
  for (std::size_t i = 0; i < lo.size(); ++i) v *= std::max(0.0, hi[i] - lo[i]);
  return v;
}

bool RealBox::contains(std::span<const double> x) const noexcept {
  if (x.size() != lo.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(x[i] >= lo[i] && x[i] < hi[i])) return false;
  return true;
}

Box parse_box(const std::string& text) {
  std::vector<int> lo, hi;
  std::stringstream ss(text);
  std::string axis;
  while (std::getline(ss, axis, ',')) {
    const auto colon = axis.find(':');
    try {
      if (colon == std::string::npos) {
        const int v = std::stoi(axis);
        lo.push_back(v);
        hi.push_back(v);
      } else {
        lo.push_back(std::stoi(axis.substr(0, colon)));
        hi.push_back(std::stoi(axis.substr(colon + 1)));
      }
    } catch (const std::exception&) {
      throw Error(ErrorKind::parameter, "malformed box '" + text + "'");
    }
  }
  if (lo.empty()) throw Error(ErrorKind::parameter, "empty box");
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (lo[i] > hi[i]) throw Error(ErrorKind::parameter, "box '" + text + "' has lo > hi");
  return Box(Site(std::span<const int>(lo)), Site(std::span<const int>(hi)));
}

std::string format_box(const Box& box) {
  std::string s;
  for (std::size_t i = 0; i < box.dim(); ++i) {
    if (i) s += ',';
    s += std::to_string(box.lo[i]) + ":" + std::to_string(box.hi[i]);
  }
  return s;
}

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::domain: return "domain";
    case ErrorKind::consistency: return "consistency";
    case ErrorKind::structure: return "structure";
    case ErrorKind::boundary: return "boundary";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::cap_exceeded: return "cap_exceeded";
    case ErrorKind::window_too_small: return "window_too_small";
    case ErrorKind::nontermination: return "nontermination";
    case ErrorKind::contract: return "contract";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::parameter:
    case ErrorKind::domain:
    case ErrorKind::structure:
    case ErrorKind::boundary:
    case ErrorKind::divergence:
    case ErrorKind::consistency:
      return 2;
    case ErrorKind::cap_exceeded:
      return 3;
    case ErrorKind::window_too_small:
    case ErrorKind::nontermination:
      return 4;
    case ErrorKind::contract:
      return 5;
  }
  return 5;
}

}  // namespace srp

std::size_t std::hash<srp::Site>::operator()(const srp::Site& s) const noexcept {
  std::uint64_t h = s.dim();
  for (int c : s.coords()) h = srp::splitmix64(h ^ static_cast<std::uint32_t>(c));
  return static_cast<std::size_t>(h);
}
