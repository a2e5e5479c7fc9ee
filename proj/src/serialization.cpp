#include "srp/serialization.hpp"

#include <cstdio>
#include <fstream>

#include "srp/errors.hpp"

namespace srp {

namespace {

Json site_json(const Site& x) {
  Json a = Json::array();
  for (int c : x.coords()) a.push_back(c);
  return a;
}

Site site_from(const Json& j) {
  std::vector<int> c = j.get<std::vector<int>>();
  if (c.empty() || c.size() > kMaxDim) throw Error(ErrorKind::parameter, "site has an invalid dimension");
  return Site(std::span<const int>(c));
}

Json box_json(const Box& b) {
  Json a = Json::array();
  for (std::size_t i = 0; i < b.dim(); ++i) a.push_back({b.lo[i], b.hi[i]});
  return a;
}

Box box_from(const Json& j) {
  std::vector<int> lo, hi;
  for (const auto& r : j) {
    lo.push_back(r.at(0).get<int>());
    hi.push_back(r.at(1).get<int>());
  }
  return Box(Site(std::span<const int>(lo)), Site(std::span<const int>(hi)));
}

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::parameter, std::string("malformed JSON input: ") + e.what());
  }
}

}  // namespace

Json to_json(const Environment& env) {
  Json sites = Json::array();
  for (const auto& [x, t] : env.multiplicities()) {
    Json row = site_json(x);
    row.push_back(t);
    sites.push_back(std::move(row));
  }
  return {{"dim", env.dim()}, {"box", box_json(env.box())}, {"rho", env.rho()},
          {"seed", env.seed()}, {"sites", std::move(sites)}};
}

Environment environment_from_json(const Json& j) {
  return guarded([&] {
    const auto dim = j.at("dim").get<std::size_t>();
    Box box = box_from(j.at("box"));
    if (box.dim() != dim) throw Error(ErrorKind::parameter, "box dimension differs from dim");
    std::map<Site, int> theta;
    for (const auto& row : j.at("sites")) {
      if (row.size() != dim + 1) throw Error(ErrorKind::parameter, "site row has the wrong length");
      std::vector<int> c;
      for (std::size_t i = 0; i < dim; ++i) c.push_back(row.at(i).get<int>());
      const int t = row.at(dim).get<int>();
      if (t < 0) throw Error(ErrorKind::parameter, "multiplicities must be nonnegative");
      theta[Site(std::span<const int>(c))] = t;
    }
    return Environment(box, j.value("rho", 0.0), j.value("seed", std::uint64_t{0}), std::move(theta));
  });
}

Json to_json(const ContinuumPointSet& pts) {
  return {{"dim", pts.dim},        {"lo", pts.region.lo}, {"hi", pts.region.hi},
          {"rho", pts.rho},        {"seed", pts.seed},    {"points", pts.points}};
}

ContinuumPointSet continuum_from_json(const Json& j) {
  return guarded([&] {
    ContinuumPointSet p;
    p.dim = j.at("dim").get<std::size_t>();
    p.region.lo = j.at("lo").get<std::vector<double>>();
    p.region.hi = j.at("hi").get<std::vector<double>>();
    p.rho = j.value("rho", 0.0);
    p.seed = j.value("seed", std::uint64_t{0});
    p.points = j.at("points").get<std::vector<std::vector<double>>>();
    return p;
  });
}

Json to_json(const PointId& p) { return Json::array({site_json(p.site), p.tag}); }

Json to_json(const Cycle& c) {
  Json a = Json::array();
  for (const auto& p : c.points()) a.push_back(to_json(p));
  return a;
}

Json to_json(const GasConfig& g) {
  Json a = Json::array();
  for (const auto& c : g.cycles()) a.push_back(to_json(c));
  return a;
}

PointId point_from_json(const Json& j) {
  return guarded([&] { return PointId{site_from(j.at(0)), j.at(1).get<int>()}; });
}

Cycle cycle_from_json(const Json& j) {
  std::vector<PointId> pts;
  guarded([&] {
    for (const auto& p : j) pts.push_back(point_from_json(p));
    return 0;
  });
  return Cycle(std::move(pts));
}

GasConfig gas_from_json(const Json& j) {
  std::vector<Cycle> cycles;
  guarded([&] {
    for (const auto& c : j) cycles.push_back(cycle_from_json(c));
    return 0;
  });
  return GasConfig(std::move(cycles));
}

Json to_json(const SpecTable& t) {
  Json entries = Json::array();
  for (const auto& e : t.entries) entries.push_back({{"gas", to_json(e.gas)}, {"probability", e.probability}});
  char digest[17];
  std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(t.params.xi_digest));
  return {{"params",
           {{"alpha", t.params.alpha},
            {"potential", t.params.potential},
            {"lambda", format_box(t.params.lam)},
            {"xi_digest", digest}}},
          {"partition_value", t.partition_value},
          {"form_mismatch", t.form_mismatch},
          {"entries", std::move(entries)}};
}

Json to_json(const RegimeReport& r) {
  Json j = {{"rho", r.rho},
            {"alpha", r.alpha},
            {"dim", r.dim},
            {"potential", r.potential},
            {"r0", r.r0},
            {"C_rho", r.c_rho},
            {"alpha_star", r.alpha_star ? Json(*r.alpha_star) : Json(nullptr)},
            {"varphi_half", r.varphi_half},
            {"varphi_full", r.varphi_full},
            {"varphi_source", r.varphi_source},
            {"existence_ok", r.existence_ok},
            {"uniqueness_ok", r.uniqueness_ok},
            {"good_density",
             {{"value", to_string(r.good_density.value)},
              {"jump_range", r.good_density.jump_range},
              {"overridden", r.good_density.overridden}}}};
  return j;
}

Json to_json(const CycleStats& s) {
  Json hist = Json::array(), sites = Json::array();
  for (const auto& [k, v] : s.histogram) hist.push_back({k, v});
  for (const auto& [k, v] : s.site_histogram) sites.push_back({k, v});
  return {{"n_samples", s.n_samples},
          {"n_cycles", s.n_cycles},
          {"n_nontrivial", s.n_nontrivial},
          {"frac_nontrivial", s.frac_nontrivial()},
          {"frac_samples_nontrivial", s.frac_samples_nontrivial()},
          {"max_jump", s.max_jump},
          {"max_diameter", s.max_diameter},
          {"histogram_points", std::move(hist)},
          {"histogram_sites", std::move(sites)}};
}

Json to_json(const MarkSet& m) {
  Json marks = Json::array();
  for (const auto& k : m.marks) marks.push_back({k.cycle, k.birth, k.lifetime});
  return {{"t_lo", m.t_lo}, {"t_hi", m.t_hi}, {"horizon", m.horizon}, {"weights_digest", m.weights_digest},
          {"marks", std::move(marks)}};
}

std::string digest_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::parameter, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::parameter, "cannot parse '" + path + "': " + e.what());
  }
}

}  // namespace srp
