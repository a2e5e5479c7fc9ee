#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <utility>
#include <vector>

#include "srp/exactgibbs.hpp"

namespace srp {

using GasPair = std::pair<GasConfig, GasConfig>;

struct KfResult {
  bool holds = true;
  std::vector<std::pair<Site, Cycle>> violations;
};

// Every cycle of eta through a site x of region has H <= f(x).
KfResult kf_event(const GasConfig& eta, const std::function<double(const Site&)>& f, const Potential& v,
                  const Box& region);

// Every cycle of either gas lies wholly inside or wholly outside delta.
bool separates(const GasPair& pair, const std::set<Site>& delta);
bool separates(const GasPair& pair, const Box& delta);

enum class SeparationStatus {
  found,
  // No box between [-n,n]^d and the search box separates the pair.
  no_box,
  // The smallest separating box would leave the search box and some cycle
  // already does; a larger search box may succeed.
  inconclusive,
};

struct SeparationResult {
  SeparationStatus status = SeparationStatus::no_box;
  std::optional<Box> delta;
};

// Grows [-n,n]^d by bounding-box hulls of straddling cycles. The fixpoint
// is contained in every separating box that contains [-n,n]^d.
SeparationResult separating_set_search(const GasPair& pair, int n, const Box& search_box);

// n distinct open non-trivial cycles g_1..g_n, consecutive ones sharing a
// site, with x0 a site of g_1. Open means present in either gas.
bool open_path_D(const GasPair& pair, const Site& x0, int n);

struct CycleStats {
  std::map<std::size_t, std::uint64_t> histogram;       // length in points
  std::map<std::size_t, std::uint64_t> site_histogram;  // length in distinct sites
  double max_jump = 0.0;
  double max_diameter = 0.0;  // largest site distance within one cycle
  std::uint64_t n_cycles = 0;
  std::uint64_t n_nontrivial = 0;
  std::uint64_t n_samples = 0;
  std::uint64_t samples_with_nontrivial = 0;

  double frac_nontrivial() const;
  double frac_samples_nontrivial() const;

  void add(const GasConfig& eta);
  void merge(const CycleStats& other);
};

CycleStats cycle_stats(const std::vector<GasConfig>& samples);

// "length,count" rows in increasing length, header included.
void write_histogram_csv(std::ostream& out, const CycleStats& stats);

// Half the L1 distance. Mass on a state outside the table is a contract
// error.
double tv_distance(const std::map<GasConfig, std::uint64_t>& empirical, const SpecTable& exact);

}  // namespace srp
