#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "srp/exactgibbs.hpp"

namespace srp {

// Indexed cycle space for the birth-and-death dynamics. Cycle k has support
// mask masks[k] over the points of the volume and birth rate weights[k].
struct NetworkModel {
  std::vector<std::uint64_t> masks;
  std::vector<double> weights;
  std::vector<double> cumulative;
  double total_weight = 0.0;
  // Points of the volume used by the boundary cycles.
  std::uint64_t boundary_mask = 0;

  std::size_t size() const noexcept { return masks.size(); }
  bool incompatible(std::size_t a, std::size_t b) const noexcept { return (masks[a] & masks[b]) != 0; }
  // Incompatible with some boundary cycle.
  bool blocked(std::size_t k) const noexcept { return (masks[k] & boundary_mask) != 0; }
};

NetworkModel make_model(const Instance& inst, double weight_scale = 1.0);
NetworkModel make_model(std::vector<std::uint64_t> masks, std::vector<double> weights,
                        std::uint64_t boundary_mask = 0);

struct Mark {
  std::uint32_t cycle = 0;
  double birth = 0.0;
  double lifetime = 0.0;

  double death() const noexcept { return birth + lifetime; }
  bool alive(double t) const noexcept { return birth <= t && t < death(); }
};

// Marks sorted by (birth, cycle). Every mark of the underlying Poisson
// process with death after `horizon` is present, so the free process is
// fully known on (horizon, t_hi].
struct MarkSet {
  double t_lo = 0.0;
  double t_hi = 0.0;
  double horizon = 0.0;
  std::vector<Mark> marks;
  std::uint64_t weights_digest = 0;
  double max_lifetime = 0.0;

  std::size_t size() const noexcept { return marks.size(); }
  // Sorts by (birth, cycle) and refreshes max_lifetime. Call after editing
  // marks by hand.
  void normalize();
};

std::uint64_t weights_digest(const NetworkModel& model);

// Independent Poisson(w) counts per cycle, plus one for each cycle listed in
// boundary.
std::map<Cycle, std::uint64_t> nu_sample(const std::vector<std::pair<Cycle, double>>& gammas,
                                         const std::vector<Cycle>& boundary, std::uint64_t seed);
// Counts of the cycles of the model (boundary cycles are not part of it).
std::vector<std::uint64_t> nu_counts(const NetworkModel& model, std::uint64_t seed);

// Free process started empty at t_lo: births at rate W on [t_lo, t_hi],
// cycle chosen proportionally to weight, Exp(1) lifetimes.
MarkSet generate_marks(const NetworkModel& model, double t_lo, double t_hi, std::uint64_t seed);

// Stationary free process on (-T0 2^k, 0], generated backwards in death time
// in stages. Stage 0 holds the marks alive at 0 and the deaths in (-T0, 0];
// stage j >= 1 holds the deaths in (-T0 2^j, -T0 2^(j-1)]. Each stage draws
// from its own derived stream, so extending the window leaves earlier marks
// bitwise unchanged.
class StationaryMarks {
public:
  StationaryMarks(const NetworkModel& model, std::uint64_t seed);

  double initial_length() const noexcept { return t0_; }
  int stages() const noexcept { return stages_; }
  // Generates the next stage and doubles the window.
  void extend();
  const MarkSet& marks() const noexcept { return set_; }

private:
  const NetworkModel* model_;
  std::uint64_t seed_;
  double t0_;
  int stages_ = 0;
  MarkSet set_;
};

// First-generation ancestors of a (possibly virtual) mark of the given cycle
// born at time t: earlier marks of incompatible cycles alive at t. The index
// `self` is excluded.
std::vector<std::size_t> first_generation(const MarkSet& marks, const NetworkModel& model, std::size_t cycle,
                                          double t, std::size_t self = SIZE_MAX);

// Clan of ancestors of mark index zeta: transitive closure of first
// generations. Throws window_too_small when a member is born before the
// horizon.
std::vector<std::size_t> clan(std::size_t zeta, const MarkSet& marks, const NetworkModel& model);
// Clan of a virtual mark (cycle, t) not in the set.
std::vector<std::size_t> clan(std::size_t cycle, double t, const MarkSet& marks, const NetworkModel& model);

struct ThinningResult {
  std::vector<std::size_t> kept;
  std::vector<std::size_t> deleted;
  // Clan depth from the query marks, which have generation 0.
  std::map<std::size_t, int> generations;

  bool is_kept(std::size_t i) const;
};

// Kept/deleted classification of every mark alive at query_time and of
// their clans. A mark is deleted when it is incompatible with a boundary
// cycle and otherwise kept iff all of its first-generation ancestors are
// deleted; marks are processed in birth order.
ThinningResult thin(const MarkSet& marks, const NetworkModel& model, double query_time);
// Classification of every mark in the set.
ThinningResult thin_all(const MarkSet& marks, const NetworkModel& model);
// Same classification as thin_all by the alternating fixed-point iteration
// K_n = {z not in D_0 : A_1(z) subset of D_(n-1)}, D_n = D_0 u {z : A_1(z)
// meets K_n}, run to stabilization. Regression oracle for the birth-order
// recursion.
ThinningResult thin_fixed_point(const MarkSet& marks, const NetworkModel& model);

// Mark indices alive at t.
std::vector<std::size_t> alive_at(const MarkSet& marks, double t);
// Free-process state at t: live copies per cycle index.
std::vector<std::uint64_t> free_counts(const MarkSet& marks, std::size_t n_cycles, double t);

// Latest instant in (horizon, t] at which no mark is alive, if the window
// contains one.
std::optional<double> latest_empty_instant(const MarkSet& marks, double t);

enum class StoppingRule {
  // Stop once the free process has an empty instant in the window. Every clan
  // of a mark alive at 0 then lies after that instant.
  empty_instant,
  // Stop as soon as the clans of the marks alive at 0 close.
  clan_closure,
};

struct SampleOptions {
  int max_doublings = 10;
  int min_doublings = 0;
  StoppingRule rule = StoppingRule::empty_instant;
  // Fault injection for negative controls: birth rates are multiplied by
  // this factor.
  double weight_scale = 1.0;
  bool keep_marks = false;
};

struct SampleResult {
  GasConfig sample;
  double t_final = 0.0;
  std::size_t n_marks = 0;
  int doublings = 0;
  std::optional<MarkSet> marks;
};

SampleResult perfect_sample(const Instance& inst, std::uint64_t seed, const SampleOptions& opts = {});
SampleResult perfect_sample(const Environment& env, const Box& lam, const BoundarySpec& xi, double alpha,
                            const Potential& v, std::uint64_t seed, std::size_t max_points = kDefaultMaxPoints);

struct CoupledResult {
  GasConfig xi_sample;
  GasConfig id_sample;
  // Free-process states at time 0 as cycle counts (boundary cycles included
  // for the xi coordinate).
  std::map<Cycle, std::uint64_t> xi_free;
  std::map<Cycle, std::uint64_t> id_free;
  double t_final = 0.0;
  std::size_t n_marks = 0;
};

// Both loss networks driven by one mark set. Throws a contract error if the
// free-process counts ever differ by anything other than the boundary
// cycles, or if a kept cycle is missing from its free process.
CoupledResult coupled_pair(const Instance& inst, std::uint64_t seed, const SampleOptions& opts = {});

}  // namespace srp
