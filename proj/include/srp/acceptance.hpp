#pragma once

#include <string>
#include <vector>

#include "srp/serialization.hpp"

namespace srp {

struct Fixture {
  std::string name;
  Instance instance;
};

// Small finite-volume instances with exact tables: d = 1 and 2, 2 to 6
// points, identity and straddling boundaries, alpha in {0.5, 1, 2}.
std::vector<Fixture> acceptance_fixtures();

struct AcceptanceOptions {
  int jobs = 1;
  std::uint64_t seed = 20240611;
  // Birth-rate factor handed to the perfect sampler in the oracle criterion.
  // Anything but 1 is a deliberate fault for negative controls.
  double weight_fault = 1.0;
  // Criteria to run; empty means all.
  std::vector<int> only;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  Json measured;
  double seconds = 0.0;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts);
CriterionResult run_criterion(int id, const AcceptanceOptions& opts);

// {"criteria": [...], "all_pass": bool, "options": {...}}
Json acceptance_report(const std::vector<CriterionResult>& results, const AcceptanceOptions& opts);

// Expected TV distance between an N-sample empirical law and its source
// under the normal approximation: sum sqrt(p(1-p) / (2 pi N)).
double expected_tv_noise(const SpecTable& table, std::size_t n);

}  // namespace srp
