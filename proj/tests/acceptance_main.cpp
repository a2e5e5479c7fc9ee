// Acceptance suite: one PASS/FAIL line per criterion, full measurements in
// acceptance_report.json. Exit status is nonzero if any criterion fails.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <thread>

#include "srp/acceptance.hpp"

int main(int argc, char** argv) {
  srp::AcceptanceOptions opts;
  opts.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string report_path = "acceptance_report.json";
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--report" && i + 1 < argc) report_path = argv[++i];
    else if (a == "--jobs" && i + 1 < argc) opts.jobs = std::atoi(argv[++i]);
    else opts.only.push_back(std::atoi(a.c_str()));
  }

  std::vector<srp::CriterionResult> results;
  bool all = true;
  const std::vector<int> ids = opts.only.empty() ? std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10} : opts.only;
  for (int id : ids) {
    auto r = srp::run_criterion(id, opts);
    std::printf("%s criterion %d: %s (%.2fs)\n", r.pass ? "PASS" : "FAIL", r.id, r.title.c_str(), r.seconds);
    if (!r.pass) std::printf("  measured: %s\n", r.measured.dump().c_str());
    std::fflush(stdout);
    all = all && r.pass;
    results.push_back(std::move(r));
  }
  std::ofstream(report_path) << srp::acceptance_report(results, opts).dump(2) << "\n";
  std::printf("%s\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return all ? 0 : 1;
}
