// srp: batch front end for the finite-volume permutation gas.
//
//   srp regime     regime report; exit 0 iff the uniqueness condition holds
//   srp gen-env    sample a Poisson environment
//   srp sample     perfect samples as JSON lines
//   srp exact-dist exact Gibbs table
//   srp stats      cycle statistics of perfect samples or a JSON-lines file
//   srp verify     acceptance suite report
//
// Settings come from flags, a flat key=value file (--config), and SRP_*
// environment variables, in that order of precedence.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "srp/acceptance.hpp"
#include "srp/errors.hpp"
#include "srp/parallel.hpp"
#include "srp/rng.hpp"
#include "srp/serialization.hpp"

namespace {

using namespace srp;

struct RunConfig {
  std::size_t dim = 1;
  std::string box = "0:8";
  std::string lambda;  // empty: the environment box
  double rho = 0.25;
  double alpha = 1.0;
  std::string potential = "quadratic";
  std::string potential_table;
  std::string boundary = "identity";
  std::string env;  // environment JSON; empty: sample one
  std::uint64_t env_seed = 1;
  std::uint64_t seed = 1;
  std::size_t n_samples = 1;
  std::size_t max_points = kDefaultMaxPoints;
  int max_window_doublings = 10;
  std::string stopping_rule = "empty_instant";
  bool closed_bound = false;
  std::string good_density;
  double varphi_tol = 1e-12;
  bool dump_marks = false;
  std::string input;
  bool compare_exact = false;
  std::string histogram;
  double fault = 1.0;
  std::vector<int> criteria;
  std::string output = "-";
  std::string meta;
  int jobs = 1;
};

// Keys that only affect where output goes or how fast it is produced.
const std::set<std::string> kPlumbing{"output", "meta", "histogram", "jobs"};

Json config_json(const RunConfig& c) {
  return {{"dim", c.dim},
          {"box", c.box},
          {"lambda", c.lambda},
          {"rho", c.rho},
          {"alpha", c.alpha},
          {"potential", c.potential},
          {"potential_table", c.potential_table},
          {"boundary", c.boundary},
          {"env", c.env},
          {"env_seed", c.env_seed},
          {"seed", c.seed},
          {"n_samples", c.n_samples},
          {"max_points", c.max_points},
          {"max_window_doublings", c.max_window_doublings},
          {"stopping_rule", c.stopping_rule},
          {"closed_bound", c.closed_bound},
          {"good_density", c.good_density},
          {"varphi_tol", c.varphi_tol},
          {"dump_marks", c.dump_marks},
          {"input", c.input},
          {"compare_exact", c.compare_exact},
          {"histogram", c.histogram},
          {"fault", c.fault},
          {"criteria", c.criteria},
          {"output", c.output},
          {"meta", c.meta},
          {"jobs", c.jobs}};
}

std::string config_digest(const RunConfig& c) {
  Json j = config_json(c);
  for (const auto& k : kPlumbing) j.erase(k);
  return digest_hex(j.dump());
}

Json metadata(const std::string& command, const RunConfig& c) {
  return {{"command", command}, {"config", config_json(c)}, {"config_digest", config_digest(c)}, {"seed", c.seed}};
}

void validate(const RunConfig& c) {
  auto fail = [](const std::string& m) { throw Error(ErrorKind::parameter, m); };
  if (c.dim < 1 || c.dim > kMaxDim) fail("dim must lie in 1.." + std::to_string(kMaxDim));
  if (!(c.alpha > 0.0)) fail("alpha must be positive");
  if (!(c.rho > 0.0) || !(c.rho < 1.0)) fail("rho must lie in (0,1)");
  if (c.max_window_doublings < 0) fail("max_window_doublings must be nonnegative");
  if (c.stopping_rule != "empty_instant" && c.stopping_rule != "clan_closure")
    fail("stopping_rule must be empty_instant or clan_closure");
  if (c.potential != "quadratic" && c.potential != "continuum_comparison" && c.potential != "table")
    fail("potential must be quadratic, continuum_comparison or table");
  if (c.potential == "table" && c.potential_table.empty()) fail("potential=table needs potential_table");
  if (!(c.fault > 0.0)) fail("fault must be positive");
  if (c.jobs < 1) fail("jobs must be at least 1");
  if (!c.good_density.empty()) parse_good_density(c.good_density);
  if (c.env.empty() && parse_box(c.box).dim() != c.dim) fail("box dimension differs from dim");
  if (!c.lambda.empty() && parse_box(c.lambda).dim() != c.dim) fail("lambda dimension differs from dim");
}

Potential make_potential(const RunConfig& c) {
  if (c.potential == "quadratic") return Potential::quadratic(c.dim);
  if (c.potential == "continuum_comparison") return Potential::continuum_comparison(c.dim);
  return Potential::load_radial_table(c.dim, c.potential_table);
}

Environment make_environment(const RunConfig& c) {
  if (!c.env.empty()) {
    Environment e = environment_from_json(read_json_file(c.env));
    if (e.dim() != c.dim) throw Error(ErrorKind::parameter, "environment dimension differs from dim");
    return e;
  }
  return sample_environment(c.dim, parse_box(c.box), c.rho, c.env_seed);
}

Box make_lambda(const RunConfig& c, const Environment& env) {
  return c.lambda.empty() ? env.box() : parse_box(c.lambda);
}

BoundarySpec make_boundary(const RunConfig& c, const Environment& env) {
  if (c.boundary == "identity") return BoundarySpec::identity();
  const GasConfig g = gas_from_json(read_json_file(c.boundary));
  check_points(g, env);
  return BoundarySpec::from_cycles(g.cycles());
}

SampleOptions sample_options(const RunConfig& c) {
  SampleOptions o;
  o.max_doublings = c.max_window_doublings;
  o.rule = c.stopping_rule == "clan_closure" ? StoppingRule::clan_closure : StoppingRule::empty_instant;
  o.keep_marks = c.dump_marks;
  return o;
}

class Output {
public:
  explicit Output(const std::string& path) {
    if (path != "-") {
      file_.open(path);
      if (!file_) throw Error(ErrorKind::parameter, "cannot write '" + path + "'");
    }
  }
  std::ostream& operator*() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
  std::ofstream file_;
};

void write_meta(const std::string& command, const RunConfig& c) {
  std::string path = c.meta;
  if (path.empty() && c.output != "-") path = c.output + ".meta.json";
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::parameter, "cannot write '" + path + "'");
  out << metadata(command, c).dump(2) << "\n";
}

int cmd_regime(const RunConfig& c) {
  RegimeOptions o;
  o.closed_bound = c.closed_bound;
  o.varphi_tol = c.varphi_tol;
  if (!c.good_density.empty()) o.good_density_override = parse_good_density(c.good_density);
  const RegimeReport r = regime_report(c.rho, c.alpha, make_potential(c), o);
  Json j = to_json(r);
  j["metadata"] = metadata("regime", c);
  Output out(c.output);
  *out << j.dump(2) << "\n";
  return r.uniqueness_ok ? 0 : 1;
}

int cmd_gen_env(const RunConfig& c) {
  Json j = to_json(sample_environment(c.dim, parse_box(c.box), c.rho, c.env_seed));
  j["metadata"] = metadata("gen-env", c);
  Output out(c.output);
  *out << j.dump() << "\n";
  return 0;
}

Instance make_run_instance(const RunConfig& c) {
  const Environment env = make_environment(c);
  return make_instance(env, make_lambda(c, env), make_boundary(c, env), c.alpha, make_potential(c), c.max_points);
}

int cmd_sample(const RunConfig& c) {
  const Instance inst = make_run_instance(c);
  const SampleOptions so = sample_options(c);
  const std::string digest = config_digest(c);
  using Lines = std::vector<std::string>;
  const Lines lines = parallel_reduce(
      c.n_samples, c.jobs, Lines{},
      [&](std::size_t lo, std::size_t hi) {
        Lines out;
        for (std::size_t i = lo; i < hi; ++i) {
          const std::uint64_t s = derive_seed(c.seed, i);
          const SampleResult r = perfect_sample(inst, s, so);
          Json j = {{"index", i},         {"seed", s},           {"T_final", r.t_final},
                    {"n_marks", r.n_marks}, {"sample", to_json(r.sample)}, {"config_digest", digest}};
          if (r.marks) j["marks"] = to_json(*r.marks);
          out.push_back(j.dump());
        }
        return out;
      },
      [](Lines& acc, Lines part) { acc.insert(acc.end(), part.begin(), part.end()); });
  Output out(c.output);
  for (const auto& l : lines) *out << l << "\n";
  write_meta("sample", c);
  return 0;
}

int cmd_exact_dist(const RunConfig& c) {
  const Instance inst = make_run_instance(c);
  Json j = to_json(specification(inst));
  j["metadata"] = metadata("exact-dist", c);
  Output out(c.output);
  *out << j.dump(2) << "\n";
  return 0;
}

int cmd_stats(const RunConfig& c) {
  std::vector<GasConfig> samples;
  std::optional<Instance> inst;
  if (!c.input.empty()) {
    std::ifstream in(c.input);
    if (!in) throw Error(ErrorKind::parameter, "cannot open '" + c.input + "'");
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      Json j;
      try {
        j = Json::parse(line);
      } catch (const Json::exception& e) {
        throw Error(ErrorKind::parameter, std::string("bad JSON line in input: ") + e.what());
      }
      samples.push_back(gas_from_json(j.contains("sample") ? j.at("sample") : j));
    }
  } else {
    inst = make_run_instance(c);
    const SampleOptions so = sample_options(c);
    samples = parallel_reduce(
        c.n_samples, c.jobs, std::vector<GasConfig>{},
        [&](std::size_t lo, std::size_t hi) {
          std::vector<GasConfig> out;
          for (std::size_t i = lo; i < hi; ++i) out.push_back(perfect_sample(*inst, derive_seed(c.seed, i), so).sample);
          return out;
        },
        [](auto& acc, auto part) { acc.insert(acc.end(), part.begin(), part.end()); });
  }
  const CycleStats stats = cycle_stats(samples);
  Json j = to_json(stats);
  if (c.compare_exact) {
    if (!inst) inst = make_run_instance(c);
    const SpecTable table = specification(*inst);
    std::map<GasConfig, std::uint64_t> counts;
    for (const auto& g : samples) ++counts[g];
    j["tv_distance"] = tv_distance(counts, table);
    j["tv_expected_noise"] = expected_tv_noise(table, samples.size());
  }
  j["metadata"] = metadata("stats", c);
  Output out(c.output);
  *out << j.dump(2) << "\n";
  if (!c.histogram.empty()) {
    std::ofstream csv(c.histogram);
    if (!csv) throw Error(ErrorKind::parameter, "cannot write '" + c.histogram + "'");
    write_histogram_csv(csv, stats);
  }
  return 0;
}

int cmd_verify(const RunConfig& c) {
  AcceptanceOptions o;
  o.jobs = c.jobs;
  o.seed = c.seed;
  o.weight_fault = c.fault;
  o.only = c.criteria;
  std::vector<CriterionResult> results;
  const std::vector<int> ids = o.only.empty() ? std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10} : o.only;
  for (int id : ids) {
    results.push_back(run_criterion(id, o));
    const auto& r = results.back();
    std::fprintf(stderr, "%s criterion %d: %s\n", r.pass ? "PASS" : "FAIL", r.id, r.title.c_str());
  }
  Json j = acceptance_report(results, o);
  j["metadata"] = metadata("verify", c);
  Output out(c.output);
  *out << j.dump(2) << "\n";
  return j.at("all_pass").get<bool>() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatial random permutations on a Poisson lattice: exact and perfect sampling"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat key=value configuration file");
  app.allow_config_extras(CLI::config_extras_mode::error);

  RunConfig c;
  auto opt = [&](const std::string& key, auto& target, const std::string& help) {
    std::string env = "SRP_" + key;
    std::transform(env.begin(), env.end(), env.begin(), [](unsigned char ch) { return std::toupper(ch); });
    return app.add_option("--" + key, target, help)->envname(env)->capture_default_str();
  };
  opt("dim", c.dim, "Lattice dimension");
  opt("box", c.box, "Environment box, e.g. 0:8 or 0:3,0:3");
  opt("lambda", c.lambda, "Volume (defaults to the environment box)");
  opt("rho", c.rho, "Poisson density");
  opt("alpha", c.alpha, "Inverse temperature");
  opt("potential", c.potential, "quadratic | continuum_comparison | table");
  opt("potential_table", c.potential_table, "Radial table file for potential=table");
  opt("boundary", c.boundary, "identity or a JSON file holding the boundary gas");
  opt("env", c.env, "Environment JSON (as written by gen-env); sampled if empty");
  opt("env_seed", c.env_seed, "Seed for sampled environments");
  opt("seed", c.seed, "Base seed; replica i uses a seed derived from (seed, i)");
  opt("n_samples", c.n_samples, "Number of samples");
  opt("max_points", c.max_points, "Cap on the points in the volume");
  opt("max_window_doublings", c.max_window_doublings, "Cap on window doublings");
  opt("stopping_rule", c.stopping_rule, "empty_instant | clan_closure");
  app.add_flag("--closed_bound", c.closed_bound, "Use the closed quadratic bound for phi")->envname("SRP_CLOSED_BOUND");
  opt("good_density", c.good_density, "Override: good | not_good | unknown");
  opt("varphi_tol", c.varphi_tol, "Tail tolerance for phi");
  app.add_flag("--dump_marks", c.dump_marks, "Attach the mark set to each sample")->envname("SRP_DUMP_MARKS");
  opt("input", c.input, "JSON-lines samples for stats");
  app.add_flag("--compare_exact", c.compare_exact, "stats: TV distance to the exact table")
      ->envname("SRP_COMPARE_EXACT");
  opt("histogram", c.histogram, "stats: cycle length histogram CSV path");
  opt("fault", c.fault, "verify: birth-rate factor for the oracle criterion (negative control)");
  opt("criteria", c.criteria, "verify: criteria to run");
  opt("output", c.output, "Output path, - for stdout");
  opt("meta", c.meta, "Metadata path (defaults to <output>.meta.json)");
  opt("jobs", c.jobs, "Worker threads; results do not depend on it");

  const std::map<std::string, int (*)(const RunConfig&)> commands{
      {"regime", cmd_regime}, {"gen-env", cmd_gen_env}, {"sample", cmd_sample},
      {"exact-dist", cmd_exact_dist}, {"stats", cmd_stats}, {"verify", cmd_verify}};
  const std::map<std::string, std::string> help{
      {"regime", "Regime report; exit 0 iff uniqueness holds"},
      {"gen-env", "Sample a Poisson environment"},
      {"sample", "Perfect samples as JSON lines"},
      {"exact-dist", "Exact Gibbs table"},
      {"stats", "Cycle statistics"},
      {"verify", "Run the acceptance suite"}};
  for (const auto& [name, fn] : commands) app.add_subcommand(name, help.at(name))->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    validate(c);
    return commands.at(app.get_subcommands().front()->get_name())(c);
  } catch (const Error& e) {
    std::fprintf(stderr, "error (%s): %s\n", to_string(e.kind()), e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 5;
  }
}
