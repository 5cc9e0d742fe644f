// ctxprob: two-slit contextual probability experiments from the command line.
//
//   ctxprob pattern  <scenario.json> [--out pattern.csv]
//   ctxprob simulate <scenario.json> --out report.json [--counts-prefix dir/run_]
//   ctxprob analyze  <S.csv> <S1.csv> <S2.csv> [--out analysis.csv]
//
// Exit codes: 0 success, 2 input error, 3 runtime or statistical error.
// Relative output paths resolve against $CTXPROB_OUTPUT_DIR when it is set.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ctxprob/errors.hpp"
#include "ctxprob/io.hpp"
#include "ctxprob/version.hpp"

namespace fs = std::filesystem;
using namespace ctxprob;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitRuntime = 3;

std::optional<fs::path> output_dir() {
  if (const char* dir = std::getenv("CTXPROB_OUTPUT_DIR"); dir && *dir) return fs::path(dir);
  return std::nullopt;
}

fs::path resolve_output(const std::string& requested) {
  fs::path p(requested);
  if (p.is_relative()) {
    if (auto dir = output_dir()) return *dir / p;
  }
  return p;
}

void write_text(const std::optional<std::string>& out, const std::string& text) {
  if (!out) {
    std::cout << text;
    return;
  }
  const auto path = resolve_output(*out);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

struct Globals {
  std::optional<std::uint64_t> seed;
  double tol = kDefaultClassifyTol;
  unsigned threads = 0;
  double n_sigma = 5.0;
};

int run_pattern(const Globals& g, const std::string& scenario_path, const std::optional<std::string>& out) {
  auto doc = io::load_scenario(scenario_path);
  if (g.seed) io::override_seed(doc, *g.seed);
  std::ostringstream os;
  io::write_pattern_csv(os, doc.scenario);
  write_text(out, os.str());
  return 0;
}

int run_simulate(const Globals& g, const std::string& scenario_path, std::optional<std::string> out,
                 const std::optional<std::string>& counts_prefix) {
  auto doc = io::load_scenario(scenario_path);
  if (g.seed) io::override_seed(doc, *g.seed);
  if (!out && output_dir()) out = "report.json";
  if (!out) throw io::ParseError("--out", "no output path given and CTXPROB_OUTPUT_DIR is unset");

  ExperimentReport report;
  try {
    report = run_experiment(doc.scenario, g.tol, SimulationOptions{0.5, g.threads});
  } catch (const Error& e) {
    std::cerr << "ctxprob simulate: " << e.what() << '\n';
    return kExitRuntime;
  }
  write_text(out, io::dump_json(io::report_to_json(report, doc.source, g.n_sigma)));

  if (counts_prefix) {
    const auto& a = report.analysis;
    for (const auto* c : {&a.counts_S, &a.counts_S1, &a.counts_S2}) {
      std::ostringstream os;
      io::write_counts_csv(os, a.space, *c);
      write_text(*counts_prefix + c->context_id + ".csv", os.str());
    }
  }
  return 0;
}

int run_analyze(const Globals& g, const std::string& s_path, const std::string& s1_path, const std::string& s2_path,
                const std::optional<std::string>& out) {
  const auto table_S = io::load_counts_csv(s_path, "S");
  const auto table_S1 = io::load_counts_csv(s1_path, "S1");
  const auto table_S2 = io::load_counts_csv(s2_path, "S2");
  const auto counts_S1 = io::align_counts(table_S1, table_S.space, s1_path);
  const auto counts_S2 = io::align_counts(table_S2, table_S.space, s2_path);

  std::ostringstream os;
  try {
    const auto analysis = analyze_counts(table_S.space, table_S.counts, counts_S1, counts_S2, g.tol);
    io::write_analysis_csv(os, analysis, g.n_sigma);
  } catch (const Error& e) {
    std::cerr << "ctxprob analyze: " << e.what() << '\n';
    return kExitRuntime;
  }
  write_text(out, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contextual probability and two-slit interference tool"};
  app.set_version_flag("--version", std::string("ctxprob ") + kVersion);
  app.require_subcommand(1);

  Globals g;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Override the scenario's sampling seed");
  app.add_option("--tol", g.tol, "Classification tolerance around |lambda| = 1")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads for simulation (0 = all cores)")->capture_default_str();
  app.add_option("--n-sigma", g.n_sigma, "Threshold for the alternative-condition check")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::string scenario_path;
  std::optional<std::string> out;
  std::optional<std::string> counts_prefix;
  std::string s_path, s1_path, s2_path;

  auto* pattern = app.add_subcommand("pattern", "Print the analytic screen pattern as CSV");
  pattern->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  pattern->add_option("--out", out, "Output CSV path (default: stdout)");

  auto* simulate = app.add_subcommand("simulate", "Run the Monte Carlo experiment and write a JSON report");
  simulate->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  simulate->add_option("--out", out, "Report path");
  simulate->add_option("--counts-prefix", counts_prefix, "Also write <prefix>S.csv, <prefix>S1.csv, <prefix>S2.csv");

  auto* analyze = app.add_subcommand("analyze", "Decompose external bin counts from three contexts");
  analyze->add_option("S", s_path, "Counts with both slits open (bin,count)")->required();
  analyze->add_option("S1", s1_path, "Counts with slit 1 open")->required();
  analyze->add_option("S2", s2_path, "Counts with slit 2 open")->required();
  analyze->add_option("--out", out, "Output CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }
  if (*seed_opt) g.seed = seed;

  try {
    if (*pattern) return run_pattern(g, scenario_path, out);
    if (*simulate) return run_simulate(g, scenario_path, out, counts_prefix);
    if (*analyze) return run_analyze(g, s_path, s1_path, s2_path, out);
  } catch (const io::ParseError& e) {
    std::cerr << "ctxprob: input error\n";
    for (const auto& fe : e.errors()) std::cerr << "  " << fe.path << ": " << fe.message << '\n';
    return kExitInput;
  } catch (const Error& e) {
    std::cerr << "ctxprob: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "ctxprob: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
