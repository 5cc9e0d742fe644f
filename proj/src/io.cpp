#include "ctxprob/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <cerrno>
#include <optional>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "ctxprob/version.hpp"

namespace ctxprob::io {

using nlohmann::json;

namespace {

std::string join_errors(const std::vector<FieldError>& errors) {
  std::string out;
  for (const auto& e : errors) {
    if (!out.empty()) out += "; ";
    out += e.path + ": " + e.message;
  }
  return out;
}

std::string child(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

// Collects field-addressed errors while walking a scenario document.
class Reader {
 public:
  std::vector<FieldError> errors;

  void fail(std::string path, std::string message) { errors.push_back({std::move(path), std::move(message)}); }

  const json* object(const json& parent, const std::string& key, const std::string& path) {
    const auto p = child(path, key);
    if (!parent.contains(key)) {
      fail(p, "missing section");
      return nullptr;
    }
    const auto& v = parent.at(key);
    if (!v.is_object()) {
      fail(p, "expected an object");
      return nullptr;
    }
    return &v;
  }

  std::optional<double> number(const json& obj, const std::string& key, const std::string& path,
                               std::optional<double> fallback = std::nullopt) {
    const auto p = child(path, key);
    if (!obj.contains(key)) {
      if (fallback) return fallback;
      fail(p, "missing number");
      return std::nullopt;
    }
    const auto& v = obj.at(key);
    if (!v.is_number()) {
      fail(p, "expected a number");
      return std::nullopt;
    }
    return v.get<double>();
  }

  std::optional<std::uint64_t> count(const json& obj, const std::string& key, const std::string& path,
                                     std::optional<std::uint64_t> fallback = std::nullopt) {
    const auto p = child(path, key);
    if (!obj.contains(key)) {
      if (fallback) return fallback;
      fail(p, "missing integer");
      return std::nullopt;
    }
    const auto& v = obj.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
      fail(p, "must be non-negative");
      return std::nullopt;
    }
    fail(p, "expected a non-negative integer");
    return std::nullopt;
  }

  std::optional<std::string> text(const json& obj, const std::string& key, const std::string& path) {
    const auto p = child(path, key);
    if (!obj.contains(key) || !obj.at(key).is_string()) {
      fail(p, "expected a string");
      return std::nullopt;
    }
    return obj.at(key).get<std::string>();
  }

  std::optional<std::vector<double>> numbers(const json& obj, const std::string& key, const std::string& path) {
    const auto p = child(path, key);
    if (!obj.contains(key) || !obj.at(key).is_array()) {
      fail(p, "expected an array of numbers");
      return std::nullopt;
    }
    std::vector<double> out;
    const auto& arr = obj.at(key);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_number()) {
        fail(p + "[" + std::to_string(i) + "]", "expected a number");
        return std::nullopt;
      }
      out.push_back(arr[i].get<double>());
    }
    return out;
  }
};

std::optional<std::vector<double>> read_envelope(Reader& r, const json& node, const std::string& path,
                                                 const std::optional<UniformGrid>& grid) {
  const auto kind = r.text(node, "kind", path);
  if (!kind) return std::nullopt;
  if (*kind == "gaussian") {
    const auto mean = r.number(node, "mean", path);
    const auto sigma = r.number(node, "sigma", path);
    if (sigma && !(*sigma > 0.0)) {
      r.fail(child(path, "sigma"), "must be positive");
      return std::nullopt;
    }
    if (!mean || !sigma || !grid) return std::nullopt;
    try {
      return gaussian_envelope(*grid, *mean, *sigma);
    } catch (const Error& e) {
      r.fail(path, e.what());
      return std::nullopt;
    }
  }
  if (*kind == "uniform") {
    if (!grid) return std::nullopt;
    return uniform_envelope(*grid);
  }
  if (*kind == "table") {
    auto values = r.numbers(node, "values", path);
    if (values && grid && values->size() != grid->bins) {
      r.fail(child(path, "values"), "has " + std::to_string(values->size()) + " entries, grid.bins is " +
                                        std::to_string(grid->bins));
      return std::nullopt;
    }
    return values;
  }
  r.fail(child(path, "kind"), "unknown envelope kind '" + *kind + "' (gaussian, uniform, table)");
  return std::nullopt;
}

std::optional<PhaseModel> read_phase(Reader& r, const json& node, const std::optional<UniformGrid>& grid) {
  const std::string path = "phase";
  const auto kind = r.text(node, "kind", path);
  if (!kind) return std::nullopt;
  if (*kind == "explicit") {
    const auto p = child(path, "values");
    if (node.contains("values") && node.at("values").is_number()) {
      if (!grid) return std::nullopt;
      return ExplicitPhase{std::vector<double>(grid->bins, node.at("values").get<double>())};
    }
    auto values = r.numbers(node, "values", path);
    if (!values) return std::nullopt;
    if (grid && values->size() != grid->bins) {
      r.fail(p, "has " + std::to_string(values->size()) + " entries, grid.bins is " + std::to_string(grid->bins));
      return std::nullopt;
    }
    return ExplicitPhase{std::move(*values)};
  }
  if (*kind == "freewave") {
    const auto p1 = r.number(node, "p1", path);
    const auto p2 = r.number(node, "p2", path);
    const auto h = r.number(node, "h", path, 1.0);
    if (h && !(*h > 0.0)) {
      r.fail(child(path, "h"), "must be positive");
      return std::nullopt;
    }
    if (!p1 || !p2 || !h) return std::nullopt;
    return FreeWavePhase{*p1, *p2, *h};
  }
  r.fail(child(path, "kind"), "unknown phase kind '" + *kind + "' (explicit, freewave)");
  return std::nullopt;
}

void put_optional(json& obj, const char* key, const std::optional<double>& v) {
  obj[key] = v ? json(round_significant(*v)) : json(nullptr);
}

std::string optional_cell(const std::optional<double>& v) { return v ? format_number(*v) : std::string{}; }

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

ParseError::ParseError(std::vector<FieldError> errors) : Error(join_errors(errors)), errors_(std::move(errors)) {}

ParseError::ParseError(std::string path, std::string message)
    : ParseError(std::vector<FieldError>{{std::move(path), std::move(message)}}) {}

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", value);
  return buf;
}

double round_significant(double value) {
  if (!std::isfinite(value)) return value;
  return std::strtod(format_number(value).c_str(), nullptr);
}

ScenarioDocument parse_scenario(const json& doc) {
  Reader r;
  if (!doc.is_object()) throw ParseError("", "scenario document must be a JSON object");

  ScenarioDocument out;
  out.source = doc;
  auto& sc = out.scenario;

  std::optional<UniformGrid> grid;
  if (const auto* g = r.object(doc, "grid", "")) {
    const auto bins = r.count(*g, "bins", "grid");
    const auto x_min = r.number(*g, "x_min", "grid");
    const auto x_max = r.number(*g, "x_max", "grid");
    if (bins && *bins == 0) r.fail("grid.bins", "must be at least 1");
    if (x_min && x_max && !(*x_max > *x_min)) r.fail("grid.x_max", "must exceed grid.x_min");
    if (bins && *bins > 0 && x_min && x_max && *x_max > *x_min) grid = UniformGrid{*bins, *x_min, *x_max};
  }
  if (grid) sc.grid = *grid;

  if (const auto* env = r.object(doc, "envelopes", "")) {
    if (env->contains("kind")) {
      if (auto shared = read_envelope(r, *env, "envelopes", grid)) {
        sc.envelope1 = *shared;
        sc.envelope2 = *shared;
      }
    } else {
      if (const auto* e1 = r.object(*env, "p1", "envelopes"))
        if (auto v = read_envelope(r, *e1, "envelopes.p1", grid)) sc.envelope1 = std::move(*v);
      if (const auto* e2 = r.object(*env, "p2", "envelopes"))
        if (auto v = read_envelope(r, *e2, "envelopes.p2", grid)) sc.envelope2 = std::move(*v);
    }
  }

  if (const auto* ph = r.object(doc, "phase", ""))
    if (auto phase = read_phase(r, *ph, grid)) sc.phase = std::move(*phase);

  if (const auto* s = r.object(doc, "sampling", "")) {
    if (auto n = r.count(*s, "n_emitted", "sampling")) sc.n_emitted = *n;
    if (auto runs = r.count(*s, "runs", "sampling", 1)) {
      if (*runs == 0 || *runs > 0xffffffffULL)
        r.fail("sampling.runs", "must be between 1 and 2^32-1");
      else
        sc.runs = static_cast<std::uint32_t>(*runs);
    }
    if (auto seed = r.count(*s, "seed", "sampling", 0)) sc.seed = *seed;
  }

  if (r.errors.empty()) {
    for (auto& msg : sc.validate()) r.fail("scenario", msg);
  }
  if (!r.errors.empty()) throw ParseError(std::move(r.errors));
  return out;
}

ScenarioDocument parse_scenario_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_scenario(doc);
}

ScenarioDocument load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), "cannot open scenario file");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario_text(buf.str());
  } catch (const ParseError& e) {
    auto errors = e.errors();
    for (auto& fe : errors) fe.path = path.string() + (fe.path.empty() ? "" : ":" + fe.path);
    throw ParseError(std::move(errors));
  }
}

void override_seed(ScenarioDocument& doc, std::uint64_t seed) {
  doc.scenario.seed = seed;
  doc.source["sampling"]["seed"] = seed;
}

void write_pattern_csv(std::ostream& os, const TwoSlitScenario& scenario) {
  const auto pattern = analytic_pattern(scenario);
  os << "x,p1,p2,theta,p_classical,p_interference\n";
  for (std::size_t i = 0; i < scenario.grid.bins; ++i) {
    const double p1 = scenario.envelope1[i];
    const double p2 = scenario.envelope2[i];
    const double classical = total_probability(TwoSlitScenario::kCoefficients, p1, p2);
    os << format_number(scenario.grid.midpoint(i)) << ',' << format_number(p1) << ',' << format_number(p2) << ','
       << format_number(scenario.theta_at(i)) << ',' << format_number(classical) << ','
       << format_number(pattern.raw[i]) << '\n';
  }
}

void write_counts_csv(std::ostream& os, const OutcomeSpace& space, const EnsembleCounts& counts) {
  os << "bin,count\n";
  for (std::size_t i = 0; i < space.size(); ++i) os << space.labels[i] << ',' << counts.counts.at(i) << '\n';
}

CountsTable read_counts_csv(std::istream& is, std::string_view source, std::string context_id) {
  const std::string src(source);
  std::vector<FieldError> errors;
  CountsTable out;
  out.counts.context_id = std::move(context_id);

  std::string line;
  if (!std::getline(is, line) || trim(line) != "bin,count")
    throw ParseError(src + ":1", "expected header 'bin,count'");

  std::unordered_map<std::string, std::size_t> seen;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    const auto where = src + ":" + std::to_string(line_no);
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 2) {
      errors.push_back({where, "expected 2 fields, found " + std::to_string(cells.size())});
      continue;
    }
    const auto label = trim(cells[0]);
    const auto value = trim(cells[1]);
    if (label.empty()) {
      errors.push_back({where, "empty bin label"});
      continue;
    }
    char* end = nullptr;
    errno = 0;
    const unsigned long long count = std::strtoull(value.c_str(), &end, 10);
    if (value.empty() || value.front() == '-' || *end != '\0' || errno == ERANGE) {
      errors.push_back({where, "count '" + value + "' is not a non-negative integer"});
      continue;
    }
    if (!seen.emplace(label, out.space.size()).second) {
      errors.push_back({where, "duplicate bin '" + label + "'"});
      continue;
    }
    out.space.labels.push_back(label);
    out.counts.counts.push_back(count);
  }
  if (out.space.size() == 0 && errors.empty()) errors.push_back({src, "no bins"});
  if (!errors.empty()) throw ParseError(std::move(errors));
  out.counts.total_emitted = out.counts.detected();
  return out;
}

CountsTable load_counts_csv(const std::filesystem::path& path, std::string context_id) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), "cannot open counts file");
  return read_counts_csv(in, path.string(), std::move(context_id));
}

EnsembleCounts align_counts(const CountsTable& table, const OutcomeSpace& space, std::string_view source) {
  const std::string src(source);
  if (table.space.size() != space.size())
    throw ParseError(src, "has " + std::to_string(table.space.size()) + " bins, expected " +
                                std::to_string(space.size()));
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < table.space.size(); ++i) index.emplace(table.space.labels[i], i);
  EnsembleCounts out;
  out.context_id = table.counts.context_id;
  out.total_emitted = table.counts.total_emitted;
  out.counts.reserve(space.size());
  std::vector<FieldError> errors;
  for (const auto& label : space.labels) {
    const auto it = index.find(label);
    if (it == index.end()) {
      errors.push_back({src, "missing bin '" + label + "'"});
      continue;
    }
    out.counts.push_back(table.counts.counts[it->second]);
  }
  if (!errors.empty()) throw ParseError(std::move(errors));
  return out;
}

void write_analysis_csv(std::ostream& os, const EmpiricalAnalysis& a, double n_sigma) {
  os << "bin,p_hat_S,p_hat_1,p_hat_2,delta,lambda,kind,theta,stderr_lambda\n";
  for (std::size_t i = 0; i < a.bins.size(); ++i) {
    const auto& b = a.bins[i];
    const auto& d = b.decomposition;
    const std::string kind = d.kind ? std::string(kind_name(*d.kind)) : "degenerate";
    os << a.space.labels[i] << ',' << format_number(b.p_S) << ',' << format_number(b.p_1) << ','
       << format_number(b.p_2) << ',' << format_number(d.delta) << ',' << optional_cell(d.lambda) << ',' << kind
       << ',' << optional_cell(b.theta) << ',' << optional_cell(b.se_lambda) << '\n';
  }
  const auto alt = alternative_condition_check(a, n_sigma);
  os << "# N=" << a.counts_S.detected() << '\n'
     << "# N1=" << a.counts_S1.detected() << '\n'
     << "# N2=" << a.counts_S2.detected() << '\n'
     << "# c1_hat=" << format_number(a.splitting.coeffs.c1) << '\n'
     << "# c2_hat=" << format_number(a.splitting.coeffs.c2) << '\n'
     << "# alternative_deviation=" << format_number(a.splitting.deviation) << '\n'
     << "# alternative_sigma=" << format_number(alt.deviation) << '\n'
     << "# alternative_pass_" << format_number(n_sigma) << "sigma=" << (alt.pass ? "true" : "false") << '\n'
     << "# violation_statistic=" << format_number(a.violation_statistic) << '\n'
     << "# violation_bin=" << (a.violation_bin ? a.space.labels[*a.violation_bin] : std::string{}) << '\n';
}

json report_to_json(const ExperimentReport& report, const json& scenario_echo, double n_sigma) {
  const auto& a = report.analysis;
  json doc;
  doc["tool"] = {{"name", "ctxprob"}, {"version", kVersion}};
  doc["scenario"] = scenario_echo;
  doc["classification_tol"] = round_significant(a.tol);
  doc["pattern_normalization"] = round_significant(report.pattern_normalization);

  doc["counts"] = json::object();
  for (const auto* c : {&a.counts_S, &a.counts_S1, &a.counts_S2}) {
    doc["counts"][c->context_id] = {{"counts", c->counts},
                                    {"detected", c->detected()},
                                    {"total_emitted", c->total_emitted}};
  }

  json runs = json::array();
  for (const auto& r : report.runs) runs.push_back({{"N", r.detected_S}, {"N1", r.detected_S1}, {"N2", r.detected_S2}});
  doc["runs"] = std::move(runs);

  doc["splitting"] = {{"c1_hat", round_significant(a.splitting.coeffs.c1)},
                      {"c2_hat", round_significant(a.splitting.coeffs.c2)},
                      {"deviation", round_significant(a.splitting.deviation)},
                      {"model_c1", round_significant(a.model_coeffs.c1)},
                      {"model_c2", round_significant(a.model_coeffs.c2)}};
  const auto alt = alternative_condition_check(a, n_sigma);
  doc["alternative_condition"] = {
      {"n_sigma", round_significant(n_sigma)}, {"deviation_sigma", round_significant(alt.deviation)}, {"pass", alt.pass}};
  doc["violation"] = {{"statistic", round_significant(a.violation_statistic)},
                      {"bin", a.violation_bin ? json(a.space.labels[*a.violation_bin]) : json(nullptr)}};

  json bins = json::array();
  for (std::size_t i = 0; i < a.bins.size(); ++i) {
    const auto& b = a.bins[i];
    const auto& d = b.decomposition;
    json row;
    row["bin"] = a.space.labels[i];
    row["p_hat_S"] = round_significant(b.p_S);
    row["p_hat_1"] = round_significant(b.p_1);
    row["p_hat_2"] = round_significant(b.p_2);
    row["se_S"] = round_significant(b.se_S);
    row["se_1"] = round_significant(b.se_1);
    row["se_2"] = round_significant(b.se_2);
    row["classical_part"] = round_significant(d.classical_part);
    row["delta"] = round_significant(d.delta);
    row["se_delta"] = round_significant(b.se_delta);
    put_optional(row, "lambda", d.lambda);
    put_optional(row, "se_lambda", b.se_lambda);
    row["kind"] = d.kind ? std::string(kind_name(*d.kind)) : "degenerate";
    const auto* hyp = d.kind ? std::get_if<Hyperbolic>(&*d.kind) : nullptr;
    row["sign"] = hyp ? json(hyp->sign) : json(nullptr);
    put_optional(row, "theta", b.theta);
    put_optional(row, "se_theta", b.se_theta);
    put_optional(row, "z", b.z_score);
    bins.push_back(std::move(row));
  }
  doc["bins"] = std::move(bins);
  return doc;
}

std::string dump_json(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace ctxprob::io
