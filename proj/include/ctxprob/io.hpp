#pragma once

// File formats: scenario documents (JSON), pattern/counts/analysis tables
// (CSV) and experiment reports (JSON). Every real number is rendered with
// 15 significant digits, so decimal text survives parse -> print unchanged.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ctxprob/errors.hpp"
#include "ctxprob/twoslit.hpp"

namespace ctxprob::io {

struct FieldError {
  std::string path;  // e.g. "grid.bins", "envelopes.p1.sigma"
  std::string message;
};

/// Input could not be turned into a valid value; carries every problem found.
class ParseError : public Error {
 public:
  explicit ParseError(std::vector<FieldError> errors);
  ParseError(std::string path, std::string message);
  const std::vector<FieldError>& errors() const noexcept { return errors_; }

 private:
  std::vector<FieldError> errors_;
};

std::string format_number(double value);
double round_significant(double value);

struct ScenarioDocument {
  TwoSlitScenario scenario;
  nlohmann::json source;  // the parsed document, echoed into reports
};

ScenarioDocument parse_scenario(const nlohmann::json& doc);
ScenarioDocument parse_scenario_text(std::string_view text);
/// Missing or unreadable files are reported as a ParseError naming the path.
ScenarioDocument load_scenario(const std::filesystem::path& path);

/// Overrides the sampling seed in both the scenario and its echo.
void override_seed(ScenarioDocument& doc, std::uint64_t seed);

/// Header x,p1,p2,theta,p_classical,p_interference; one row per bin.
void write_pattern_csv(std::ostream& os, const TwoSlitScenario& scenario);

void write_counts_csv(std::ostream& os, const OutcomeSpace& space, const EnsembleCounts& counts);

struct CountsTable {
  OutcomeSpace space;
  EnsembleCounts counts;
};

/// Reads a `bin,count` table. `source` names the input in error messages.
CountsTable read_counts_csv(std::istream& is, std::string_view source, std::string context_id);
CountsTable load_counts_csv(const std::filesystem::path& path, std::string context_id);

/// Reorders `table` onto `space`; throws ParseError when the label sets differ.
EnsembleCounts align_counts(const CountsTable& table, const OutcomeSpace& space, std::string_view source);

/// Per-bin decomposition table followed by `# key=value` summary lines.
void write_analysis_csv(std::ostream& os, const EmpiricalAnalysis& analysis, double n_sigma = 5.0);

nlohmann::json report_to_json(const ExperimentReport& report, const nlohmann::json& scenario_echo,
                              double n_sigma = 5.0);

/// Canonical text form: two-space indentation, sorted keys, trailing newline.
std::string dump_json(const nlohmann::json& doc);

}  // namespace ctxprob::io
