#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace gcv {

/// Malformed scenario file, unknown kind or unreadable input expression.
class ScenarioError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Scenario {
  std::string id;
  std::string kind;
  std::vector<std::string> tags;
  nlohmann::json inputs;
  nlohmann::json expected;
  std::string source;  // file name
};

Scenario parse_scenario(const nlohmann::json& j, const std::string& source = {});
/// Every *.json file in dir, sorted by id. Throws ScenarioError on parse
/// failures and duplicate ids.
std::vector<Scenario> load_scenarios(const std::filesystem::path& dir);

std::vector<std::string> scenario_kinds();

struct RunOptions {
  std::optional<int> budget;  // replaces the pinned search budget
};

enum class Status { pass, fail, error };
std::string to_string(Status s);

struct ScenarioResult {
  std::string id;
  std::string kind;
  std::vector<std::string> tags;
  Status status = Status::error;
  nlohmann::json outcome = nlohmann::json::object();
  std::vector<std::string> mismatches;  // "<path>: expected <e>, got <o>"
  std::string message;                  // error text
  bool parse_error = false;
  std::vector<std::pair<std::string, std::string>> dot;  // file stem, DOT text
};

/// Runs one scenario and compares the outcome with the expected stanza:
/// objects by expected keys, arrays elementwise, printed forms by value.
/// {"$contains": [...]} matches arrays holding a match for each item.
ScenarioResult run_scenario(const Scenario& s, const RunOptions& opts = {});

/// Paths where outcome differs from expected. Strings that print a form,
/// generalized vector or bivector are compared by value, with the expected
/// side read as an expression on the outcome's chart.
std::vector<std::string> compare_outcome(const nlohmann::json& expected, const nlohmann::json& outcome);

nlohmann::json report_json(const std::vector<ScenarioResult>& results);
std::string report_text(const std::vector<ScenarioResult>& results);

/// 0 when every scenario passed, 2 after a parse error, 1 otherwise.
int exit_code(const std::vector<ScenarioResult>& results);

}  // namespace gcv
