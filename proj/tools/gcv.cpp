#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "gcv/scenario.hpp"

#ifndef GCV_SCENARIO_DIR
#define GCV_SCENARIO_DIR "scenarios"
#endif

namespace {

int run(const std::vector<gcv::Scenario>& corpus, const std::vector<std::string>& selector, bool as_json,
        const std::string& dot_dir, const gcv::RunOptions& opts) {
  std::map<std::string, const gcv::Scenario*> by_id;
  for (const auto& s : corpus) by_id[s.id] = &s;

  std::vector<const gcv::Scenario*> chosen;
  bool all = selector.empty() || (selector.size() == 1 && selector[0] == "all");
  if (all) {
    for (const auto& s : corpus) chosen.push_back(&s);
  } else {
    for (const auto& id : selector) {
      auto it = by_id.find(id);
      if (it == by_id.end()) {
        std::cerr << "gcv: unknown scenario '" << id << "'\n";
        return 2;
      }
      chosen.push_back(it->second);
    }
    std::sort(chosen.begin(), chosen.end(), [](auto* a, auto* b) { return a->id < b->id; });
    chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
  }

  std::vector<gcv::ScenarioResult> results;
  for (const auto* s : chosen) results.push_back(gcv::run_scenario(*s, opts));

  if (!dot_dir.empty()) {
    std::filesystem::create_directories(dot_dir);
    for (const auto& r : results) {
      for (const auto& [stem, text] : r.dot) std::ofstream(std::filesystem::path(dot_dir) / (stem + ".dot")) << text;
    }
  }

  if (as_json) {
    std::cout << gcv::report_json(results).dump(2) << "\n";
  } else {
    std::cout << gcv::report_text(results);
  }
  return gcv::exit_code(results);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scenario runner for generalized complex structure computations"};
  std::string dir = GCV_SCENARIO_DIR;
  bool list = false;
  app.add_option("--scenarios", dir, "Scenario directory");
  app.add_flag("--list", list, "List scenario ids and exit");

  auto* run_cmd = app.add_subcommand("run", "Run scenarios: all, or a list of ids");
  std::vector<std::string> selector;
  bool as_json = false;
  std::string dot_dir;
  int budget = -1;
  run_cmd->add_option("ids", selector, "Scenario ids, or all");
  run_cmd->add_flag("--json", as_json, "Emit the JSON report");
  run_cmd->add_option("--emit-dot", dot_dir, "Write fibration base diagrams to this directory");
  run_cmd->add_option("--budget", budget, "Override the pinned Hurwitz search budget")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::vector<gcv::Scenario> corpus;
  try {
    corpus = gcv::load_scenarios(dir);
  } catch (const gcv::ScenarioError& e) {
    std::cerr << "gcv: " << e.what() << "\n";
    return 2;
  }

  if (list) {
    for (const auto& s : corpus) {
      std::cout << s.id << "  [" << s.kind << "]";
      for (const auto& t : s.tags) std::cout << " #" << t;
      std::cout << "\n";
    }
    return 0;
  }
  if (!*run_cmd) {
    std::cerr << app.help();
    return 2;
  }

  gcv::RunOptions opts;
  if (budget >= 0) opts.budget = budget;
  return run(corpus, selector, as_json, dot_dir, opts);
}
