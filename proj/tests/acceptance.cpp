// Runs every registered experiment twice from configs/ and prints one
// pass/fail line per acceptance criterion.

#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "fkdyn/experiments.hpp"
#include "fkdyn/io.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Run {
  json summary;
  bool identical = false;
};

bool starts(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

Run run_twice(const std::string& name, const fs::path& configs, const fs::path& scratch) {
  Run r;
  std::string bytes[2];
  for (int pass = 0; pass < 2; ++pass) {
    auto cfg = fkdyn::load_config((configs / (name + ".json")).string());
    const fs::path out = scratch / (name + "-" + std::to_string(pass));
    fs::remove_all(out);
    cfg.output_dir = out.string();
    fkdyn::run_experiment(cfg);
    bytes[pass] = fkdyn::io::read_text((out / "results.csv").string()) + '\0' +
                  fkdyn::io::read_text((out / "summary.json").string());
    if (pass == 0) r.summary = json::parse(fkdyn::io::read_text((out / "summary.json").string()));
  }
  r.identical = bytes[0] == bytes[1];
  return r;
}

// All checks of an experiment whose name passes the filter; at least one must exist.
bool checks_pass(const json& summary, const std::function<bool(const std::string&)>& keep, std::string& detail) {
  int seen = 0;
  for (const auto& c : summary.at("checks")) {
    const auto name = c.at("name").get<std::string>();
    if (!keep(name)) continue;
    ++seen;
    if (!c.at("pass").get<bool>()) {
      if (!detail.empty()) detail += "; ";
      detail += name + " = " + fkdyn::io::format_number(c.at("value").get<double>()) +
                " (bound " + fkdyn::io::format_number(c.at("bound").get<double>()) + ")";
    }
  }
  if (seen == 0) detail = "no matching checks";
  return seen > 0 && detail.empty();
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path configs = argc > 1 ? argv[1] : FKDYN_CONFIG_DIR;
  const fs::path scratch = argc > 2 ? fs::path(argv[2]) : fs::temp_directory_path() / "fkdyn-acceptance";
  fs::create_directories(scratch);

  std::map<std::string, Run> runs;
  try {
    for (const auto& name : fkdyn::experiment_names()) runs[name] = run_twice(name, configs, scratch);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  const auto any = [](const std::string&) { return true; };
  struct Criterion {
    int id;
    std::string title;
    std::string experiment;
    std::function<bool(const std::string&)> keep;
  };
  const std::vector<Criterion> criteria = {
      {1, "match oracle equivalence", "match-oracle", [](const std::string& n) { return starts(n, "match dp"); }},
      {2, "word edit distance", "match-oracle", [](const std::string& n) { return starts(n, "word edit"); }},
      {3, "pseudometric axioms", "pseudometric-axioms", [](const std::string& n) { return starts(n, "fk "); }},
      {4, "prokhorov bound", "prokhorov-bound", any},
      {5, "fekete monotonicity", "pseudometric-axioms", [](const std::string& n) { return starts(n, "fekete"); }},
      {6, "gikn tower cauchy bounds", "gikn-tower",
       [](const std::string& n) { return starts(n, "good approximation") || starts(n, "cauchy"); }},
      {7, "lyapunov decay", "gikn-tower", [](const std::string& n) { return starts(n, "exponent decay"); }},
      {8, "oxtoby ergodicity diagnostic", "oxtoby", any},
      {9, "entropy discontinuity", "entropy-discontinuity", any},
      {10, "zero-entropy trend of the limit", "gikn-tower",
       [](const std::string& n) { return starts(n, "limit entropy"); }},
      {11, "katok triviality", "katok-sweep", any},
      {12, "transport distances", "transport-curve", any},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    std::string detail;
    const bool ok = checks_pass(runs.at(c.experiment).summary, c.keep, detail);
    failed += ok ? 0 : 1;
    std::printf("criterion %2d %-34s %s%s%s\n", c.id, c.title.c_str(), ok ? "PASS" : "FAIL",
                ok ? "" : "  ", detail.c_str());
  }
  std::string differ;
  for (const auto& [name, r] : runs) {
    if (!r.identical) differ += (differ.empty() ? "" : ", ") + name;
  }
  failed += differ.empty() ? 0 : 1;
  std::printf("criterion 13 %-34s %s%s%s\n", "determinism", differ.empty() ? "PASS" : "FAIL",
              differ.empty() ? "" : "  differs: ", differ.c_str());
  std::printf("%d of 13 criteria pass\n", 13 - failed);
  return failed == 0 ? 0 : 1;
}
