// dephase: run figure scenarios, custom configs and the acceptance suite.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dephase.hpp"

namespace ds = dephase::scenario;

namespace {

// Exit codes: 0 success, 1 acceptance failure, 2 bad config/arguments,
// 3 equilibrium requested for a closed evolution, 4 other numerical error.
int report_error(const std::exception& e) {
  std::cerr << "error: " << e.what() << '\n';
  if (dynamic_cast<const dephase::ConfigError*>(&e)) return 2;
  if (dynamic_cast<const dephase::EquilibriumUndefinedError*>(&e)) return 3;
  return 4;
}

struct Common {
  std::optional<std::string> out;
  std::optional<double> tol;
  unsigned threads = ds::default_threads();
  std::optional<std::string> stats;
};

void apply_common(nlohmann::json& doc, const Common& c) {
  if (c.out) ds::apply_override(doc, "output.path=" + nlohmann::json(*c.out).dump());
  if (c.tol) doc["tolerance"] = *c.tol;
  if (c.stats) ds::apply_override(doc, "physics.statistics=" + nlohmann::json(*c.stats).dump());
}

int run_config(nlohmann::json doc, const Common& common) {
  apply_common(doc, common);
  const ds::ScenarioConfig cfg = ds::parse_config(doc);
  for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << '\n';
  const ds::ScenarioOutput out = ds::run_scenario(cfg, common.threads);
  for (const auto& path : ds::write_outputs(out, cfg.output.path, cfg.output.precision)) {
    std::cout << path.string() << '\n';
  }
  bool pass = true;
  for (const auto& [name, r] : out.reports) {
    std::printf("%s: max_abs_dev=%.6g max_rel_dev=%.6g tolerance=%.6g %s worst=%s\n", name.c_str(), r.max_abs_dev,
                r.max_rel_dev, r.tolerance, r.pass ? "PASS" : "FAIL", ds::describe(r.worst_point).c_str());
    pass = pass && r.pass;
  }
  return pass ? 0 : 1;
}

std::string help_footer() {
  return "Config defaults: T=0.1, mu=0, lambda=0.05, g=1, statistics=FD, n_eq=0.5, delta_n=0.1,\n"
         "delta_T=delta_mu=0, linear_response_threshold=0.05, ft_convention=algebraic,\n"
         "precision=12, tolerance=0.05, output.path='.'.\n"
         "Overrides for `figure` use dotted keys with JSON values, e.g. physics.T=[0.1,0.25]\n"
         "or grids.t='{\"start\":0,\"stop\":50,\"count\":101}'.";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dephasing-noised bipartite fermionic chain: transport, entropy and closed forms"};
  app.require_subcommand(1);
  app.footer(help_footer());

  Common common;
  app.add_option("--out", common.out, "Output directory (overrides output.path)");
  app.add_option("--tol", common.tol, "Comparison tolerance (overrides config tolerance)")->check(CLI::PositiveNumber);
  app.add_option("--threads", common.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--stats", common.stats, "Occupation statistics")->check(CLI::IsMember({"fd", "boltzmann"}));

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run a scenario from a JSON config file");
  run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);

  std::string figure_id;
  std::vector<std::string> overrides;
  auto* figure = app.add_subcommand("figure", "Run a figure scenario with its caption parameters");
  figure->add_option("scenario", figure_id, "Scenario id")
      ->required()
      ->check(CLI::IsMember({"ons1", "onsevo1", "onsevo2", "entroevo", "entroprod", "mutint", "onsteste1",
                             "onsteste2", "custom"}));
  figure->add_option("overrides", overrides, "key=value overrides");

  std::string only;
  std::optional<std::string> csv_path;
  auto* acc = app.add_subcommand("accept", "Run the acceptance criteria");
  acc->add_option("--only", only, "Run a single criterion (e.g. 4 or 9b)");
  acc->add_option("--csv", csv_path, "Also write the summary as CSV to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version requests exit 0; malformed arguments count as config errors.
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      std::ifstream is(config_path);
      std::stringstream buf;
      buf << is.rdbuf();
      nlohmann::json doc = nlohmann::json::parse(buf.str(), nullptr, false);
      if (doc.is_discarded()) throw dephase::ConfigError("config is not valid JSON: " + config_path);
      return run_config(std::move(doc), common);
    }
    if (figure->parsed()) {
      nlohmann::json doc = ds::figure_preset(ds::scenario_from_string(figure_id));
      for (const auto& o : overrides) ds::apply_override(doc, o);
      return run_config(std::move(doc), common);
    }
    if (acc->parsed()) {
      const auto results = ds::acceptance_suite(only, common.threads);
      std::cout << ds::render_text(results);
      const std::string csv = ds::render_csv(results);
      if (csv_path) {
        std::ofstream os(*csv_path, std::ios::binary);
        os << csv;
      } else if (common.out) {
        ds::write_text(*common.out, "acceptance.csv", csv);
      }
      bool pass = true;
      for (const auto& r : results) pass = pass && r.pass;
      return pass ? 0 : 1;
    }
  } catch (const std::exception& e) {
    return report_error(e);
  }
  return 0;
}
