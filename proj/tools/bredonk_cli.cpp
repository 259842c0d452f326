#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "bredonk/bredonk.hpp"

namespace {

int compute(const std::string& scenario_path, const std::string& preset_name, const std::string& systems,
            const std::string& checks, std::size_t max_order, const std::string& report) {
  using namespace bredonk;
  Scenario s;
  if (!scenario_path.empty()) {
    std::ifstream in(scenario_path);
    if (!in) {
      std::cerr << "error: cannot read " << scenario_path << "\n";
      return 2;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    s = parse_scenario(buf.str());
  } else {
    s = preset(preset_name);
  }
  RunOptions opt = RunOptions::from(s.options);
  if (!systems.empty()) {
    opt.blowup = systems != "x-side";
    opt.x_side = systems != "blowup";
  }
  if (!checks.empty()) opt.full = checks == "full";
  opt.max_group_order = max_order;

  Report r = run_scenario(s, opt);
  std::cout << (report == "json" ? render_json(r) : render_table(r));
  if (!r.ok()) {
    for (const auto& c : r.checks)
      if (!c.ok) std::cerr << "invariant violated: " << c.name << ": " << c.detail << "\n";
    return static_cast<int>(ErrorKind::invariant_violation);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bredon cohomology and K-theory of twisted crossed products over torus actions"};
  app.require_subcommand(1);

  auto* cmd = app.add_subcommand("compute", "run one scenario through the full pipeline");
  std::string scenario, preset_name, systems, checks, report = "table";
  std::size_t max_order = 64;
  auto* sopt = cmd->add_option("--scenario", scenario, "scenario JSON file");
  auto* popt = cmd->add_option("--preset", preset_name, "built-in scenario name");
  sopt->excludes(popt);
  cmd->add_option("--systems", systems, "coefficient systems to compute")
      ->check(CLI::IsMember({"blowup", "x-side", "both"}));
  cmd->add_option("--check-invariants", checks, "invariant-check level")->check(CLI::IsMember({"fast", "full"}));
  cmd->add_option("--max-group-order", max_order, "closure and character-table bound")
      ->check(CLI::Range(1, 4096));
  cmd->add_option("--report", report, "output format")->check(CLI::IsMember({"table", "json"}));

  auto* list = app.add_subcommand("list-presets", "print the preset catalog");
  auto* exp = app.add_subcommand("export-preset", "print a preset as scenario JSON");
  std::string export_name;
  exp->add_option("name", export_name, "preset name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*list) {
      for (const auto& p : bredonk::preset_catalog()) {
        auto s = p.make();
        std::cout << p.name << std::string(p.name.size() < 22 ? 22 - p.name.size() : 1, ' ') << s.description << "\n";
      }
      return 0;
    }
    if (*exp) {
      std::cout << bredonk::serialize_scenario(bredonk::preset(export_name));
      return 0;
    }
    if (scenario.empty() == preset_name.empty()) {
      std::cerr << "error: give exactly one of --scenario or --preset\n";
      return 2;
    }
    return compute(scenario, preset_name, systems, checks, max_order, report);
  } catch (const bredonk::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  }
}
