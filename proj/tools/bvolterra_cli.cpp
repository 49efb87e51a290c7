#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "bvolterra/errors.hpp"
#include "bvolterra/scenario.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw bvolterra::ParseError("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Runs the checks of a scenario file and reports verdicts."};
  std::string scenario_path;
  std::string report_path;
  std::string format = "text";
  bvolterra::RunOptions options;
  bool normalize = false;
  app.add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  app.add_option("--report", report_path, "Write the JSON report here");
  app.add_option("--format", format, "Output on stdout")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--horizon", options.horizon, "Horizon for germ checks")->check(CLI::PositiveNumber);
  app.add_option("--seed", options.seed, "Seed for sampled checks");
  app.add_flag("--timing", options.timing, "Include elapsed times in reports");
  app.add_flag("--normalize", normalize, "Print the parsed scenario in canonical form and exit");
  CLI11_PARSE(app, argc, argv);

  bvolterra::Scenario scenario;
  try {
    scenario = bvolterra::parse_scenario(read_file(scenario_path));
  } catch (const bvolterra::Error& e) {
    std::cerr << "invalid scenario: " << e.what() << '\n';
    return 2;
  }
  if (normalize) {
    std::cout << bvolterra::serialize_scenario(scenario);
    return 0;
  }

  const bvolterra::Report report = bvolterra::run_checks(scenario, options);
  const std::string json = bvolterra::report_json(report, options.timing).dump(2) + "\n";
  if (!report_path.empty()) {
    std::ofstream out(report_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write report '" << report_path << "'\n";
      return 2;
    }
    out << json;
  }
  if (format == "json") {
    std::cout << json;
  } else {
    std::cout << bvolterra::report_text(report);
  }
  return report.exit_code();
}
