// infoloss: run information-loss experiments from JSON configs.
//
//   infoloss run <config> [--seed N]
//   infoloss sweep <config> --param <name> --values <v1,v2,...> [--seed N]
//   infoloss catalog

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "infoloss/experiment.hpp"

namespace {

using namespace infoloss;

int cmd_run(const std::string& path, std::optional<std::uint64_t> seed) {
  ExperimentConfig cfg = load_config(path);
  if (seed) cfg.seed = *seed;
  const RunReport rep = run_experiment(cfg);
  write_report_files(rep);
  const std::string prefix = output_prefix(cfg);
  std::cout << "wrote " << prefix << ".json and " << prefix << ".csv\n";
  for (const auto& [metric, value] : csv::report_metrics(rep)) std::cout << "  " << metric << " = " << value << "\n";
  return 0;
}

int cmd_sweep(const std::string& path, const std::string& param, const std::vector<std::string>& values,
              std::optional<std::uint64_t> seed) {
  const Json tmpl = load_json_file(path);
  const ExperimentConfig base = parse_config(tmpl);
  const SweepResult res = sweep(tmpl, param, values, seed);
  const std::string prefix = output_prefix(base) + ".sweep";
  write_text(prefix + ".csv", res.csv);
  Json runs = Json::array();
  for (const auto& r : res.runs) runs.push_back(report_json(r));
  Json doc{{"parameter", param}, {"values", values}, {"runs", runs}, {"error", res.error ? Json(*res.error) : Json(nullptr)}};
  write_text(prefix + ".json", doc.dump(2) + "\n");
  std::cout << "wrote " << prefix << ".csv and " << prefix << ".json (" << res.runs.size() << " of " << values.size()
            << " runs)\n";
  if (res.error) {
    std::cerr << "infoloss: sweep aborted at " << *res.error << "\n";
    return 1;
  }
  return 0;
}

int cmd_catalog() {
  struct Entry {
    const char* label;
    System system;
    Distribution input;
  };
  const std::vector<Entry> entries = {
      {"identity", System::identity(), Distribution::uniform(-1.0, 1.0)},
      {"affine(scale=2, offset=1)", System::affine(2.0, 1.0), Distribution::uniform(-1.0, 1.0)},
      {"center-clipper(c=0.5)", System::center_clipper(0.5), Distribution::uniform(-1.0, 1.0)},
      {"magnitude-clipper(c=0.5)", System::magnitude_clipper(0.5), Distribution::uniform(-1.0, 1.0)},
      {"uniform-quantizer(8, 0, 1)", System::uniform_quantizer(8, 0.0, 1.0), Distribution::uniform(0.0, 1.0)},
      {"square", System::square(), Distribution::uniform(-1.0, 1.0)},
      {"magnitude", System::magnitude(), Distribution::uniform(-1.0, 1.0)},
      {"coordinate-projection(kept=[0])", System::projection({0}), Distribution::uniform({0.0, 0.0}, {1.0, 1.0})},
      {"componentwise(identity, quantizer-8)",
       System::componentwise({System::identity(), System::uniform_quantizer(8, 0.0, 1.0)}),
       Distribution::uniform({0.0, 0.0}, {1.0, 1.0})},
      {"composition(quantizer-8 then affine)",
       System::compose(System::uniform_quantizer(8, 0.0, 1.0), System::affine(3.0, -1.0)),
       Distribution::uniform(0.0, 1.0)},
  };
  std::printf("systems (analytic relative loss on the listed input):\n");
  for (const auto& e : entries) {
    const auto l = analytic_relative_loss(e.system, e.input);
    std::printf("  %-40s %-28s l = %s\n", e.label, describe(e.input).c_str(), l ? csv::num(*l).c_str() : "n/a");
  }
  std::printf("\ndistributions:\n"
              "  uniform-box          lo, hi (numbers or lists)\n"
              "  truncated-gaussian   mean, sigma, lo, hi\n"
              "  finite-discrete      points, weights\n"
              "  mixture              components: [{weight, distribution}]\n"
              "  product              factors: [distribution]\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Estimate information dimension and information loss of static systems"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "Run one experiment");
  run->add_option("config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Override the config seed");

  std::string param;
  std::vector<std::string> values;
  auto* sw = app.add_subcommand("sweep", "Run one experiment per parameter value");
  sw->add_option("config", config_path, "Experiment config template (JSON)")->required()->check(CLI::ExistingFile);
  sw->add_option("--param", param, "Dotted config key, e.g. system.c")->required();
  sw->add_option("--values", values, "Comma-separated values")->required()->delimiter(',');
  sw->add_option("--seed", seed, "Override the config seed");

  app.add_subcommand("catalog", "List built-in systems and distributions");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(config_path, seed);
    if (*sw) return cmd_sweep(config_path, param, values, seed);
    return cmd_catalog();
  } catch (const ConfigError& e) {
    std::cerr << "infoloss: configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "infoloss: error: " << e.what() << "\n";
    return 3;
  }
}
