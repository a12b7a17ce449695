// Experiment runner: executes a named figure preset or a key = value config
// file at desk scale, writing CSV, JSON and SVG outputs.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ranslice/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"RAN slicing equilibrium simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run one experiment and write its outputs");
  std::string config_path, preset, out_dir, fixture;
  std::uint64_t seed = 0;
  std::size_t reps = 0;
  run->add_option("config", config_path, "config file with key = value lines");
  run->add_option("--preset", preset,
                  "start from a named preset: fig5 fig6 fig7 fig8 fig9 fig10 fig11 fig12 fig14");
  run->add_option("--seed", seed, "root seed for all trials");
  run->add_option("--reps", reps, "repetitions per grid point");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--fixture", fixture, "tower table CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    ranslice::ExperimentSpec spec;
    if (!preset.empty()) spec = ranslice::preset_spec(preset);
    if (!config_path.empty())
      spec = ranslice::spec_from_config(ranslice::Config::from_file(config_path), spec);
    if (preset.empty() && config_path.empty())
      throw ranslice::ExperimentError("nothing to run: pass a config file or --preset");
    if (run->count("--seed")) spec.seed = seed;
    if (run->count("--reps")) spec.repetitions = reps;
    if (run->count("--out")) spec.out_dir = out_dir;
    if (run->count("--fixture")) spec.fixture_path = fixture;

    const ranslice::RunResult res = ranslice::run_experiment(spec);
    std::cout << res.csv_path << "\n" << res.json_path << "\n" << res.svg_path << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
