#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "cavity/errors.hpp"
#include "cavity/experiment.hpp"

namespace {

struct Overrides {
  std::string config;
  std::string seed;
  std::string out;
  std::string steps;
  std::string beta;
  std::string htilde;
  std::string mode;
  std::string spectrum;
  std::string particles;
  std::string energy;
};

void apply(cavity::ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (!value.empty()) cfg.set(key, value);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cavity dynamics for cliques in random graphs"};
  app.set_version_flag("--version", std::string("cavity ") + cavity::version());
  app.require_subcommand(1);

  Overrides o;
  for (const auto& name : cavity::experiment_names()) {
    auto* sub = app.add_subcommand(name, "Run the " + name + " experiment");
    sub->add_option("--config", o.config, "Configuration file")->required();
    sub->add_option("--seed", o.seed, "Master seed (overrides the config)");
    sub->add_option("--out", o.out, "Output directory (overrides the config)");
    if (name == "run") sub->add_option("--steps", o.steps, "Number of transitions");
    if (name == "run" || name == "exact" || name == "annealed" || name == "fermi") {
      sub->add_option("--beta", o.beta, "Inverse temperature (inf allowed)");
      sub->add_option("--htilde", o.htilde, "Chemical potential per site h/k");
    }
    if (name == "second-moment")
      sub->add_option("--mode", o.mode, "brute, decomp, lemmas or selfavg");
    if (name == "fermi") {
      sub->add_option("--spectrum", o.spectrum, "Level spectrum file (`j g_j` lines)");
      sub->add_option("--particles", o.particles, "Particle number N");
      sub->add_option("--energy", o.energy, "Total energy E in level units");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cavity::kExitOk : cavity::kExitConfig;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    auto cfg = cavity::ExperimentConfig::load(o.config);
    apply(cfg, "seed", o.seed);
    apply(cfg, "out", o.out);
    apply(cfg, "run.steps", o.steps);
    apply(cfg, "model.beta", o.beta);
    apply(cfg, "model.htilde", o.htilde);
    apply(cfg, "second_moment.mode", o.mode);
    apply(cfg, "fermi.spectrum", o.spectrum);
    apply(cfg, "fermi.particles", o.particles);
    apply(cfg, "fermi.energy", o.energy);
    const auto result = cavity::run_experiment(name, cfg);
    for (const auto& f : result.files) std::cout << f.generic_string() << '\n';
    return cavity::kExitOk;
  } catch (const cavity::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return cavity::kExitConfig;
  } catch (const cavity::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return cavity::kExitBudget;
  } catch (const cavity::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return cavity::kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
