// Command-line front end: axiflow <subcommand> --config scenario.json [--out dir] [--threads n] [--verbose]
//
// Settings come from flags first, then AXIFLOW_OUT / AXIFLOW_THREADS / AXIFLOW_VERBOSE,
// then the scenario file.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "axiflow/scenario.hpp"

namespace {

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

unsigned parse_threads(const std::string& text, const char* source) {
  try {
    std::size_t used = 0;
    const long n = std::stol(text, &used);
    if (used == text.size() && n >= 1 && n <= 1024) return static_cast<unsigned>(n);
  } catch (const std::exception&) {
  }
  throw axiflow::ValidationError(std::string(source) + " must be an integer in [1, 1024], got '" + text + "'");
}

bool truthy(const std::string& v) { return v != "0" && v != "false" && v != "no" && v != "off"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Particle paths, streamline maps and Frenet diagnostics for axisymmetric flows"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::optional<std::string> out_flag;
  std::optional<unsigned> threads_flag;
  bool verbose_flag = false;

  const std::pair<axiflow::Subcommand, const char*> subs[] = {
      {axiflow::Subcommand::fields, "list catalog fields and certify the configured one"},
      {axiflow::Subcommand::trace, "integrate particle paths"},
      {axiflow::Subcommand::atlas, "build a streamline map and laminar rates"},
      {axiflow::Subcommand::frames, "Frenet frames, swirl-angle derivatives and tube coordinates"},
      {axiflow::Subcommand::identities, "pressure identities, rotation balance and key inequalities"},
      {axiflow::Subcommand::scan, "instability scan over inflow profiles"},
  };
  std::optional<axiflow::Subcommand> chosen;
  for (const auto& [sub, help] : subs) {
    CLI::App* cmd = app.add_subcommand(axiflow::to_string(sub), help);
    cmd->add_option("--config", config_path, "scenario file (JSON)")->required();
    cmd->add_option("--out", out_flag, "output directory");
    cmd->add_option("--threads", threads_flag, "worker threads")->check(CLI::Range(1, 1024));
    cmd->add_flag("--verbose", verbose_flag, "progress messages on stderr");
    cmd->callback([&chosen, s = sub] { chosen = s; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const axiflow::ScenarioConfig config = axiflow::load_scenario(config_path);
    axiflow::RunSettings settings;
    settings.log = &std::cerr;

    if (out_flag) settings.out_dir = *out_flag;
    else if (auto e = env("AXIFLOW_OUT")) settings.out_dir = *e;
    else if (config.output) settings.out_dir = *config.output;

    if (threads_flag) settings.threads = *threads_flag;
    else if (auto e = env("AXIFLOW_THREADS")) settings.threads = parse_threads(*e, "AXIFLOW_THREADS");
    else if (config.threads) settings.threads = *config.threads;

    settings.verbose = verbose_flag;
    if (!verbose_flag)
      if (auto e = env("AXIFLOW_VERBOSE")) settings.verbose = truthy(*e);

    return axiflow::run_scenario(config, *chosen, settings);
  } catch (const axiflow::ValidationError& e) {
    std::cerr << "axiflow: invalid input: " << e.what() << '\n';
    return 1;
  }
}
