#include <cstdio>
#include <filesystem>
#include <ios>
#include <stdexcept>

#include "CLI11.hpp"
#include "app.hpp"

using namespace flexscat::app;

int main(int argc, char** argv) {
  CLI::App cli{"Flexural-gravity wave scattering by variable-thickness plates"};
  cli.set_version_flag("--version", version_string());
  cli.require_subcommand(1);

  std::string config;
  Options opt;
  std::string out = "out";
  std::vector<std::string> overrides;
  std::string kind;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "JSON config or meta.json")->required();
    sub->add_option("--output", out, "output directory");
    sub->add_option("--override", overrides, "key=value, repeatable")->take_all();
    sub->add_option("--jobs", opt.jobs, "concurrent solves")->check(CLI::PositiveNumber);
    sub->add_flag("--verbose,-v", opt.verbose, "progress on stderr");
  };
  CLI::App* run_cmd = cli.add_subcommand("run", "single scattering solve");
  common(run_cmd);
  CLI::App* harness_cmd = cli.add_subcommand("harness", "convergence, consistency and sweep harnesses");
  harness_cmd->add_option("kind", kind, "quadrature_convergence | pde_consistency | self_convergence | sweep")
      ->check(CLI::IsMember({"quadrature_convergence", "pde_consistency", "self_convergence", "sweep"}));
  common(harness_cmd);

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? kOk : kConfigError;
  }
  opt.output = out;

  try {
    const RunConfig cfg = load_config(config, overrides);
    return run_cmd->parsed() ? run(cfg, opt) : harness(kind, cfg, opt);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kIoError;
  } catch (const std::ios_base::failure& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kIoError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kIoError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kIoError;
  }
}
