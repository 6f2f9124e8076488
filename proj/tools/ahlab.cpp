#include "ahlab/experiments.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace ahlab::cli;
  CLI::App app{"Numerical laboratory for asymptotically hyperbolic ends"};
  app.set_version_flag("--version", library_version());
  app.require_subcommand(1);

  std::string experiment;
  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  CLI::App* run = app.add_subcommand("run", "Run one experiment and write its reports");
  run->add_option("experiment", experiment, "Experiment id (see `list`)")->required();
  CLI::Option* config_opt = run->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  CLI::Option* out_opt = run->add_option("--out", out_dir, "Output directory");
  CLI::Option* seed_opt = run->add_option("--seed", seed, "Random seed");

  CLI::App* list = app.add_subcommand("list", "List experiments");
  CLI::App* self = app.add_subcommand("selftest", "Sign convention and identity checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::schema);
  }

  if (*list) {
    for (const auto& e : experiments()) std::cout << e.id << "\t" << e.summary << '\n';
    return 0;
  }
  if (*self) return static_cast<int>(selftest(std::cout));
  std::optional<std::filesystem::path> cfg, out;
  std::optional<std::uint64_t> s;
  if (*config_opt) cfg = config_path;
  if (*out_opt) out = out_dir;
  if (*seed_opt) s = seed;
  return static_cast<int>(run_command(experiment, cfg, out, s, std::cout));
}
