// Experiment runner: lorentz_metrics <subcommand> --config <path> [--out <dir>] [--seed <u64>] [--level fast|full]
#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "lorentz/cli.hpp"
#include "lorentz/validate.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Conformal metrics on causally convex domains of Minkowski space"};
  app.require_subcommand(1);
  std::string config, out = ".", level = "fast";
  std::optional<std::uint64_t> seed;
  for (const char* name : {"distance", "compare", "hyperbolicity", "acausality", "thinness"}) {
    auto* sub = app.add_subcommand(name, std::string("run a ") + name + " experiment");
    sub->add_option("--config", config, "experiment config (JSON)")->required();
    sub->add_option("--out", out, "output directory");
    sub->add_option("--seed", seed, "override the config seed");
  }
  auto* validate = app.add_subcommand("validate", "run the acceptance criteria");
  validate->add_option("--config", config, "optional validate config (JSON) with declared outputs");
  validate->add_option("--out", out, "output directory");
  validate->add_option("--seed", seed, "seed");
  validate->add_option("--level", level, "fast or full")->check(CLI::IsMember({"fast", "full"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();

  if (cmd == "validate" && config.empty()) {
    int failed = 0;
    for (int id : lorentz::criterion_ids()) {
      const auto r = lorentz::run_criterion(id, lorentz::parse_level(level), seed.value_or(42));
      std::printf("%s\n", lorentz::format_result(r).c_str());
      std::fflush(stdout);
      failed += r.pass ? 0 : 1;
    }
    return failed ? 1 : 0;
  }

  std::string message;
  const int code = lorentz::run_config_file(config, out, seed, cmd, &message);
  if (!message.empty()) (code == 0 || code == 1 ? std::cout : std::cerr) << message << (message.back() == '\n' ? "" : "\n");
  return code;
}
