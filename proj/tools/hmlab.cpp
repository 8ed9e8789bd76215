// hmlab: command-line front end.
//
//   hmlab <command> [--config run.json] [--dotted.key value ...]
//
// Commands: check-conditions, integrate, shoot, sweep, adjudicate-sign,
// monitors. Any config key may be given as a flag; flags win over the file.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hmlab/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Radial harmonic-map ODE laboratory", "hmlab"};
  app.usage("hmlab <command> [--config run.json] [--dotted.key value ...]");
  app.allow_extras();
  std::string config;
  app.add_option("-c,--config", config, "flat JSON run configuration");
  app.footer("Config keys (all usable as --key value):\n  " + [] {
    std::string s;
    for (const auto& k : hmlab::config_keys()) s += k + "\n  ";
    return s;
  }());
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : hmlab::cli::kExitConfig;
  }

  hmlab::cli::Args args;
  if (!config.empty()) args.config = config;
  args.extras = app.remaining();
  // the command is the leading bare word, if any
  if (!args.extras.empty() && args.extras.front().rfind("-", 0) != 0) {
    args.command = args.extras.front();
    args.extras.erase(args.extras.begin());
  }
  return hmlab::cli::run(args, std::cout, std::cerr);
}
