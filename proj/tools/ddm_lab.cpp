// Command-line front end for the DDM lab.

#include "ddm/run.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"ddm-lab: dynamically defined measures on Markov shifts"};
  app.set_help_flag("-h,--help", "Show usage");
  std::string mode;
  std::string config_path;
  std::string out_prefix;
  std::optional<std::uint64_t> seed;
  bool unsafe_large = false;
  app.add_option("mode", mode, "phi | entropy | hellinger-scan | derivative | certify | selftest")->required();
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--out", out_prefix, "Output path prefix (default: config output field)");
  app.add_option("--seed", seed, "Seed override for randomised suites");
  app.add_flag("--unsafe-large", unsafe_large, "Lift the N, D, L <= 4 size caps");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  return ddm::run::main_entry(mode, config_path, out_prefix, seed, unsafe_large, std::cout, std::cerr);
}
