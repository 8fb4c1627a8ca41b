#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "negdimcd/cli.hpp"

namespace cli = negdimcd::cli;

namespace {

std::string default_out_dir() {
  if (const char* env = std::getenv("NEGDIMCD_OUT_DIR"); env && *env) return env;
  return ".";
}

int finish(const cli::Outcome& out, const std::string& dir, const std::string& stem) {
  cli::write_outcome(out, dir, stem);
  std::cout << out.summary;
  std::cout << "records: " << (std::filesystem::path(dir) / (stem + ".records.csv")).string() << "\n";
  return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for curvature-dimension conditions with negative effective dimension"};
  app.require_subcommand(1);

  double tol = 0.0;
  std::uint64_t seed = 0;
  std::string out_dir = default_out_dir();
  auto* tol_opt = app.add_option("--tol", tol, "Override every check tolerance");
  auto* seed_opt = app.add_option("--seed", seed, "Seed for randomized checks");
  app.add_option("--out-dir", out_dir, "Directory for record files (default $NEGDIMCD_OUT_DIR or .)");

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run the suites selected by a config file");
  run->add_option("config", config_path, "Config file")->required();
  auto* certify = app.add_subcommand("certify", "Find the best K per N on a lattice");
  certify->add_option("config", config_path, "Config file")->required();
  std::vector<std::string> inputs;
  auto* merge = app.add_subcommand("merge", "Merge record files into one summary");
  merge->add_option("records", inputs, "Record files");

  CLI11_PARSE(app, argc, argv);

  cli::Options opts;
  if (*tol_opt) opts.tol = tol;
  if (*seed_opt) opts.seed = seed;
  opts.out_dir = out_dir;

  try {
    if (*merge) return finish(cli::merge(inputs), out_dir, "merged");
    const cli::Config config = cli::Config::load(config_path);
    const std::string stem = std::filesystem::path(config_path).stem().string();
    if (*run) return finish(cli::run(config, opts), out_dir, stem);
    return finish(cli::certify(config, opts), out_dir, stem + ".certify");
  } catch (const cli::ConfigError& e) {
    std::cerr << "negdimcd: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "negdimcd: " << e.what() << "\n";
    return 3;
  }
}
