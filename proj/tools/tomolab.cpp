#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "tomolab/error.hpp"
#include "tomolab/parallel.hpp"
#include "tomolab/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"tomolab: tomography and trace regression experiments"};
  app.set_version_flag("--version", std::string("tomolab ") + tomolab::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  unsigned threads = 0;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "run the experiment described by a config file");
  run->add_option("--config", config_path, "config file")->required();
  run->add_option("--threads", threads, "worker thread cap (0 = all cores); results do not depend on it");
  run->add_option("--out", out_dir, "output directory (overrides experiment.output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    auto config = tomolab::load_config(config_path);
    tomolab::apply_seed_override(config, std::getenv("TOMOLAB_SEED"));
    tomolab::set_max_threads(threads);
    const auto result = tomolab::run_experiment(config, out_dir.empty() ? config.output_dir : out_dir);
    for (const auto& f : result.failures) std::fprintf(stderr, "check failed: %s\n", f.c_str());
    std::printf("%s: %s\n", std::string(tomolab::to_string(config.task)).c_str(), result.pass ? "pass" : "FAIL");
    return result.pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
