// Scenario runner for the free-boundary MHD workbench.

#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"

#include "fbmhd/common.hpp"
#include "fbmhd/config.hpp"
#include "fbmhd/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"free-boundary compressible MHD workbench"};
  app.require_subcommand(1);

  std::string config_path;
  std::string outdir = "out";
  long seed = -1;
  int jobs = 1;
  bool dump_fields = false;

  const std::vector<std::string> kinds = {"check-operators", "compat-check", "solve-linear",
                                          "adjoint-check", "run-nashmoser"};
  for (const auto& kind : kinds) {
    CLI::App* sub = app.add_subcommand(kind, "run the " + kind + " pipeline");
    sub->add_option("--config", config_path, "configuration file (key = value)");
    sub->add_option("--seed", seed, "seed for the randomized suites");
    sub->add_option("--jobs", jobs, "scenario-level parallelism (accepted, scenarios run serially)");
    sub->add_flag("--dump-fields", dump_fields, "write binary field dumps");
    sub->add_option("--out", outdir, "output directory");
  }

  CLI11_PARSE(app, argc, argv);
  std::string kind = app.get_subcommands().front()->get_name();

  try {
    fbmhd::Config cfg =
        config_path.empty() ? fbmhd::Config() : fbmhd::Config::from_file(config_path);
    const char* env_out = std::getenv("FBMHD_OUT");
    if (env_out && outdir == "out") outdir = env_out;
    if (seed < 0) {
      if (cfg.has("rng.seed"))
        seed = cfg.get_int("rng.seed");
      else if (kind == "check-operators" || kind == "adjoint-check")
        throw fbmhd::ConfigError("randomized suites need --seed or rng.seed");
      else
        seed = 1;
    }
    bool ok = fbmhd::run_scenario(kind, cfg, uint64_t(seed), outdir, dump_fields);
    std::printf("%s: %s (artifacts in %s)\n", kind.c_str(), ok ? "PASS" : "FAIL", outdir.c_str());
    return ok ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s: error: %s\n", kind.c_str(), e.what());
    return 2;
  }
}
