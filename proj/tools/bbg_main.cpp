#include <iostream>

#include <CLI11.hpp>

#include "bbg/cli.hpp"

int main(int argc, char **argv) {
  CLI::App app{"black box PSL2/SO3 recognition toolkit"};
  app.require_subcommand(1);

  bbg::cli::RunConfig cfg;
  bbg::cli::RhoConfig rho_cfg;
  bbg::cli::BenchConfig bench_cfg;

  // every flag can also be supplied through the environment (BBG_ prefix)
  auto add_common = [&](CLI::App *cmd, bool need_spec) {
    if (need_spec)
      cmd->add_option("--spec", cfg.spec_path, "group spec JSON path")
          ->envname("BBG_SPEC")
          ->required();
    cmd->add_option("--seed", cfg.seed, "random seed")->envname("BBG_SEED");
    cmd->add_option("--confidence", cfg.confidence, "failure bound exponent (2^-k)")
        ->envname("BBG_CONFIDENCE");
    cmd->add_option("--out", cfg.out_path, "output path (default stdout)")->envname("BBG_OUT");
  };

  CLI::App *unip = app.add_subcommand("unipotent", "find the characteristic and a unipotent element");
  add_common(unip, true);
  unip->add_option("--p-hint", cfg.p_hint, "known characteristic (decimal)");
  unip->add_option("--jobs", cfg.jobs, "parallel seeded searches");

  CLI::App *coord = app.add_subcommand("coordinatize", "build the Sym4 frame and black box field");
  add_common(coord, true);

  CLI::App *rho = app.add_subcommand("rho", "adjoint matrix of an element / round trips");
  rho->add_option("--frame", rho_cfg.frame_path, "frame file from coordinatize")->required();
  rho->add_option("--element", rho_cfg.element_json, "matrix wire form of a base element");
  rho->add_option("--roundtrip", rho_cfg.roundtrip, "verify n random round trips");
  rho->add_option("--confidence", cfg.confidence, "failure bound exponent");
  rho->add_option("--out", cfg.out_path, "output path");

  CLI::App *bench = app.add_subcommand("bench", "operation-count benchmark sweep (CSV)");
  bench->add_option("--primes", bench_cfg.primes, "field sizes to sweep");
  bench->add_option("--reps", bench_cfg.reps, "repetitions per procedure");
  bench->add_option("--seed", cfg.seed, "random seed");
  bench->add_option("--out", cfg.out_path, "output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (unip->parsed())
      return bbg::cli::cmd_unipotent(cfg, std::cout, std::cerr);
    if (coord->parsed())
      return bbg::cli::cmd_coordinatize(cfg, std::cout, std::cerr);
    if (rho->parsed())
      return bbg::cli::cmd_rho(cfg, rho_cfg, std::cout, std::cerr);
    if (bench->parsed())
      return bbg::cli::cmd_bench(cfg, bench_cfg, std::cout, std::cerr);
  } catch (const std::exception &ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return bbg::cli::kUsage;
  }
  return bbg::cli::kUsage;
}
