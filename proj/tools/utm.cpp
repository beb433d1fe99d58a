#include <iostream>

#include "CLI11.hpp"
#include "utm/app.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Unified transform solver for heat and reaction-diffusion problems"};
  utm::RunOptions opts;
  std::uint64_t seed = 0;
  double tol = 0.0;
  app.add_option("command", opts.command, "solve-linear | solve-rd | norms | lifespan | audit | verify");
  app.add_option("-c,--config", opts.config_path, "JSON config file");
  app.add_option("-o,--out", opts.out_dir, "output directory")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "random seed for the property tests");
  app.add_option("--threads", opts.threads, "worker threads (0: hardware default)");
  auto* tol_opt = app.add_option("--tol", tol, "quadrature tolerance override");
  CLI11_PARSE(app, argc, argv);
  if (*seed_opt) opts.seed = seed;
  if (*tol_opt) opts.tol = tol;
  return utm::run(opts, std::cout, std::cerr);
}
