// Committed-minority sweep for the Naming Game on a complete graph.
#include <cstdio>

#include "normdyn/calibrate.hpp"

int main() {
  using namespace normdyn;
  SimConfig cfg;
  cfg.model = Model::naming_game;
  cfg.graph.kind = kind::Complete{};
  cfg.graph.n = 100;
  cfg.horizon = 15;
  calibrate::SweepOptions opt;
  opt.reps = 10;
  opt.base_seed = 1;
  opt.workers = default_workers();
  const auto r = calibrate::critical_mass_sweep(calibrate::SweepModel::naming_game, {0.1, 0.15, 0.2, 0.25, 0.3, 0.35}, cfg, opt);
  for (const auto& p : r.points) std::printf("f=%.2f uptake=%.3f sd=%.3f\n", p.fraction, p.mean_uptake, p.std_uptake);
  if (r.critical_mass) std::printf("critical mass ~ %.2f\n", *r.critical_mass);
  else std::printf("critical mass above sweep range\n");
}
