#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

#include "vortexcrypt/info_model.hpp"
#include "vortexcrypt/parallel.hpp"
#include "vortexcrypt/pixel_map.hpp"
#include "vortexcrypt/prng.hpp"
#include "vortexcrypt/vortex.hpp"

namespace vortexcrypt {

enum class SweepMode { Vortex, Permute };

inline SweepMode sweep_mode_from_string(std::string_view s) {
  if (s == "vortex") return SweepMode::Vortex;
  if (s == "permute") return SweepMode::Permute;
  throw Error("unknown sweep mode \"" + std::string(s) + "\"");
}

struct SweepRow {
  std::size_t step = 0;
  double mean_upsilon = 1.0;
  double std_upsilon = 0.0;
};

struct SweepConfig {
  SweepMode mode = SweepMode::Permute;
  std::size_t steps = 10;
  std::size_t seeds = 10;
  GridShape shape{28, 28};
  std::uint64_t base_seed = 0;
  std::optional<unsigned> threads;
};

// Seed of the transformation composed at `step` (1-based) for run `run`.
inline std::uint64_t sweep_step_seed(std::uint64_t base_seed, std::size_t run, std::size_t step) {
  return derive_seed(derive_seed(base_seed, run), step);
}

// Upsilon after 0..steps successive transformations, for one run.
inline std::vector<double> sweep_curve(const SweepConfig& cfg, std::size_t run, const NeighborKernel& kernel) {
  std::vector<double> curve{1.0};
  auto map = PixelMap::identity(cfg.shape);
  for (std::size_t step = 1; step <= cfg.steps; ++step) {
    const auto seed = sweep_step_seed(cfg.base_seed, run, step);
    const auto next = cfg.mode == SweepMode::Permute
                          ? PixelMap::random_permutation(cfg.shape, seed)
                          : apply_key(keygen(cfg.shape, 1, seed), cfg.shape);
    map = compose(next, map);
    curve.push_back(remaining_info(map, kernel, InfoOptions{1}).upsilon);
  }
  return curve;
}

// Runs are independent and spread over threads; each row's statistics are
// reduced in run order, so output does not depend on scheduling.
inline std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  if (cfg.seeds == 0) throw Error("sweep needs at least one seed");
  const NeighborKernel kernel(cfg.shape);
  std::vector<std::vector<double>> curves(cfg.seeds);
  parallel_for(cfg.seeds, cfg.threads.value_or(default_threads()),
               [&](std::size_t run) { curves[run] = sweep_curve(cfg, run, kernel); });

  std::vector<SweepRow> rows;
  for (std::size_t step = 0; step <= cfg.steps; ++step) {
    double mean = 0.0;
    for (const auto& c : curves) mean += c[step];
    mean /= static_cast<double>(cfg.seeds);
    double var = 0.0;
    for (const auto& c : curves) var += (c[step] - mean) * (c[step] - mean);
    var /= static_cast<double>(cfg.seeds);
    rows.push_back(SweepRow{step, mean, std::sqrt(var)});
  }
  return rows;
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "step,mean_upsilon,std_upsilon\n";
  out.precision(17);
  for (const auto& r : rows) out << r.step << ',' << r.mean_upsilon << ',' << r.std_upsilon << '\n';
}

}  // namespace vortexcrypt
