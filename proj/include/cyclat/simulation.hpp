#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cyclat/error.hpp"
#include "cyclat/evolution.hpp"
#include "cyclat/field_state.hpp"
#include "cyclat/observables.hpp"

namespace cyclat {

struct Checkpoint {
  std::int64_t step = 0;
  FieldState state;
};

// Observables recorded along a run; steps strictly increase from 0.
struct TimeSeries {
  std::vector<ObservableSnapshot> snapshots;
  std::vector<Checkpoint> checkpoints;
  FieldState final_state;
};

// Applies n_steps steps of the configured scheme. Snapshots are taken at step
// 0 and at every multiple of record_every; full states are kept at every
// multiple of checkpoint_every (0 disables checkpoints).
inline TimeSeries run(const FieldState& initial, const EvolutionConfig& config,
                      std::int64_t n_steps, std::int64_t record_every,
                      std::int64_t checkpoint_every = 0) {
  if (n_steps < 0) throw ParameterError("n_steps must be nonnegative");
  if (record_every < 1) throw ParameterError("record_every must be at least 1");
  if (checkpoint_every < 0) throw ParameterError("checkpoint_every must be nonnegative");
  validate(config, initial.lattice());

  const KernelTable kernels = build_kernel_table(initial.lattice());
  TimeSeries series;
  series.snapshots.reserve(static_cast<std::size_t>(n_steps / record_every + 1));
  series.snapshots.push_back(snapshot(0, initial, kernels));
  if (checkpoint_every > 0) series.checkpoints.push_back({0, initial});

  FieldState state = initial;
  for (std::int64_t t = 1; t <= n_steps; ++t) {
    state = step(state, config, kernels);
    if (t % record_every == 0) series.snapshots.push_back(snapshot(t, state, kernels));
    if (checkpoint_every > 0 && t % checkpoint_every == 0) series.checkpoints.push_back({t, state});
  }
  series.final_state = std::move(state);
  return series;
}

}  // namespace cyclat
