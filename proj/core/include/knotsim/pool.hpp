#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "knotsim/environment.hpp"
#include "knotsim/geometry.hpp"
#include "knotsim/physics.hpp"
#include "knotsim/random.hpp"

namespace knotsim {

struct GenerationOptions {
    std::uint64_t step_budget = 1'000'000;  // env steps, settling frames included
    int settle_frames = 24;
    double settle_speed = 1e-3;    // m/s
    double max_aspect_ratio = 3.0;
    int max_walk_steps = 200;      // walk restarts from the simple loop after this many steps
    int max_gap = 30;              // snapshot spacing is drawn from [1, max_gap] steps
    int noise_trials = 10;         // reset-noise draws used to test a candidate's robustness
    int noise_keep = 9;            // draws that must reproduce the candidate's Gauss code
    int strict_noise_max_x = 2;    // up to this #X every one of strict_noise_trials draws must keep the code
    int strict_noise_trials = 20;
    double noise_scale = kResetNoiseScale;
};

/// Shape filters that stand in for manual curation.
bool passes_shape_filters(const KnotConfiguration& config, const SimParams& params,
                          const GenerationOptions& options = {});

/// True when enough reset-noise draws keep the Gauss code of `config`:
/// all `strict_noise_trials` draws for #X <= strict_noise_max_x, otherwise
/// `noise_keep` of `noise_trials`. Rejects kinks and stacked strands that
/// reset noise would turn into a different code.
bool survives_reset_noise(const KnotConfiguration& config, const SimParams& params, Rng& rng,
                          const GenerationOptions& options = {});

/// Settled configurations with exactly `target_x` crossings, collected by
/// snapshotting random-policy walks that start from a simple loop.
/// Throws GenerationTimeout when the step budget runs out. `steps_used`, if
/// given, receives the env steps spent (settling included).
std::vector<KnotConfiguration> generate_configurations(int target_x, std::size_t count, const SimParams& params,
                                                       Rng& rng, const GenerationOptions& options = {},
                                                       std::uint64_t* steps_used = nullptr);

struct SplitConfigs {
    std::vector<KnotConfiguration> train;
    std::vector<KnotConfiguration> test;
};

/// First ceil(n * train_fraction) configurations go to train, the rest to test.
SplitConfigs split_configs(std::vector<KnotConfiguration> configs, double train_fraction = 0.5);

/// Builds the pool portion for crossing count `x`; files are named
/// x<x>/<split>/<nnn>.knot.
void add_split_to_pool(ConfigPool& pool, int x, const SplitConfigs& split);

/// Default number of configurations per crossing count: 17 for the simple
/// loop, 40 otherwise.
std::size_t default_pool_count(int x);

}  // namespace knotsim
