#include "knotsim/pool.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "knotsim/errors.hpp"
#include "knotsim/gauss_code.hpp"

namespace knotsim {
namespace {

Action random_action(Rng& rng) {
    Action a;
    for (int k = 0; k < 3; ++k) a.location[k] = uniform(rng, -1.0, 1.0);
    for (int k = 0; k < 3; ++k) a.force[k] = uniform(rng, -1.0, 1.0);
    return a;
}

RopeState random_step(const RopeState& s, const Action& a, const SimParams& params) {
    const Workspace ws = Workspace::around(center_of_mass(s.positions));
    const PhysicalAction pa = denormalize_action(a, ws, params.f_max);
    return step_frame(s, nearest_key_point(s.positions, pa.grasp_point), pa.force, params);
}

std::optional<std::size_t> crossings_of(const KnotConfiguration& c) {
    try {
        return crossing_count(compute_gauss_code(c));
    } catch (const DegenerateProjection&) {
        return std::nullopt;
    }
}

}  // namespace

bool passes_shape_filters(const KnotConfiguration& config, const SimParams& params,
                          const GenerationOptions& options) {
    if (!config.is_valid(params.rest_length)) return false;
    Eigen::Vector2d lo = config[0].head<2>(), hi = lo;
    for (const auto& p : config.points()) {
        lo = lo.cwiseMin(p.head<2>());
        hi = hi.cwiseMax(p.head<2>());
    }
    const Eigen::Vector2d extent = hi - lo;
    if (extent.minCoeff() <= 0.0 || extent.maxCoeff() / extent.minCoeff() > options.max_aspect_ratio) return false;

    const std::size_t n = config.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;
            if ((config[i] - config[j]).norm() < params.bead_radius) return false;
        }
    }
    return true;
}

bool survives_reset_noise(const KnotConfiguration& config, const SimParams& params, Rng& rng,
                          const GenerationOptions& options) {
    GaussCode code;
    try {
        code = compute_gauss_code(config);
    } catch (const DegenerateProjection&) {
        return false;
    }
    const bool strict = static_cast<int>(crossing_count(code)) <= options.strict_noise_max_x;
    const int trials = strict ? options.strict_noise_trials : options.noise_trials;
    const int needed = strict ? options.strict_noise_trials : options.noise_keep;
    int kept = 0;
    for (int trial = 0; trial < trials; ++trial) {
        const KnotConfiguration noised = apply_reset_noise(config, options.noise_scale, rng, params.rest_length);
        try {
            kept += compute_gauss_code(noised) == code;
        } catch (const DegenerateProjection&) {
        }
    }
    return kept >= needed;
}

std::vector<KnotConfiguration> generate_configurations(int target_x, std::size_t count, const SimParams& params,
                                                       Rng& rng, const GenerationOptions& options,
                                                       std::uint64_t* steps_used) {
    if (target_x < 0) throw ValidationError("target crossing count must be non-negative");
    const std::size_t target = static_cast<std::size_t>(target_x);
    const KnotConfiguration loop = make_circle(kDefaultBeadCount, params.rest_length);

    std::vector<KnotConfiguration> out;
    std::uint64_t used = 0;
    RopeState walk = RopeState::at_rest(loop);
    int walk_steps = 0;
    auto next_gap = [&] { return 1 + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(options.max_gap))); };
    int gap = next_gap();
    int since_snapshot = 0;

    while (out.size() < count) {
        if (used >= options.step_budget) {
            throw GenerationTimeout("collected " + std::to_string(out.size()) + "/" + std::to_string(count) +
                                    " configurations with #X=" + std::to_string(target_x) + " in " +
                                    std::to_string(options.step_budget) + " steps");
        }
        if (walk_steps >= options.max_walk_steps) {
            walk = RopeState::at_rest(loop);
            walk_steps = 0;
        }
        walk = random_step(walk, random_action(rng), params);
        ++used;
        ++walk_steps;
        ++since_snapshot;

        const auto x = crossings_of(walk.positions);
        if (!x) continue;
        if (*x > target + 3) {
            walk = RopeState::at_rest(loop);
            walk_steps = 0;
            continue;
        }
        if (*x != target || since_snapshot < gap) continue;

        RopeState settled = walk;
        for (int f = 0; f < options.settle_frames; ++f) settled = step_frame(settled, 0, Vec3::Zero(), params);
        used += static_cast<std::uint64_t>(options.settle_frames);
        double max_speed = 0.0;
        for (const auto& v : settled.velocities) max_speed = std::max(max_speed, v.norm());
        if (max_speed >= options.settle_speed) continue;
        if (crossings_of(settled.positions) != target) continue;
        if (!passes_shape_filters(settled.positions, params, options)) continue;
        Rng noise_rng(rng());
        if (!survives_reset_noise(settled.positions, params, noise_rng, options)) continue;

        out.push_back(settled.positions);
        walk = RopeState::at_rest(loop);
        walk_steps = 0;
        since_snapshot = 0;
        gap = next_gap();
    }
    if (steps_used) *steps_used = used;
    return out;
}

SplitConfigs split_configs(std::vector<KnotConfiguration> configs, double train_fraction) {
    const auto n_train = static_cast<std::size_t>(std::ceil(static_cast<double>(configs.size()) * train_fraction));
    SplitConfigs out;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        (i < n_train ? out.train : out.test).push_back(std::move(configs[i]));
    }
    return out;
}

void add_split_to_pool(ConfigPool& pool, int x, const SplitConfigs& split) {
    auto add_all = [&](const std::vector<KnotConfiguration>& list, Split s) {
        for (std::size_t i = 0; i < list.size(); ++i) {
            char name[64];
            std::snprintf(name, sizeof(name), "x%d/%s/%03zu.knot", x, to_string(s).c_str(), i);
            pool.add(x, s, list[i], name);
        }
    };
    add_all(split.train, Split::train);
    add_all(split.test, Split::test);
}

std::size_t default_pool_count(int x) { return x == 0 ? 17 : 40; }

}  // namespace knotsim
