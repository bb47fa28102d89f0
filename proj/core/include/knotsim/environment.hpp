#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "knotsim/gauss_code.hpp"
#include "knotsim/geometry.hpp"
#include "knotsim/physics.hpp"
#include "knotsim/renderer.hpp"

namespace knotsim {

enum class Task { unknot, tie, convert };
enum class Split { train, test };

std::string to_string(Task task);
std::string to_string(Split split);
Task parse_task(const std::string& name);
Split parse_split(const std::string& name);

struct TaskSpec {
    Task task = Task::unknot;
    std::set<int> initial_x;
    std::set<int> goal_x;
    Split split = Split::train;

    /// Default crossing sets: unknot {2,3,4} -> {0}, tie {0} -> {2,3,4},
    /// convert {1,2,3} -> {2,3,4}.
    static TaskSpec defaults(Task task, Split split = Split::train);

    /// Narrows the side the task varies to a single crossing count:
    /// unknot pins the initial set, tie and convert pin the goal set.
    static TaskSpec at_crossings(Task task, int x, Split split = Split::train);
};

struct PoolEntry {
    std::filesystem::path path;  // relative to the pool root, empty for in-memory entries
    KnotConfiguration config;
    GaussCode code;
};

/// Configurations grouped by crossing count and split.
class ConfigPool {
public:
    /// Adds a configuration after checking that its code has `x` crossings.
    void add(int x, Split split, KnotConfiguration config, std::filesystem::path path = {});

    const std::vector<PoolEntry>& entries(int x, Split split) const;
    std::set<int> crossing_counts() const;
    std::size_t size() const;

    /// Reads `manifest.txt` under `root` and verifies every file's crossing
    /// count. Throws IoError or ValidationError.
    static ConfigPool load(const std::filesystem::path& root);

    /// Writes every configuration and the manifest under `root`.
    void save(const std::filesystem::path& root) const;

    std::string manifest_text() const;

private:
    std::map<std::pair<int, Split>, std::vector<PoolEntry>> groups_;
};

struct StepInfo {
    std::string gauss_code_current;
    std::string gauss_code_goal;
    std::size_t step_index = 0;
    bool diverged = false;
};

struct StepResult {
    Observation observation;
    double reward = 0.0;
    bool terminated = false;
    bool truncated = false;
    StepInfo info;
};

inline constexpr double kSuccessReward = 5.0;
inline constexpr double kTimeoutPenalty = -5.0;
inline constexpr int kDefaultHorizon = 50;
inline constexpr double kResetNoiseScale = 0.015;
inline constexpr double kOraclePerturbation = 1e-7;
inline constexpr int kOracleRetries = 5;

/// Gauss code of `config`; on a degenerate projection retries with seeded
/// perturbations of a copy. Returns nullopt if every retry is degenerate.
std::optional<GaussCode> robust_gauss_code(const KnotConfiguration& config, std::uint64_t seed,
                                           int retries = kOracleRetries, double magnitude = kOraclePerturbation);

/// One goal-conditioned knot-manipulation episode at a time.
class KnotEnv {
public:
    KnotEnv(TaskSpec spec, std::shared_ptr<const ConfigPool> pool, SimParams params = {},
            int horizon = kDefaultHorizon, bool render = true);

    /// Throws EmptyPool when the pool has no configuration for the task.
    Observation reset(std::uint64_t seed);

    /// Throws EpisodeFinished after termination or truncation.
    StepResult step(const Action& action);

    const WorldState& state() const noexcept { return state_; }
    const TaskSpec& spec() const noexcept { return spec_; }
    const SimParams& params() const noexcept { return params_; }
    int horizon() const noexcept { return horizon_; }
    bool done() const noexcept { return done_; }
    const GaussCode& goal_code() const noexcept { return goal_code_; }
    std::string goal_code_text() const { return format_code(goal_code_); }

    Observation observation() const;

private:
    const PoolEntry& sample(const std::set<int>& xs, Rng& rng) const;

    TaskSpec spec_;
    std::shared_ptr<const ConfigPool> pool_;
    SimParams params_;
    int horizon_;
    bool render_;

    WorldState state_;
    GaussCode goal_code_;
    std::uint64_t episode_seed_ = 0;
    bool done_ = true;
};

}  // namespace knotsim
