#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "knotsim/environment.hpp"
#include "knotsim/random.hpp"

namespace knotsim {

class Policy {
public:
    virtual ~Policy() = default;
    virtual Action act(const Observation& observation, const StepInfo& info) = 0;
};

/// Uniform on [-1, 1]^6.
class RandomPolicy : public Policy {
public:
    explicit RandomPolicy(std::uint64_t seed) : rng_(seed) {}
    Action act(const Observation&, const StepInfo&) override;

private:
    Rng rng_;
};

class ZeroPolicy : public Policy {
public:
    Action act(const Observation&, const StepInfo&) override { return {}; }
};

/// Replays a fixed action sequence, then zeros.
class ReplayPolicy : public Policy {
public:
    explicit ReplayPolicy(std::vector<Action> actions) : actions_(std::move(actions)) {}
    Action act(const Observation&, const StepInfo&) override;

private:
    std::vector<Action> actions_;
    std::size_t next_ = 0;
};

/// Builds the policy for one episode from that episode's seed.
using PolicyFactory = std::function<std::unique_ptr<Policy>(std::uint64_t episode_seed)>;
PolicyFactory random_policy_factory();

struct EnvSpec {
    TaskSpec task;
    std::shared_ptr<const ConfigPool> pool;
    SimParams params;
    int horizon = kDefaultHorizon;
    bool render = true;
};

struct EpisodeRecord {
    std::size_t step = 0;
    std::array<double, 6> action{};
    double reward = 0.0;
    bool terminated = false;
    bool truncated = false;
    std::string gauss_code_current;
    std::string gauss_code_goal;
    bool diverged = false;
};

struct EpisodeLog {
    std::uint64_t seed = 0;
    std::vector<EpisodeRecord> records;
    std::string error;  // set when the episode aborted with an environment error

    bool success() const { return !records.empty() && records.back().terminated; }
    double total_reward() const;
    std::size_t length() const { return records.size(); }
    /// One `key=value` record per line.
    std::string to_text() const;
};

std::string format_record(const EpisodeRecord& r);

/// Episode seed for index i under a master seed.
inline std::uint64_t episode_seed(std::uint64_t master_seed, std::uint64_t i) { return master_seed ^ i; }

/// Seed used for the policy of an episode.
inline std::uint64_t policy_seed(std::uint64_t episode_seed) { return mix_seed(episode_seed, 0x9011c7); }

EpisodeLog rollout(Policy& policy, const EnvSpec& spec, std::uint64_t seed);

struct EvalReport {
    std::string task;
    std::string x_setting;
    std::string split;
    std::size_t episodes = 0;
    std::size_t success_count = 0;
    double success_rate = 0.0;
    double mean_episode_length = 0.0;
    double wall_time = 0.0;  // s

    /// `key=value` fields on one line; wall_time is omitted when
    /// `with_timing` is false so reports can be compared byte for byte.
    std::string to_record(bool with_timing = true) const;
};

struct EvalResult {
    EvalReport report;
    std::vector<EpisodeLog> logs;
};

/// N seeded episodes spread over `threads` workers. Episode i always uses
/// episode_seed(master_seed, i), so results do not depend on scheduling.
EvalResult evaluate(const PolicyFactory& policy, const EnvSpec& spec, std::size_t episodes,
                    std::uint64_t master_seed, unsigned threads = 1);

std::string describe_x_setting(const TaskSpec& spec);

struct GeneralizationMatrix {
    std::vector<int> train_x;
    std::vector<int> eval_x;
    std::vector<std::vector<EvalReport>> cells;  // [row = train_x][col = eval_x]
};

/// One row per policy-training crossing count; every cell is evaluated on
/// the test split.
GeneralizationMatrix generalization_matrix(const std::function<PolicyFactory(int train_x)>& policy_for,
                                           Task task, const std::vector<int>& train_x,
                                           const std::vector<int>& eval_x, std::size_t episodes_per_cell,
                                           std::shared_ptr<const ConfigPool> pool, const SimParams& params,
                                           std::uint64_t master_seed, unsigned threads = 1,
                                           int horizon = kDefaultHorizon);

/// Writes the reset observation of episode `seed` as a 256x128 PNG and a
/// sidecar `<path>.txt` holding both Gauss codes. Throws IoError.
void export_observation(const EnvSpec& spec, std::uint64_t seed, const std::filesystem::path& path);

/// Wilson score interval at 95%.
std::pair<double, double> wilson_interval(std::size_t successes, std::size_t n, double z = 1.959963984540054);

}  // namespace knotsim
