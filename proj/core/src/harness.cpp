#include "knotsim/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "knotsim/errors.hpp"

namespace knotsim {
namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string join_set(const std::set<int>& xs) {
    std::string out;
    for (int x : xs) out += (out.empty() ? "" : ",") + std::to_string(x);
    return out;
}

}  // namespace

Action RandomPolicy::act(const Observation&, const StepInfo&) {
    Action a;
    for (int k = 0; k < 3; ++k) a.location[k] = uniform(rng_, -1.0, 1.0);
    for (int k = 0; k < 3; ++k) a.force[k] = uniform(rng_, -1.0, 1.0);
    return a;
}

Action ReplayPolicy::act(const Observation&, const StepInfo&) {
    return next_ < actions_.size() ? actions_[next_++] : Action{};
}

PolicyFactory random_policy_factory() {
    return [](std::uint64_t seed) { return std::make_unique<RandomPolicy>(policy_seed(seed)); };
}

double EpisodeLog::total_reward() const {
    double total = 0.0;
    for (const auto& r : records) total += r.reward;
    return total;
}

std::string format_record(const EpisodeRecord& r) {
    std::string out = "step=" + std::to_string(r.step) + " action=";
    for (std::size_t k = 0; k < r.action.size(); ++k) {
        if (k) out += ',';
        out += format_double(r.action[k]);
    }
    out += " reward=" + format_double(r.reward);
    out += " terminated=" + std::string(r.terminated ? "1" : "0");
    out += " truncated=" + std::string(r.truncated ? "1" : "0");
    out += " gauss_code_current=" + r.gauss_code_current;
    out += " gauss_code_goal=" + r.gauss_code_goal;
    if (r.diverged) out += " diverged=1";
    return out;
}

std::string EpisodeLog::to_text() const {
    std::string out;
    for (const auto& r : records) out += format_record(r) + '\n';
    if (!error.empty()) out += "error=" + error + '\n';
    return out;
}

EpisodeLog rollout(Policy& policy, const EnvSpec& spec, std::uint64_t seed) {
    EpisodeLog log;
    log.seed = seed;
    KnotEnv env(spec.task, spec.pool, spec.params, spec.horizon, spec.render);
    Observation obs = env.reset(seed);
    StepInfo info;
    info.gauss_code_goal = env.goal_code_text();
    while (!env.done()) {
        const Action action = Action::from_array(policy.act(obs, info).to_array());
        StepResult result;
        try {
            result = env.step(action);
        } catch (const Error& e) {
            log.error = e.what();
            break;
        }
        EpisodeRecord rec;
        rec.step = result.info.step_index;
        rec.action = action.to_array();
        rec.reward = result.reward;
        rec.terminated = result.terminated;
        rec.truncated = result.truncated;
        rec.gauss_code_current = result.info.gauss_code_current;
        rec.gauss_code_goal = result.info.gauss_code_goal;
        rec.diverged = result.info.diverged;
        log.records.push_back(std::move(rec));
        obs = std::move(result.observation);
        info = std::move(result.info);
    }
    return log;
}

std::string EvalReport::to_record(bool with_timing) const {
    std::ostringstream out;
    out << "task=" << task << " x=" << x_setting << " split=" << split << " episodes=" << episodes
        << " success_count=" << success_count << " success_rate=" << format_double(success_rate)
        << " mean_episode_length=" << format_double(mean_episode_length);
    if (with_timing) out << " wall_time=" << format_double(wall_time);
    return out.str();
}

std::string describe_x_setting(const TaskSpec& spec) {
    return join_set(spec.initial_x) + "->" + join_set(spec.goal_x);
}

EvalResult evaluate(const PolicyFactory& policy, const EnvSpec& spec, std::size_t episodes,
                    std::uint64_t master_seed, unsigned threads) {
    if (episodes == 0) throw ValidationError("evaluate needs at least one episode");
    const auto start = std::chrono::steady_clock::now();
    EvalResult result;
    result.logs.resize(episodes);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < episodes; i = next.fetch_add(1)) {
            const std::uint64_t seed = episode_seed(master_seed, i);
            auto p = policy(seed);
            result.logs[i] = rollout(*p, spec, seed);
        }
    };
    threads = std::max(1u, threads);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    for (const auto& log : result.logs) {
        if (!log.error.empty() && log.records.empty()) throw Error("episode " + std::to_string(log.seed) + ": " + log.error);
    }

    auto& r = result.report;
    r.task = to_string(spec.task.task);
    r.x_setting = describe_x_setting(spec.task);
    r.split = to_string(spec.task.split);
    r.episodes = episodes;
    std::size_t total_length = 0;
    for (const auto& log : result.logs) {
        r.success_count += log.success() ? 1 : 0;
        total_length += log.length();
    }
    r.success_rate = static_cast<double>(r.success_count) / static_cast<double>(episodes);
    r.mean_episode_length = static_cast<double>(total_length) / static_cast<double>(episodes);
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

GeneralizationMatrix generalization_matrix(const std::function<PolicyFactory(int)>& policy_for, Task task,
                                           const std::vector<int>& train_x, const std::vector<int>& eval_x,
                                           std::size_t episodes_per_cell, std::shared_ptr<const ConfigPool> pool,
                                           const SimParams& params, std::uint64_t master_seed, unsigned threads,
                                           int horizon) {
    GeneralizationMatrix m;
    m.train_x = train_x;
    m.eval_x = eval_x;
    for (std::size_t row = 0; row < train_x.size(); ++row) {
        const PolicyFactory factory = policy_for(train_x[row]);
        std::vector<EvalReport> cells;
        for (std::size_t col = 0; col < eval_x.size(); ++col) {
            EnvSpec spec{TaskSpec::at_crossings(task, eval_x[col], Split::test), pool, params, horizon, true};
            const std::uint64_t cell_seed = mix_seed(master_seed, row * eval_x.size() + col);
            cells.push_back(evaluate(factory, spec, episodes_per_cell, cell_seed, threads).report);
        }
        m.cells.push_back(std::move(cells));
    }
    return m;
}

void export_observation(const EnvSpec& spec, std::uint64_t seed, const std::filesystem::path& path) {
    KnotEnv env(spec.task, spec.pool, spec.params, spec.horizon, true);
    const Observation obs = env.reset(seed);
    write_png(obs, path);
    const std::filesystem::path sidecar = path.string() + ".txt";
    std::ofstream out(sidecar, std::ios::trunc);
    if (!out) throw IoError("cannot write " + sidecar.string());
    const auto current = robust_gauss_code(env.state().manipulated, seed);
    out << "seed=" << seed << '\n'
        << "gauss_code_current=" << (current ? format_code(*current) : "degenerate") << '\n'
        << "gauss_code_goal=" << env.goal_code_text() << '\n';
    if (!out) throw IoError("write failed: " + sidecar.string());
}

std::pair<double, double> wilson_interval(std::size_t successes, std::size_t n, double z) {
    if (n == 0) return {0.0, 1.0};
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

}  // namespace knotsim
