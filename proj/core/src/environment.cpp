#include "knotsim/environment.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "knotsim/config_io.hpp"
#include "knotsim/errors.hpp"

namespace knotsim {

std::string to_string(Task task) {
    switch (task) {
        case Task::unknot: return "unknot";
        case Task::tie: return "tie";
        case Task::convert: return "convert";
    }
    return "?";
}

std::string to_string(Split split) { return split == Split::train ? "train" : "test"; }

Task parse_task(const std::string& name) {
    if (name == "unknot") return Task::unknot;
    if (name == "tie") return Task::tie;
    if (name == "convert") return Task::convert;
    throw ValidationError("unknown task '" + name + "' (expected unknot, tie, or convert)");
}

Split parse_split(const std::string& name) {
    if (name == "train") return Split::train;
    if (name == "test") return Split::test;
    throw ValidationError("unknown split '" + name + "' (expected train or test)");
}

TaskSpec TaskSpec::defaults(Task task, Split split) {
    switch (task) {
        case Task::unknot: return {task, {2, 3, 4}, {0}, split};
        case Task::tie: return {task, {0}, {2, 3, 4}, split};
        case Task::convert: return {task, {1, 2, 3}, {2, 3, 4}, split};
    }
    throw ValidationError("bad task");
}

TaskSpec TaskSpec::at_crossings(Task task, int x, Split split) {
    TaskSpec spec = defaults(task, split);
    if (task == Task::unknot) {
        spec.initial_x = {x};
    } else {
        spec.goal_x = {x};
        if (task == Task::convert) {
            // Initial knots sit one crossing below the goal, matching the
            // pairing of the default sets.
            spec.initial_x = {x - 1};
        }
    }
    return spec;
}

// --- ConfigPool -------------------------------------------------------------

void ConfigPool::add(int x, Split split, KnotConfiguration config, std::filesystem::path path) {
    config.validate();
    GaussCode code = compute_gauss_code(config);
    if (static_cast<int>(crossing_count(code)) != x) {
        throw ValidationError("configuration " + path.string() + " has " + std::to_string(crossing_count(code)) +
                              " crossings, pool claims " + std::to_string(x));
    }
    groups_[{x, split}].push_back({std::move(path), std::move(config), std::move(code)});
}

const std::vector<PoolEntry>& ConfigPool::entries(int x, Split split) const {
    static const std::vector<PoolEntry> empty;
    const auto it = groups_.find({x, split});
    return it == groups_.end() ? empty : it->second;
}

std::set<int> ConfigPool::crossing_counts() const {
    std::set<int> out;
    for (const auto& [key, list] : groups_) out.insert(key.first);
    return out;
}

std::size_t ConfigPool::size() const {
    std::size_t n = 0;
    for (const auto& [key, list] : groups_) n += list.size();
    return n;
}

std::string ConfigPool::manifest_text() const {
    std::ostringstream out;
    out << "# knotsim pool manifest v1\n";
    for (const auto& [key, list] : groups_) {
        out << "[x=" << key.first << " split=" << to_string(key.second) << "]\n";
        for (const auto& e : list) out << e.path.generic_string() << '\n';
    }
    return out.str();
}

void ConfigPool::save(const std::filesystem::path& root) const {
    std::filesystem::create_directories(root);
    for (const auto& [key, list] : groups_) {
        for (const auto& e : list) {
            if (e.path.empty()) throw IoError("pool entry without a path cannot be saved");
            std::filesystem::create_directories((root / e.path).parent_path());
            save_configuration(e.config, root / e.path);
        }
    }
    std::ofstream out(root / "manifest.txt", std::ios::trunc);
    if (!out) throw IoError("cannot write " + (root / "manifest.txt").string());
    out << manifest_text();
}

ConfigPool ConfigPool::load(const std::filesystem::path& root) {
    const auto manifest = root / "manifest.txt";
    std::ifstream in(manifest);
    if (!in) throw IoError("cannot open pool manifest " + manifest.string());
    ConfigPool pool;
    std::optional<std::pair<int, Split>> group;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line[0] == '[') {
            int x = -1;
            char split_name[16] = {};
            if (std::sscanf(line.c_str(), "[x=%d split=%15[a-z]]", &x, split_name) != 2 || x < 0) {
                throw IoError(manifest.string() + ":" + std::to_string(line_no) + ": bad group header");
            }
            group = std::make_pair(x, parse_split(split_name));
            continue;
        }
        if (!group) throw IoError(manifest.string() + ":" + std::to_string(line_no) + ": path before group header");
        pool.add(group->first, group->second, load_configuration(root / line), line);
    }
    // Train and test must not share files.
    for (int x : pool.crossing_counts()) {
        for (const auto& a : pool.entries(x, Split::train)) {
            for (const auto& b : pool.entries(x, Split::test)) {
                if (a.path == b.path) throw ValidationError("file in both splits: " + a.path.string());
            }
        }
    }
    return pool;
}

// --- oracle -------------------------------------------------------------------

std::optional<GaussCode> robust_gauss_code(const KnotConfiguration& config, std::uint64_t seed, int retries,
                                           double magnitude) {
    try {
        return compute_gauss_code(config);
    } catch (const DegenerateProjection&) {
    }
    for (int attempt = 0; attempt < retries; ++attempt) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(attempt)));
        KnotConfiguration copy = config;
        for (auto& p : copy.points()) {
            for (int k = 0; k < 3; ++k) p[k] += uniform(rng, -magnitude, magnitude);
        }
        try {
            return compute_gauss_code(copy);
        } catch (const DegenerateProjection&) {
        }
    }
    return std::nullopt;
}

// --- KnotEnv ------------------------------------------------------------------

KnotEnv::KnotEnv(TaskSpec spec, std::shared_ptr<const ConfigPool> pool, SimParams params, int horizon, bool render)
    : spec_(std::move(spec)), pool_(std::move(pool)), params_(params), horizon_(horizon), render_(render) {
    params_.validate();
    if (!pool_) throw EmptyPool("no configuration pool");
    if (horizon_ < 1) throw ValidationError("horizon must be at least 1");
}

const PoolEntry& KnotEnv::sample(const std::set<int>& xs, Rng& rng) const {
    std::size_t total = 0;
    for (int x : xs) total += pool_->entries(x, spec_.split).size();
    if (total == 0) {
        std::string list;
        for (int x : xs) list += (list.empty() ? "" : ",") + std::to_string(x);
        throw EmptyPool("pool has no " + to_string(spec_.split) + " configurations for #X in {" + list + "}");
    }
    std::size_t pick = uniform_index(rng, total);
    for (int x : xs) {
        const auto& list = pool_->entries(x, spec_.split);
        if (pick < list.size()) return list[pick];
        pick -= list.size();
    }
    throw EmptyPool("unreachable");
}

Observation KnotEnv::reset(std::uint64_t seed) {
    Rng rng(seed);
    episode_seed_ = seed;

    const PoolEntry* initial = &sample(spec_.initial_x, rng);
    const PoolEntry* goal = &sample(spec_.goal_x, rng);
    for (int attempt = 0; attempt < 10 && codes_equal(initial->code, goal->code); ++attempt) {
        initial = &sample(spec_.initial_x, rng);
        goal = &sample(spec_.goal_x, rng);
    }

    KnotConfiguration start = initial->config;
    const std::size_t x0 = crossing_count(initial->code);
    for (int attempt = 0; attempt < 10; ++attempt) {
        KnotConfiguration noised = apply_reset_noise(initial->config, kResetNoiseScale, rng, params_.rest_length);
        const auto code = robust_gauss_code(noised, mix_seed(seed, 1000 + static_cast<std::uint64_t>(attempt)));
        if (code && crossing_count(*code) == x0) {
            start = std::move(noised);
            break;
        }
    }

    state_.velocities.assign(start.size(), Vec3::Zero());
    state_.manipulated = std::move(start);
    state_.goal = goal->config;
    state_.step_index = 0;
    goal_code_ = goal->code;
    done_ = false;
    return observation();
}

Observation KnotEnv::observation() const { return render_ ? render_observation(state_) : Observation{}; }

StepResult KnotEnv::step(const Action& raw_action) {
    if (done_) throw EpisodeFinished("step called on a finished episode");

    const Action action = Action::from_array(raw_action.to_array());
    const Workspace workspace = Workspace::around(center_of_mass(state_.manipulated));
    const PhysicalAction physical = denormalize_action(action, workspace, params_.f_max);
    const std::size_t grasp = nearest_key_point(state_.manipulated, physical.grasp_point);

    StepResult result;
    result.info.gauss_code_goal = format_code(goal_code_);
    const std::size_t next_index = state_.step_index + 1;
    try {
        RopeState rope{state_.manipulated, state_.velocities};
        rope = step_frame(rope, grasp, physical.force, params_);
        state_.manipulated = std::move(rope.positions);
        state_.velocities = std::move(rope.velocities);
    } catch (const SimulationDiverged&) {
        state_.step_index = next_index;
        result.reward = kTimeoutPenalty;
        result.truncated = true;
        result.info.diverged = true;
        result.info.step_index = state_.step_index;
        result.info.gauss_code_current = "diverged";
        result.observation = observation();
        done_ = true;
        return result;
    }
    state_.step_index = next_index;

    const auto code = robust_gauss_code(state_.manipulated, mix_seed(episode_seed_, 0x5eed0000 + next_index));
    result.info.gauss_code_current = code ? format_code(*code) : "degenerate";
    result.info.step_index = state_.step_index;
    if (code && codes_equal(*code, goal_code_)) {
        result.reward = kSuccessReward;
        result.terminated = true;
    } else if (static_cast<int>(state_.step_index) >= horizon_) {
        result.reward = kTimeoutPenalty;
        result.truncated = true;
    }
    done_ = result.terminated || result.truncated;
    result.observation = observation();
    return result;
}

}  // namespace knotsim
