// knotsim: pool generation, rollouts, evaluation, and observation export.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "knotsim/config_io.hpp"
#include "knotsim/environment.hpp"
#include "knotsim/errors.hpp"
#include "knotsim/gauss_code.hpp"
#include "knotsim/harness.hpp"
#include "knotsim/pool.hpp"

namespace {

using namespace knotsim;

constexpr int kExitOk = 0;
constexpr int kExitBadArgs = 2;
constexpr int kExitPoolIo = 3;
constexpr int kExitDiverged = 4;

struct BadArguments : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EnvOptions {
    std::string pool_dir;
    std::string task = "unknot";
    int x = -1;
    std::string split = "train";
    std::string params_file;
    int horizon = kDefaultHorizon;
    std::string policy = "random";
    std::string actions_file;

    void add_to(CLI::App* cmd, bool with_policy) {
        cmd->add_option("--pool", pool_dir, "Pool directory (default: $KNOTSIM_DATA/pool)");
        cmd->add_option("--task", task, "unknot, tie, or convert");
        cmd->add_option("--x", x, "Crossing setting; omit for the task's default sets");
        cmd->add_option("--split", split, "train or test");
        cmd->add_option("--params", params_file, "Simulation parameter file (key = value)");
        cmd->add_option("--horizon", horizon, "Episode step limit")->check(CLI::PositiveNumber);
        if (with_policy) {
            cmd->add_option("--policy", policy, "random, zero, or replay");
            cmd->add_option("--actions", actions_file, "Action file for --policy replay (6 numbers per line)");
        }
    }

    std::string resolved_pool_dir() const {
        if (!pool_dir.empty()) return pool_dir;
        if (const char* data = std::getenv("KNOTSIM_DATA")) return std::string(data) + "/pool";
        throw BadArguments("--pool is required when KNOTSIM_DATA is not set");
    }

    EnvSpec env_spec() const {
        Task t;
        Split s;
        try {
            t = parse_task(task);
            s = parse_split(split);
        } catch (const ValidationError& e) {
            throw BadArguments(e.what());
        }
        EnvSpec spec;
        spec.task = x >= 0 ? TaskSpec::at_crossings(t, x, s) : TaskSpec::defaults(t, s);
        spec.params = params_file.empty() ? SimParams{} : SimParams::load(params_file);
        spec.horizon = horizon;
        spec.pool = std::make_shared<const ConfigPool>(ConfigPool::load(resolved_pool_dir()));
        return spec;
    }

    PolicyFactory policy_factory() const {
        if (policy == "random") return random_policy_factory();
        if (policy == "zero") return [](std::uint64_t) { return std::make_unique<ZeroPolicy>(); };
        if (policy == "replay") {
            if (actions_file.empty()) throw BadArguments("--policy replay needs --actions");
            std::ifstream in(actions_file);
            if (!in) throw IoError("cannot open " + actions_file);
            std::vector<Action> actions;
            std::string line;
            while (std::getline(in, line)) {
                if (line.empty() || line[0] == '#') continue;
                std::istringstream row(line);
                std::array<double, 6> a{};
                for (auto& v : a) {
                    if (!(row >> v)) throw BadArguments("bad action line in " + actions_file + ": " + line);
                    if (row.peek() == ',') row.ignore();
                }
                actions.push_back(Action::from_array(a));
            }
            return [actions](std::uint64_t) { return std::make_unique<ReplayPolicy>(actions); };
        }
        throw BadArguments("unknown policy '" + policy + "'");
    }
};

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw BadArguments("bad integer list '" + text + "'");
        }
    }
    if (out.empty()) throw BadArguments("empty integer list");
    return out;
}

void print_report_table(std::ostream& out, const std::vector<EvalReport>& reports) {
    char line[256];
    std::snprintf(line, sizeof(line), "%-8s %-12s %-6s %8s %8s %8s %9s %9s\n", "task", "#X", "split", "N",
                  "success", "rate", "mean_len", "wall_s");
    out << line;
    for (const auto& r : reports) {
        std::snprintf(line, sizeof(line), "%-8s %-12s %-6s %8zu %8zu %8.3f %9.2f %9.2f\n", r.task.c_str(),
                      r.x_setting.c_str(), r.split.c_str(), r.episodes, r.success_count, r.success_rate,
                      r.mean_episode_length, r.wall_time);
        out << line;
    }
}

void write_logs(const std::string& dir, const std::vector<EpisodeLog>& logs) {
    if (dir.empty()) return;
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < logs.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "episode_%05zu.log", i);
        std::ofstream out(std::filesystem::path(dir) / name, std::ios::trunc);
        if (!out) throw IoError("cannot write episode log under " + dir);
        out << logs[i].to_text();
    }
}

int run_gen_pool(const std::string& out_dir, std::uint64_t seed, const std::string& xs_text,
                 const std::string& params_file, std::uint64_t budget) {
    const SimParams params = params_file.empty() ? SimParams{} : SimParams::load(params_file);
    GenerationOptions options;
    options.step_budget = budget;
    const std::vector<int> xs = parse_int_list(xs_text);
    for (int x : xs) {
        if (x < 0) throw BadArguments("crossing counts must be non-negative");
    }
    // Each crossing count has its own seed stream, so the counts are
    // generated concurrently without affecting the output.
    std::vector<std::vector<KnotConfiguration>> generated(xs.size());
    std::vector<std::uint64_t> steps(xs.size(), 0);
    std::vector<std::exception_ptr> errors(xs.size());
    {
        std::vector<std::jthread> workers;
        for (std::size_t k = 0; k < xs.size(); ++k) {
            workers.emplace_back([&, k] {
                try {
                    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(xs[k])));
                    generated[k] = generate_configurations(xs[k], default_pool_count(xs[k]), params, rng, options,
                                                           &steps[k]);
                } catch (...) {
                    errors[k] = std::current_exception();
                }
            });
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    ConfigPool pool;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const auto split = split_configs(std::move(generated[k]));
        add_split_to_pool(pool, xs[k], split);
        std::cout << "#X=" << xs[k] << " train=" << split.train.size() << " test=" << split.test.size()
                  << " steps=" << steps[k] << '\n';
    }
    pool.save(out_dir);
    // Reload to verify every file against the oracle.
    const ConfigPool reloaded = ConfigPool::load(out_dir);
    std::cout << "wrote " << reloaded.size() << " verified configurations to " << out_dir << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"knotsim: goal-conditioned knot manipulation environment"};
    app.require_subcommand(1);
    app.allow_windows_style_options(false);

    std::uint64_t seed = 0;
    unsigned threads = 1;

    // gen-pool
    auto* gen = app.add_subcommand("gen-pool", "Generate a verified configuration pool");
    std::string gen_out;
    std::string gen_xs = "0,1,2,3,4";
    std::string gen_params;
    std::uint64_t gen_budget = GenerationOptions{}.step_budget;
    gen->add_option("--out", gen_out, "Output directory")->required();
    gen->add_option("--x", gen_xs, "Comma-separated crossing counts");
    gen->add_option("--seed", seed, "Master seed");
    gen->add_option("--params", gen_params, "Simulation parameter file");
    gen->add_option("--step-budget", gen_budget, "Env steps allowed per crossing count");

    // rollout
    auto* roll = app.add_subcommand("rollout", "Run one episode and print its log");
    EnvOptions roll_env;
    std::string roll_out;
    roll_env.add_to(roll, true);
    roll->add_option("--seed", seed, "Episode seed");
    roll->add_option("--out", roll_out, "Write the log here instead of stdout");

    // eval
    auto* ev = app.add_subcommand("eval", "Success rate over N seeded episodes");
    EnvOptions ev_env;
    std::size_t ev_episodes = 256;
    std::string ev_logs;
    ev_env.add_to(ev, true);
    ev->add_option("--episodes", ev_episodes, "Number of episodes")->check(CLI::PositiveNumber);
    ev->add_option("--seed", seed, "Master seed");
    ev->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    ev->add_option("--logs", ev_logs, "Directory for per-episode logs");

    // gen-matrix
    auto* mat = app.add_subcommand("gen-matrix", "Generalization matrix on the test split");
    EnvOptions mat_env;
    std::string mat_train = "2,3,4", mat_eval = "2,3,4";
    std::size_t mat_episodes = 128;
    mat_env.add_to(mat, true);
    mat->add_option("--train-x", mat_train, "Policy training crossing counts (rows)");
    mat->add_option("--eval-x", mat_eval, "Evaluation crossing counts (columns)");
    mat->add_option("--episodes", mat_episodes, "Episodes per cell")->check(CLI::PositiveNumber);
    mat->add_option("--seed", seed, "Master seed");
    mat->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

    // render
    auto* ren = app.add_subcommand("render", "Export the reset observation as PNG");
    EnvOptions ren_env;
    std::string ren_out;
    ren_env.add_to(ren, false);
    ren->add_option("--seed", seed, "Episode seed");
    ren->add_option("--out", ren_out, "PNG path")->required();

    // gauss
    auto* gauss = app.add_subcommand("gauss", "Print the Gauss code of configuration files");
    std::vector<std::string> gauss_files;
    gauss->add_option("--config", gauss_files, "Configuration file(s)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadArgs;
    }

    try {
        if (*gen) return run_gen_pool(gen_out, seed, gen_xs, gen_params, gen_budget);

        if (*roll) {
            const EnvSpec spec = roll_env.env_spec();
            auto policy = roll_env.policy_factory()(seed);
            const EpisodeLog log = rollout(*policy, spec, seed);
            if (roll_out.empty()) {
                std::cout << log.to_text();
            } else {
                std::ofstream out(roll_out, std::ios::trunc);
                if (!out) throw IoError("cannot write " + roll_out);
                out << log.to_text();
            }
            return kExitOk;
        }

        if (*ev) {
            const EnvSpec spec = ev_env.env_spec();
            const EvalResult result = evaluate(ev_env.policy_factory(), spec, ev_episodes, seed, threads);
            write_logs(ev_logs, result.logs);
            print_report_table(std::cout, {result.report});
            std::cout << '\n' << result.report.to_record() << '\n';
            return kExitOk;
        }

        if (*mat) {
            EnvSpec base = mat_env.env_spec();
            const PolicyFactory factory = mat_env.policy_factory();
            const auto matrix = generalization_matrix([&](int) { return factory; }, base.task.task,
                                                      parse_int_list(mat_train), parse_int_list(mat_eval),
                                                      mat_episodes, base.pool, base.params, seed, threads,
                                                      base.horizon);
            std::printf("success rate, rows = training #X, columns = eval #X (test split)\n%8s", "train\\eval");
            for (int x : matrix.eval_x) std::printf(" %8d", x);
            std::printf("\n");
            for (std::size_t r = 0; r < matrix.train_x.size(); ++r) {
                std::printf("%10d", matrix.train_x[r]);
                for (const auto& cell : matrix.cells[r]) std::printf(" %8.3f", cell.success_rate);
                std::printf("\n");
            }
            std::printf("\n");
            std::fflush(stdout);
            for (std::size_t r = 0; r < matrix.train_x.size(); ++r) {
                for (const auto& cell : matrix.cells[r]) {
                    std::cout << "train_x=" << matrix.train_x[r] << ' ' << cell.to_record() << '\n';
                }
            }
            return kExitOk;
        }

        if (*ren) {
            export_observation(ren_env.env_spec(), seed, ren_out);
            std::cout << "wrote " << ren_out << " and " << ren_out << ".txt\n";
            return kExitOk;
        }

        if (*gauss) {
            for (const auto& file : gauss_files) {
                const KnotConfiguration config = load_configuration(file);
                std::cout << file << ' ' << format_code(compute_gauss_code(config)) << '\n';
            }
            return kExitOk;
        }
    } catch (const BadArguments& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadArgs;
    } catch (const SimulationDiverged& e) {
        std::cerr << "error: simulation diverged: " << e.what() << '\n';
        return kExitDiverged;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitPoolIo;
    }
    return kExitBadArgs;
}
