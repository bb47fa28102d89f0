#include <benchmark/benchmark.h>

#include <filesystem>
#include <memory>

#include "knotsim/config_io.hpp"
#include "knotsim/environment.hpp"
#include "knotsim/gauss_code.hpp"
#include "knotsim/harness.hpp"
#include "knotsim/physics.hpp"
#include "knotsim/renderer.hpp"

namespace {

using namespace knotsim;

const std::filesystem::path kData = KNOTSIM_DATA_DIR;

KnotConfiguration tie2() { return load_configuration(kData / "fixtures" / "tie2_a.knot"); }

void BM_InternalForces(benchmark::State& state) {
    const RopeState rope = RopeState::at_rest(tie2());
    const SimParams params;
    for (auto _ : state) benchmark::DoNotOptimize(internal_forces(rope, params));
}
BENCHMARK(BM_InternalForces);

void BM_StepFrame(benchmark::State& state) {
    RopeState rope = RopeState::at_rest(tie2());
    const SimParams params;
    for (auto _ : state) {
        rope = step_frame(rope, 7, Vec3(0.3, -0.2, 0.1), params);
        benchmark::DoNotOptimize(rope);
    }
}
BENCHMARK(BM_StepFrame);

void BM_GaussCode(benchmark::State& state) {
    const KnotConfiguration config = tie2();
    for (auto _ : state) benchmark::DoNotOptimize(compute_gauss_code(config));
}
BENCHMARK(BM_GaussCode);

void BM_RenderObservation(benchmark::State& state) {
    WorldState world{tie2(), tie2(), {}, 0};
    for (auto _ : state) benchmark::DoNotOptimize(render_observation(world));
}
BENCHMARK(BM_RenderObservation);

void BM_EnvStepRendered(benchmark::State& state) {
    auto pool = std::make_shared<const ConfigPool>(ConfigPool::load(kData / "pool"));
    KnotEnv env(TaskSpec::at_crossings(Task::tie, 2), pool);
    RandomPolicy policy(1);
    std::uint64_t seed = 0;
    Observation obs = env.reset(seed);
    for (auto _ : state) {
        if (env.done()) obs = env.reset(++seed);
        auto result = env.step(policy.act(obs, {}));
        obs = std::move(result.observation);
    }
    state.counters["steps_per_s"] = benchmark::Counter(static_cast<double>(state.iterations()), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_EnvStepRendered)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
