// Hot-path timings: coherent-state synthesis, evolution, Husimi rasters,
// pairing plans, Wigner pairings, and the copy-density theta series. Sizes
// are near the acceptance workloads so regressions show where it matters.

#include <benchmark/benchmark.h>

#include <cmath>
#include <limits>
#include <vector>

#include "torusrev/harness.hpp"
#include "torusrev/limits.hpp"
#include "torusrev/phasespace.hpp"
#include "torusrev/profile.hpp"
#include "torusrev/state.hpp"

namespace {

using namespace torusrev;

SemiclassicalParams sqrt_params(double hbar, int d = 1) {
    return SemiclassicalParams::from_hbar(hbar, 0.5, d);
}

void bm_coherent_state(benchmark::State& state) {
    const double hbar = 0.4 * std::ldexp(1.0, -static_cast<int>(state.range(0)));
    const auto params = sqrt_params(hbar);
    const auto spec = PacketSpec::make({0.9}, {1.0});
    const Profile g = Profile::gaussian(1);
    for (auto _ : state)
        benchmark::DoNotOptimize(coherent_state(params, spec, g));
}
BENCHMARK(bm_coherent_state)->Arg(0)->Arg(3)->Arg(5);

void bm_evolve(benchmark::State& state) {
    const auto params = sqrt_params(0.0125);
    const auto psi =
        coherent_state(params, PacketSpec::make({0.9}, {1.0}), Profile::gaussian(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(evolve(psi, 0.5 * params.revival_time()));
}
BENCHMARK(bm_evolve);

void bm_husimi_grid(benchmark::State& state) {
    const auto params = sqrt_params(0.1);
    const auto spec = PacketSpec::make({0.0}, {0.0});
    const Profile g = Profile::gaussian(1);
    const auto psi = coherent_state(params, spec, g);
    const auto grid =
        default_grid(params, spec, static_cast<int>(state.range(0)), 33);
    for (auto _ : state)
        benchmark::DoNotOptimize(husimi_grid(psi, params, g, grid, 1));
}
BENCHMARK(bm_husimi_grid)->Arg(64)->Arg(256);

void bm_pairing_plan_build(benchmark::State& state) {
    const double hbar = 0.4 * std::ldexp(1.0, -static_cast<int>(state.range(0)));
    const auto params = sqrt_params(hbar);
    const Profile g = Profile::gaussian(1);
    const auto psi = coherent_state(params, PacketSpec::make({0.0}, {0.0}), g);
    const auto obs = Observable::cosine(1, 0, {0.0}, 0.8);
    for (auto _ : state)
        benchmark::DoNotOptimize(HusimiPairingPlan(psi, params, g, obs));
}
BENCHMARK(bm_pairing_plan_build)->Arg(0)->Arg(5);

void bm_pairing_plan_eval(benchmark::State& state) {
    const auto params = sqrt_params(0.0125);
    const Profile g = Profile::gaussian(1);
    const auto psi = coherent_state(params, PacketSpec::make({0.0}, {0.0}), g);
    const auto obs =
        Observable::cosine(1, 0, {0.0}, std::numeric_limits<double>::infinity());
    const HusimiPairingPlan plan(psi, params, g, obs);
    double t = 0.0;
    for (auto _ : state) {
        t += 0.37;
        benchmark::DoNotOptimize(plan.value_at(t));
    }
}
BENCHMARK(bm_pairing_plan_eval);

void bm_pair_wigner(benchmark::State& state) {
    const auto params = sqrt_params(0.0125);
    const Profile g = Profile::gaussian(1);
    const auto psi = coherent_state(params, PacketSpec::make({0.9}, {1.0}), g);
    const auto obs =
        Observable::cosine(1, 0, {0.0}, std::numeric_limits<double>::infinity());
    for (auto _ : state)
        benchmark::DoNotOptimize(pair_wigner_observable(psi, obs, 1.7));
}
BENCHMARK(bm_pair_wigner);

void bm_copy_density(benchmark::State& state) {
    const double width = 0.1 * static_cast<double>(state.range(0));
    const Profile g = Profile::gaussian(1);
    const double q[1] = {1.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(copy_density(g, width, q));
}
BENCHMARK(bm_copy_density)->Arg(2)->Arg(10);

void bm_revival_scan(benchmark::State& state) {
    const auto params = sqrt_params(0.1);
    const auto spec = PacketSpec::make({1.3}, {0.0});
    const Profile g = Profile::gaussian(1);
    for (auto _ : state)
        benchmark::DoNotOptimize(revival_scan(params, spec, g, 257));
}
BENCHMARK(bm_revival_scan);

} // namespace

BENCHMARK_MAIN();
