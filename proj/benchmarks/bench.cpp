#include <benchmark/benchmark.h>

#include "entroflow/diagnostics.hpp"
#include "entroflow/dynamics.hpp"
#include "entroflow/entropy.hpp"

using namespace entroflow;

namespace {

TorusGeometry geom1d(int L) { return TorusGeometry(1, {L}, 2); }

void bm_pca_pushforward(benchmark::State& state) {
    const auto g = geom1d(static_cast<int>(state.range(0)));
    const auto kernel = PcaKernel::majority(1, 0.2);
    ExactMeasure nu = ExactMeasure::uniform(g);
    for (auto _ : state) {
        nu = pca_pushforward(kernel, nu);
        benchmark::DoNotOptimize(nu.probs.data());
    }
}
BENCHMARK(bm_pca_pushforward)->Arg(8)->Arg(12)->Arg(16);

void bm_semigroup_evolve(benchmark::State& state) {
    const auto g = geom1d(static_cast<int>(state.range(0)));
    const auto rates = IpsRates::inf_temp_flip(1);
    const auto gen = build_generator(rates, g);
    const ExactMeasure nu0 = ExactMeasure::point_mass(SpinConfig::constant(g, 1));
    for (auto _ : state) {
        auto nu = semigroup_evolve(gen, nu0, 0.5);
        benchmark::DoNotOptimize(nu.probs.data());
    }
}
BENCHMARK(bm_semigroup_evolve)->Arg(8)->Arg(10)->Arg(12);

void bm_loss_decomposition(benchmark::State& state) {
    const int L = static_cast<int>(state.range(0));
    const auto g = geom1d(L);
    const auto pot = Potential::ising(1, 0.7, 0.0);
    const auto rates = IpsRates::glauber(pot, 1);
    const auto mu = gibbs_measure(pot, g);
    CounterRng rng(7);
    std::vector<double> w(mu.probs.size());
    for (auto& x : w) x = 0.05 + rng.uniform01();
    const auto nu = ExactMeasure::from_weights(g, std::move(w));
    for (auto _ : state) {
        auto rep = loss_decomposition(nu, mu, pot, rates);
        benchmark::DoNotOptimize(rep.discrepancy);
    }
}
BENCHMARK(bm_loss_decomposition)->Arg(6)->Arg(8)->Arg(10);

void bm_martingale_diagnostic(benchmark::State& state) {
    const int L = static_cast<int>(state.range(0));
    const auto g = geom1d(L);
    const auto pot = Potential::ising(1, 0.5, 0.0);
    const auto mu = gibbs_measure(pot, g);
    const auto schedule = annulus_schedule(g, L / 2);
    for (auto _ : state) {
        auto diag = martingale_diagnostic(mu, schedule);
        benchmark::DoNotOptimize(diag.rows.data());
    }
}
BENCHMARK(bm_martingale_diagnostic)->Arg(8)->Arg(10)->Arg(12);

}  // namespace

BENCHMARK_MAIN();
