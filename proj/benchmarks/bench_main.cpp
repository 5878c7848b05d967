#include <benchmark/benchmark.h>

#include <cmath>

#include "riskopt/density.hpp"
#include "riskopt/mc.hpp"
#include "riskopt/prehorizon.hpp"
#include "riskopt/solver.hpp"

namespace {

using namespace riskopt;

const MarketParams mkt = MarketParams::make(0.09, 0.20, 0.06);
const UtilitySpec log_u = UtilitySpec::make(1.0);
constexpr double T = 15.0;
const double q = 0.75 * std::exp(0.06 * 15.0);

void bm_solve_var(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_var(mkt, T, 1.0, log_u, q, 0.06));
}
BENCHMARK(bm_solve_var);

void bm_solve_el(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_el(mkt, T, 1.0, log_u, q, 0.06));
}
BENCHMARK(bm_solve_el);

void bm_solve_eul(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_eul(mkt, T, 1.0, log_u, q, 0.06));
}
BENCHMARK(bm_solve_eul);

void bm_psi0(benchmark::State& state) {
    const QuadratureConfig cfg;
    for (auto _ : state)
        benchmark::DoNotOptimize(psi0(0.8, -0.7, 0.9, 0.16, -1.4, 1.0, 2.0, cfg));
}
BENCHMARK(bm_psi0);

void bm_el_fraction(benchmark::State& state) {
    const TerminalProfile el = solve_el(mkt, T, 1.0, log_u, q, 0.06);
    const QuadratureConfig fast{1e-7, 1e-7, 2000};
    double z = 0.4;
    for (auto _ : state) {
        benchmark::DoNotOptimize(wealth_and_fraction_el(el, mkt, T, 5.0, z, fast));
        z = z < 2.0 ? z * 1.01 : 0.4;
    }
}
BENCHMARK(bm_el_fraction);

void bm_var_fraction(benchmark::State& state) {
    const TerminalProfile var = solve_var(mkt, T, 1.0, log_u, q, 0.06);
    double z = 0.4;
    for (auto _ : state) {
        benchmark::DoNotOptimize(wealth_and_fraction_var(var, mkt, T, 5.0, z));
        z = z < 2.0 ? z * 1.01 : 0.4;
    }
}
BENCHMARK(bm_var_fraction);

void bm_terminal_density(benchmark::State& state) {
    const TerminalProfile var = solve_var(mkt, T, 1.0, log_u, q, 0.06);
    const std::vector<double> grid = default_wealth_grid(var, mkt, T);
    for (auto _ : state)
        benchmark::DoNotOptimize(terminal_density(var, mkt, T, grid));
}
BENCHMARK(bm_terminal_density);

void bm_mc_static_budget(benchmark::State& state) {
    const TerminalProfile var = solve_var(mkt, T, 1.0, log_u, q, 0.06);
    MCConfig cfg;
    cfg.n_samples = state.range(0);
    for (auto _ : state)
        benchmark::DoNotOptimize(mc_static(var, mkt, T, Functional::budget(), cfg));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_mc_static_budget)->Arg(1 << 16)->Arg(1 << 20);

} // namespace

BENCHMARK_MAIN();
