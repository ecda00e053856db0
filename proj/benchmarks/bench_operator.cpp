#include "imcergo/ergodicity.hpp"
#include "imcergo/oracle.hpp"
#include "support/random_models.hpp"

#include <benchmark/benchmark.h>

using namespace imcergo;
using namespace imcergo::testing;

namespace {

TransitionModel model_of_size(std::size_t n, double interval_fraction) {
    Rng rng(n * 7919);
    return random_model(rng, {.n_min = n, .n_max = n, .interval_fraction = interval_fraction,
                              .strongly_connected = true});
}

void BM_apply_upper_intervals(benchmark::State& state) {
    const auto m = model_of_size(static_cast<std::size_t>(state.range(0)), 1.0);
    const UpperTransitionOperator op(m);
    Rng rng(1);
    const Gamble h = random_gamble(rng, m.size());
    for (auto _ : state) benchmark::DoNotOptimize(op.apply_upper(h));
}
BENCHMARK(BM_apply_upper_intervals)->Arg(4)->Arg(16)->Arg(64)->Arg(256);

void BM_apply_upper_vertices(benchmark::State& state) {
    const auto m = model_of_size(static_cast<std::size_t>(state.range(0)), 0.0);
    const UpperTransitionOperator op(m);
    Rng rng(1);
    const Gamble h = random_gamble(rng, m.size());
    for (auto _ : state) benchmark::DoNotOptimize(op.apply_upper(h));
}
BENCHMARK(BM_apply_upper_vertices)->Arg(4)->Arg(16)->Arg(64)->Arg(256);

void BM_average_recursion(benchmark::State& state) {
    const auto m = model_of_size(8, 0.5);
    const UpperTransitionOperator op(m);
    Rng rng(2);
    const Gamble f = random_gamble(rng, m.size());
    for (auto _ : state) benchmark::DoNotOptimize(op.average_recursion(f, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_average_recursion)->Arg(100)->Arg(1000)->Arg(10000);

void BM_estimate_eigenvalue(benchmark::State& state) {
    const auto m = model_of_size(static_cast<std::size_t>(state.range(0)), 0.5);
    const UpperTransitionOperator op(m);
    Rng rng(3);
    const Gamble f = random_unit_gamble(rng, m.size());
    for (auto _ : state) benchmark::DoNotOptimize(estimate_eigenvalue(op, f));
}
BENCHMARK(BM_estimate_eigenvalue)->Arg(4)->Arg(16)->Arg(64);

void BM_classify(benchmark::State& state) {
    const auto m = model_of_size(static_cast<std::size_t>(state.range(0)), 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(classify(m));
}
BENCHMARK(BM_classify)->Arg(4)->Arg(16)->Arg(64)->Arg(256);

void BM_ci_bruteforce(benchmark::State& state) {
    const TransitionModel m(labels(2), {CredalRow::vertices({Pmf({0.9, 0.1}), Pmf({0.2, 0.8})}),
                                        CredalRow::vertices({Pmf({0.5, 0.5}), Pmf({1.0, 0.0})})});
    const Gamble f{0.0, 1.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(ci_upper_average_bruteforce(m, f, 0, static_cast<std::size_t>(state.range(0))));
    }
}
BENCHMARK(BM_ci_bruteforce)->Arg(4)->Arg(6)->Arg(8);

} // namespace

BENCHMARK_MAIN();
