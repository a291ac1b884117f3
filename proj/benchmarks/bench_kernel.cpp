#include <benchmark/benchmark.h>

#include "odospec/spectral.hpp"

using namespace odospec;

namespace {

Laurent z_series() { return Laurent::poly({Scalar(0), Scalar(1)}); }

Laurent dense_series(long prec) {
    std::vector<Scalar> c;
    for (long i = 0; i < prec; ++i) c.emplace_back(Rat(2 * i + 1, i + 2));
    return Laurent(0, std::move(c), prec);
}

}  // namespace

static void BM_series_mul(benchmark::State& state) {
    Laurent a = dense_series(state.range(0));
    Laurent b = dense_series(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_series_mul)->Arg(24)->Arg(48)->Arg(96);

static void BM_series_inverse(benchmark::State& state) {
    Laurent a = dense_series(48);
    for (auto _ : state) benchmark::DoNotOptimize(a.inverse(48));
}
BENCHMARK(BM_series_inverse);

static void BM_operator_mul(benchmark::State& state) {
    Settings s{48, 12, 16};
    OperatorPair pair = build_not_locally_free(Rat(0), z_series(), s);
    for (auto _ : state) benchmark::DoNotOptimize(mul(pair.L, pair.M));
}
BENCHMARK(BM_operator_mul);

static void BM_build_M(benchmark::State& state) {
    Settings s{48, 12, 16};
    OperatorPair pair = build_not_locally_free(Rat(0), z_series(), s);
    for (auto _ : state) benchmark::DoNotOptimize(build_M(pair.L, s));
}
BENCHMARK(BM_build_M);

static void BM_gcd_at_cusp(benchmark::State& state) {
    Settings s{48, 12, 16};
    OperatorPair pair = build_not_locally_free(Rat(0), z_series(), s);
    for (auto _ : state) benchmark::DoNotOptimize(gcd_at_point(pair, Scalar(0), Scalar(0), s));
}
BENCHMARK(BM_gcd_at_cusp);

static void BM_classify_interesting_family(benchmark::State& state) {
    Settings s{40, 12, 16};
    FamilyParams params = GenericParams{Rat(0), Rat(1), Rat(1), Rat(0), z_series()};
    for (auto _ : state) benchmark::DoNotOptimize(classify_sheaf(params, s));
}
BENCHMARK(BM_classify_interesting_family);

BENCHMARK_MAIN();
