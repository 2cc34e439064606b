#include <benchmark/benchmark.h>

#include <random>

#include "crsing/briot_bouquet.hpp"
#include "crsing/crmap.hpp"
#include "crsing/frame.hpp"
#include "crsing/prolongation.hpp"
#include "crsing/report.hpp"
#include "crsing/series_parse.hpp"

using namespace crs;

namespace {

Series dense(const SpacePtr& sp, int trunc, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> coef(-5, 5);
  Series out = Series::constant(sp, trunc, GaussRational(1));
  for (int d = 1; d <= trunc; ++d)
    for (int j = 0; j < 6; ++j) {
      Exponent e(sp->size(), 0);
      for (int k = 0; k < d; ++k) ++e[static_cast<std::size_t>(rng() % sp->size())];
      out.add_term(e, GaussRational(coef(rng)));
    }
  return out;
}

void BM_SeriesMultiply(benchmark::State& state) {
  const SpacePtr sp = VarSpace::cr(2);
  const int trunc = static_cast<int>(state.range(0));
  const Series a = dense(sp, trunc, 1), b = dense(sp, trunc, 2);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_SeriesMultiply)->Arg(6)->Arg(8)->Arg(10);

void BM_Reciprocal(benchmark::State& state) {
  const SpacePtr sp = VarSpace::cr(2);
  const Series a = dense(sp, static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(reciprocal(a));
}
BENCHMARK(BM_Reciprocal)->Arg(6)->Arg(8);

void BM_FrameAndFiltration(benchmark::State& state) {
  const Hypersurface h(parse_series("s*z1*c1 + s*z2*c2^2 + s*z2^2*c2 + s^2*z1*c2 + s^2*z2*c1", VarSpace::cr(2),
                                    static_cast<int>(state.range(0))));
  for (auto _ : state) {
    const Frame f = build_frame(h);
    benchmark::DoNotOptimize(filtration(f, 1, 3));
  }
}
BENCHMARK(BM_FrameAndFiltration)->Arg(6)->Arg(8);

void BM_CheckIdentities(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const int trunc = 2 * k + 4;
  const SpacePtr hol = VarSpace::holomorphic(1);
  const HoloMap f({parse_series("z1", hol, trunc), parse_series("w^" + std::to_string(k), hol, trunc)},
                  Hypersurface(parse_series("s*z1*c1", VarSpace::cr(1), trunc)), power_map_target(k, trunc));
  for (auto _ : state) benchmark::DoNotOptimize(check_identities(f));
}
BENCHMARK(BM_CheckIdentities)->DenseRange(2, 4);

void BM_FormalSolve(benchmark::State& state) {
  const SpacePtr sp = VarSpace::briot_bouquet(3);
  const BBSystem sys({parse_series("1/2*y1 + y2*y3 + t", sp, kExact), parse_series("-y2 + y1^2 + t^2", sp, kExact),
                      parse_series("3*y3 + y1*y2 + t*y1", sp, kExact)},
                     static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(formal_solve(sys));
}
BENCHMARK(BM_FormalSolve)->Arg(8)->Arg(12);

void BM_Prolongation(benchmark::State& state) {
  const JetSpace js = contact_prolong(1, 3);
  std::vector<Series> closure;
  for (const char* r : {"x1*s + u1_0_0_1", "s^2 - u2_0_0_2", "x2*s + u3_0_0_0^2"})
    closure.push_back(parse_series(r, js.closure_space(), kExact));
  const ProlongedSystem ps{js, closure, {{0, 0}, {1, -1}, {GaussRational(1, 2), 2}}, {}, 8};
  for (auto _ : state) benchmark::DoNotOptimize(assemble_and_solve(ps));
}
BENCHMARK(BM_Prolongation);

void BM_Examples(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(run_examples());
}
BENCHMARK(BM_Examples);

}  // namespace

BENCHMARK_MAIN();
