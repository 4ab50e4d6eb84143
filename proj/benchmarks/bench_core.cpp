#include <benchmark/benchmark.h>

#include "mualg/completion.hpp"
#include "mualg/covers.hpp"
#include "mualg/sampling.hpp"
#include "mualg/systems.hpp"
#include "mualg/textio.hpp"

using namespace mualg;

namespace {

KripkeModel bench_model(int states) {
  ModelBounds mb;
  mb.min_states = states;
  mb.max_states = states;
  mb.num_actions = 2;
  return random_model(7, mb);
}

}  // namespace

static void BM_eval_fixed_point(benchmark::State& state) {
  KripkeModel m = bench_model(int(state.range(0)));
  Term t = parse_term("mu x . p | <a> x | <b> (q & [a] x)");
  for (auto _ : state) benchmark::DoNotOptimize(eval(m, t));
}
BENCHMARK(BM_eval_fixed_point)->Arg(4)->Arg(8)->Arg(16);

static void BM_bekic_solve(benchmark::State& state) {
  KripkeModel m = bench_model(6);
  Rng rng(11);
  SystemGenConfig sc;
  sc.num_bound = int(state.range(0));
  sc.actions = {"a", "b"};
  System s = random_system(rng, sc);
  for (auto _ : state) benchmark::DoNotOptimize(bekic_solve(s, m));
}
BENCHMARK(BM_bekic_solve)->Arg(2)->Arg(3);

static void BM_modal_cnf(benchmark::State& state) {
  Term t = parse_term("(mu x . p | <a> x) & [a] (q | ~p) & <a> (p & q)");
  for (auto _ : state) benchmark::DoNotOptimize(modal_cnf(t));
}
BENCHMARK(BM_modal_cnf);

static void BM_dm_completion(benchmark::State& state) {
  Rng rng(5);
  FinitePoset p = random_poset(rng, int(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dm_completion(p));
}
BENCHMARK(BM_dm_completion)->Arg(6)->Arg(8);

static void BM_mu_cover(benchmark::State& state) {
  KripkeModel m = bench_model(4);
  LatticeCovers lc(m);
  auto step = adj::compose(
      adj::join(2),
      adj::pair_of({adj::proj(1, 2), adj::compose(adj::dia("a"), adj::proj(0, 2))}));
  auto d = adj::mu(step, {0});
  for (auto _ : state)
    benchmark::DoNotOptimize(lc.mu_cover(d, {m.universe() >> 1}));
}
BENCHMARK(BM_mu_cover);

static void BM_guard_system(benchmark::State& state) {
  System s = parse_system(
      "bound: x y\n"
      "x := y | p\n"
      "y := <a> x | q | x\n");
  for (auto _ : state) benchmark::DoNotOptimize(guard_system(s));
}
BENCHMARK(BM_guard_system);

BENCHMARK_MAIN();
