#include <benchmark/benchmark.h>

#include "valkey/genseq.hpp"
#include "valkey/subring.hpp"
#include "valkey/valuation.hpp"

using namespace valkey;

namespace {

Value r1(const char* s) { return Value::rank1(rat_parse(s)); }

std::vector<Value> chain_betas() {
  return {r1("1"), r1("5/3"), r1("59/9"), r1("545/27"), r1("5027/81")};
}

Tower trivial_tower(int n) {
  Tower t(BaseField::rationals());
  for (int i = 0; i < n; ++i) t.push_level({t.from_base(-1)});
  return t;
}

GenSeq chain_seq(int depth) {
  return GenSeq::synthesize(chain_betas(), trivial_tower(4), depth);
}

void BM_lattice_contains(benchmark::State& state) {
  auto lat = lattice_from(chain_betas());
  Value probe = r1("12345/81");
  for (auto _ : state) benchmark::DoNotOptimize(lat.contains(probe));
}
BENCHMARK(BM_lattice_contains);

void BM_lemma2_membership(benchmark::State& state) {
  auto betas = chain_betas();
  auto nbars = validate_semigroup_data(betas).nbars;
  Value gamma = r1("1234/81");
  for (auto _ : state)
    benchmark::DoNotOptimize(lemma2_membership(gamma, betas, nbars));
}
BENCHMARK(BM_lemma2_membership);

void BM_synthesize(benchmark::State& state) {
  int depth = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(chain_seq(depth));
}
BENCHMARK(BM_synthesize)->DenseRange(1, 3);

void BM_value_of(benchmark::State& state) {
  GenSeq s = chain_seq(3);
  BiPoly f = parse_bipoly("x*y^3 - x^6 + 2*y^4");
  for (auto _ : state) benchmark::DoNotOptimize(s.value_of(f));
}
BENCHMARK(BM_value_of);

void BM_expand(benchmark::State& state) {
  GenSeq s = chain_seq(3);
  BiPoly f = parse_bipoly("y^4 - 2*x^5*y + x^8");
  for (auto _ : state) benchmark::DoNotOptimize(s.expand(f, 256));
}
BENCHMARK(BM_expand);

void BM_series_analyze(benchmark::State& state) {
  int depth = static_cast<int>(state.range(0));
  for (auto _ : state) {
    SeriesValOracle o(SeriesOracle::t_sqrt_1_plus_t());
    benchmark::DoNotOptimize(GenSeq::analyze(o, depth));
  }
}
BENCHMARK(BM_series_analyze)->DenseRange(2, 8, 2);

void BM_a2_sieve(benchmark::State& state) {
  auto desc = describe_generators(chain_betas());
  Value bound = r1(state.range(0) == 8 ? "8" : "32");
  for (auto _ : state) benchmark::DoNotOptimize(a2_semigroup(desc, bound));
}
BENCHMARK(BM_a2_sieve)->Arg(8)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
