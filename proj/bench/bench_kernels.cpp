// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "minap/constructions.hpp"
#include "minap/radical.hpp"

using namespace minap;

namespace {

TriangularParams z4z2_params() {
  return TriangularParams::from_group(make_group({}, TailRule::constant(Block{CyclicOrder::finite(4), {2}, false})));
}

void BM_Akm(benchmark::State& state) {
  const TSeq seq = triangular_sequence(z4z2_params());
  const auto k = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_Akm(seq, k, 2, 24));
}

void BM_AkmSerial(benchmark::State& state) {
  const TSeq seq = triangular_sequence(z4z2_params());
  const auto k = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_Akm_serial(seq, k, 2, 24));
}

OracleInput oracle_input(std::size_t b) {
  const TriangularParams p = z4z2_params();
  std::vector<std::size_t> blocks;
  for (std::size_t j = 0; j <= b; ++j) blocks.push_back(j);
  const Coordinates c(p.g, blocks);
  OracleInput in;
  in.moduli = c.moduli();
  for (std::size_t n = 0; n < 400; ++n) {
    std::map<std::size_t, Term> kept;
    const Element term = triangular_term(p, n);
    for (const auto& [j, t] : term.terms()) {
      if (j <= b) kept[j] = t;
    }
    in.prefix.push_back(c.flatten(make_element(p.g, kept)));
  }
  in.tail_start = 200;
  return in;
}

void BM_Oracle(benchmark::State& state) {
  const OracleInput in = oracle_input(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(oracle_radical(in));
}

void BM_OracleSerial(benchmark::State& state) {
  const OracleInput in = oracle_input(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(oracle_radical_serial(in));
}

}  // namespace

BENCHMARK(BM_Akm)->DenseRange(1, 2);
BENCHMARK(BM_AkmSerial)->DenseRange(1, 2);
BENCHMARK(BM_Oracle)->DenseRange(0, 2);
BENCHMARK(BM_OracleSerial)->DenseRange(0, 2);

BENCHMARK_MAIN();
