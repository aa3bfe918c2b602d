#include <benchmark/benchmark.h>

#include <random>

#include "synthetic.hpp"
#include "list_generator.hpp"
#include "toy_checker.hpp"
#include "typos.hpp"
#include "tyfix/metrics.hpp"
#include "tyfix/miner.hpp"
#include "tyfix/reducer.hpp"
#include "tyfix/repair.hpp"
#include "tyfix/text.hpp"

using namespace tyfix;

namespace {

// Stands in for the cost of a real checker run.
void burn(std::string_view content, int rounds) {
  std::string h(content);
  for (int i = 0; i < rounds; ++i) h = text::sha256_hex(h);
  benchmark::DoNotOptimize(h);
}

CheckerHandle slow(CheckerHandle inner, int rounds) {
  return std::make_shared<FunctionChecker>([inner, rounds](std::string_view content, const std::string& path) {
    burn(content, rounds);
    return inner->check(content, path);
  });
}

void BM_Reduce(benchmark::State& state) {
  std::mt19937_64 rng(3);
  auto c = synth::random_case(static_cast<int>(state.range(0)), rng);
  c.required = {static_cast<int>(state.range(0)) - 1};
  c.conflicts.clear();
  c.breaking.clear();
  synth::render(c);
  const auto checker = slow(synth::live_checker(c), 2000);
  ReduceOptions opt;
  opt.parallel_groups = state.range(1) != 0;
  for (auto _ : state) {
    auto r = reduce(c.old_content, c.new_content, synth::target("synthetic.py"), checker, "synthetic.py", opt);
    benchmark::DoNotOptimize(r);
  }
}

std::vector<CommitPair> typo_pairs(int n) {
  std::mt19937_64 rng(4);
  std::vector<CommitPair> pairs;
  for (int i = 0; i < n; ++i) pairs.push_back(typos::pair(i, rng));
  return pairs;
}

void BM_Mine(benchmark::State& state) {
  const auto pairs = typo_pairs(64);
  const auto checker = slow(toy::checker(), 500);
  for (auto _ : state) {
    auto r = state.range(0) ? mine(pairs, checker) : mine_serial(pairs, checker);
    benchmark::DoNotOptimize(r);
  }
}

void BM_RepairCandidates(benchmark::State& state) {
  const auto pair = typo_pairs(1)[0];
  const auto err = toy::check(pair.old_content, pair.file_path).diagnostics.at(0);
  std::vector<std::string> cands;
  for (int j = 0; j < 49; ++j) cands.push_back("print(missing_" + std::to_string(j) + ")");
  cands.push_back("print(value_0)");
  const listgen::Generator gen(cands);
  const auto checker = slow(toy::checker(), 2000);
  RepairOptions opt;
  opt.parallel = state.range(0) != 0;
  for (auto _ : state) {
    auto r = repair(pair.old_content, pair.file_path, err, checker, gen, opt);
    benchmark::DoNotOptimize(r);
  }
}

void BM_Eval(benchmark::State& state) {
  const auto entries = mine_serial(typo_pairs(32), toy::checker()).entries;
  const auto checker = slow(toy::checker(), 500);
  const TemplateGenerator gen;
  EvalOptions opt;
  opt.parallel = state.range(0) != 0;
  for (auto _ : state) {
    auto r = evaluate(entries, checker, gen, opt);
    benchmark::DoNotOptimize(r);
  }
}

}  // namespace

BENCHMARK(BM_Reduce)->ArgNames({"hunks", "parallel"})->ArgsProduct({{16, 64}, {0, 1}})->UseRealTime();
BENCHMARK(BM_Mine)->ArgName("parallel")->Arg(0)->Arg(1)->UseRealTime();
BENCHMARK(BM_RepairCandidates)->ArgName("parallel")->Arg(0)->Arg(1)->UseRealTime();
BENCHMARK(BM_Eval)->ArgName("parallel")->Arg(0)->Arg(1)->UseRealTime();

BENCHMARK_MAIN();
