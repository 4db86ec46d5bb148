// Serial reference against the OpenMP path for dataset preparation and
// evaluation, plus the large-file diff and patch timings.

#include <benchmark/benchmark.h>


#include "adaedit/corpus.hpp"
#include "adaedit/formats.hpp"
#include "adaedit/pipeline.hpp"
#include "adaedit/structdiff.hpp"

using namespace adaedit;

namespace {

const std::vector<corpus::EditPair>& pairs() {
  static const auto p = corpus::mutation_corpus(7, 400, 20, 500, 0);
  return p;
}

const std::vector<PrepInput>& prep_inputs() {
  static const auto inputs = [] {
    std::vector<PrepInput> out;
    for (const auto& pair : pairs()) {
      PrepInput input;
      input.sample_id = std::to_string(pair.id);
      input.sample = EditSample{"Apply the change.", pair.source, pair.target};
      out.push_back(std::move(input));
    }
    return out;
  }();
  return inputs;
}

const std::vector<EvalInput>& eval_inputs() {
  static const auto inputs = [] {
    std::vector<EvalInput> out;
    for (const auto& pair : pairs()) {
      const std::string payload = generate_payload(pair.source, pair.target, Format::BlockDiff);
      out.push_back({std::to_string(pair.id), pair.source, fence(payload, "diff"), pair.target});
    }
    return out;
  }();
  return inputs;
}

void BM_Prep(benchmark::State& state) {
  const auto execution = static_cast<Execution>(state.range(0));
  const CharCounter chars;
  PrepOptions options;
  options.format = Format::BlockDiff;
  options.adaptive = true;
  const auto& inputs = prep_inputs();
  for (auto _ : state) benchmark::DoNotOptimize(prepare_samples(inputs, options, chars, execution));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * prep_inputs().size()));
  state.SetLabel(execution == Execution::Serial ? "serial" : "parallel");
}
BENCHMARK(BM_Prep)->Arg(static_cast<int>(Execution::Serial))->Arg(static_cast<int>(Execution::Parallel))
    ->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_Eval(benchmark::State& state) {
  const auto execution = static_cast<Execution>(state.range(0));
  const CharCounter chars;
  const auto& inputs = eval_inputs();
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_usability(inputs, Format::BlockDiff, chars, {}, execution));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * eval_inputs().size()));
  state.SetLabel(execution == Execution::Serial ? "serial" : "parallel");
}
BENCHMARK(BM_Eval)->Arg(static_cast<int>(Execution::Serial))->Arg(static_cast<int>(Execution::Parallel))
    ->Unit(benchmark::kMillisecond)->UseRealTime();

const LineSequence& big_file() {
  static const LineSequence file = corpus::large_python_file(20240611, 10001);
  return file;
}

const LineSequence& big_target() {
  static const LineSequence target = corpus::scattered_edits(big_file(), 20240611, 20);
  return target;
}

void BM_BlockTree10k(benchmark::State& state) {
  big_target();
  for (auto _ : state) benchmark::DoNotOptimize(build_block_tree(big_file(), python_profile()));
}
BENCHMARK(BM_BlockTree10k)->Unit(benchmark::kMillisecond);

void BM_BlockDiff10k(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(generate_payload(big_file(), big_target(), Format::BlockDiff));
}
BENCHMARK(BM_BlockDiff10k)->Unit(benchmark::kMillisecond);

void BM_BlockPatch10k(benchmark::State& state) {
  const std::string payload = generate_payload(big_file(), big_target(), Format::BlockDiff);
  for (auto _ : state) benchmark::DoNotOptimize(apply_payload(big_file(), payload, Format::BlockDiff));
}
BENCHMARK(BM_BlockPatch10k)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
