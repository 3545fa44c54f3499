// OpenMP kernels against their serial references.
//   ./scdr_bench --benchmark_counter_tabular=true

#include <benchmark/benchmark.h>
#include <omp.h>

#include "scdr/formulation/build.hpp"
#include "scdr/io/documents.hpp"
#include "scdr/milp/branch_and_bound.hpp"
#include "scdr/runner/runner.hpp"
#include "scdr/runner/synthetic.hpp"

using namespace scdr;

namespace {

// The minimal chain with FTC on has 12 free binaries at four periods.
const milp::MilpInstance& enumeration_instance() {
  static const milp::MilpInstance inst = [] {
    formulation::ExtensionConfig c;
    c.ftc = true;
    return formulation::build(io::load_model(std::string(SCDR_DATA_DIR) + "/minimal_chain.json"), c).instance;
  }();
  return inst;
}

void BM_BruteForce(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(milp::brute_force(enumeration_instance(), 12).objective);
  state.counters["threads"] = static_cast<double>(state.range(0));
}

void BM_BruteForceSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(milp::brute_force_serial(enumeration_instance(), 12).objective);
}

struct SweepInput {
  NetworkModel model = runner::synthetic_network(20);
  disruption::DisruptionEvent base;
  std::vector<double> axis{0.0, 0.5, 1.0};
  formulation::ExtensionConfig config;
  SweepInput() {
    base.target = "production_upper/*/*";
    base.start = 1;
    config.terminal = formulation::TerminalMode::Fid;
  }
};

const SweepInput& sweep_input() {
  static const SweepInput in;
  return in;
}

void BM_Sweep(benchmark::State& state) {
  const auto& in = sweep_input();
  runner::SweepOptions o;
  o.workers = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(runner::sweep_characterization(in.model, in.base, in.axis, in.axis, in.config, o).cells);
  state.counters["threads"] = static_cast<double>(state.range(0));
}

void BM_SweepSerial(benchmark::State& state) {
  const auto& in = sweep_input();
  for (auto _ : state)
    benchmark::DoNotOptimize(runner::sweep_characterization_serial(in.model, in.base, in.axis, in.axis, in.config).cells);
}

}  // namespace

BENCHMARK(BM_BruteForceSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BruteForce)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sweep)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
