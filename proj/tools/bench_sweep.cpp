// Benchmark comparing the serial reference evaluation kernel with the
// OpenMP batch kernel on randomly generated instances.
#include <chrono>
#include <cstdio>

#include <CLI11.hpp>

#include "phs/corpus.hpp"
#include "phs/sweep.hpp"

using namespace phs;

int main(int argc, char** argv) {
  CLI::App app{"batch-evaluation benchmark: serial reference vs parallel"};
  uint64_t seed = 1;
  int count = 2000;
  int depth = 2;
  int repeat = 3;
  app.add_option("--seed", seed, "generator seed");
  app.add_option("--count", count, "number of instances per run");
  app.add_option("--depth", depth, "maximum formula depth");
  app.add_option("--repeat", repeat, "timed repetitions");
  CLI11_PARSE(app, argc, argv);

  RandomProfile prof = RandomProfile::tiny();
  prof.max_depth = depth;
  std::vector<SweepTask> tasks;
  for (const RandomInstance& inst : random_instances(seed, prof, count))
    tasks.push_back({inst.formula, inst.word, inst.valuation, -1});

  using Clock = std::chrono::steady_clock;
  auto time_runs = [&](auto&& kernel) {
    double best = 1e300;
    std::vector<TriBool> res;
    for (int r = 0; r < repeat; ++r) {
      auto t0 = Clock::now();
      res = kernel(tasks);
      double ms =
          std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
      if (ms < best) best = ms;
    }
    return std::pair<double, std::vector<TriBool>>(best, res);
  };

  auto [serial_ms, serial_res] = time_runs(sweep_serial);
  auto [parallel_ms, parallel_res] = time_runs(sweep_parallel);
  if (serial_res != parallel_res) {
    std::fprintf(stderr, "kernel mismatch: parallel differs from reference\n");
    return 1;
  }
  int concl = 0;
  for (TriBool r : serial_res)
    if (r != TriBool::Unknown) ++concl;
  std::printf("instances: %d (conclusive: %d)\n", count, concl);
  std::printf("threads:   %d\n", sweep_threads());
  std::printf("serial:    %.2f ms\n", serial_ms);
  std::printf("parallel:  %.2f ms  (speedup %.2fx)\n", parallel_ms,
              serial_ms / parallel_ms);
  return 0;
}
