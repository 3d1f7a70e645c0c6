#include "phs/sweep.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace phs {

namespace {

TriBool run_task(const SweepTask& t) {
  EvalOptions opt;
  opt.horizon = t.horizon >= 0 ? t.horizon
                               : default_horizon(t.word, t.valuation);
  return eval_trace(t.word, t.valuation, t.formula, opt);
}

}  // namespace

std::vector<TriBool> sweep_serial(const std::vector<SweepTask>& tasks) {
  std::vector<TriBool> out(tasks.size(), TriBool::Unknown);
  for (size_t i = 0; i < tasks.size(); ++i) out[i] = run_task(tasks[i]);
  return out;
}

std::vector<TriBool> sweep_parallel(const std::vector<SweepTask>& tasks) {
  std::vector<TriBool> out(tasks.size(), TriBool::Unknown);
  long long n = static_cast<long long>(tasks.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (long long i = 0; i < n; ++i) out[i] = run_task(tasks[i]);
  return out;
}

int sweep_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

long long pick_min_true(const std::vector<TriBool>& res) {
  for (size_t i = 0; i < res.size(); ++i)
    if (res[i] == TriBool::True) return static_cast<long long>(i) + 1;
  return 0;
}

std::vector<SweepTask> value_tasks(const Formula& f, const Lasso& w,
                                   const std::string& param, long long hi) {
  std::vector<SweepTask> tasks;
  for (long long v = 1; v <= hi; ++v)
    tasks.push_back({f, w, {{param, v}}, -1});
  return tasks;
}

}  // namespace

long long min_value_sweep_serial(const Formula& f, const Lasso& w,
                                 const std::string& param, long long hi) {
  return pick_min_true(sweep_serial(value_tasks(f, w, param, hi)));
}

long long min_value_sweep_parallel(const Formula& f, const Lasso& w,
                                   const std::string& param, long long hi) {
  return pick_min_true(sweep_parallel(value_tasks(f, w, param, hi)));
}

}  // namespace phs
