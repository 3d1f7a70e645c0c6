#pragma once

#include <vector>

#include "phs/formula.hpp"
#include "phs/semantics.hpp"
#include "phs/trace.hpp"

namespace phs {

// One horizon-bounded trace-satisfaction query.
struct SweepTask {
  Formula formula;
  Lasso word;
  Valuation valuation;
  long long horizon = -1;  // -1: default_horizon of the word/valuation
};

// Serial reference kernel: evaluates the tasks in order.
std::vector<TriBool> sweep_serial(const std::vector<SweepTask>& tasks);

// Parallel kernel (OpenMP when available, otherwise identical to the
// serial reference). Tasks are independent pure evaluations, so any
// schedule yields the same results.
std::vector<TriBool> sweep_parallel(const std::vector<SweepTask>& tasks);

// Number of worker threads the parallel kernel would use.
int sweep_threads();

// Smallest value in [1, hi] of the single parameter `param` making f true
// on w (horizon-bounded oracle); 0 when none does. The parallel kernel
// evaluates the candidate values as a batch.
long long min_value_sweep_serial(const Formula& f, const Lasso& w,
                                 const std::string& param, long long hi);
long long min_value_sweep_parallel(const Formula& f, const Lasso& w,
                                   const std::string& param, long long hi);

}  // namespace phs
