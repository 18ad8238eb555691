#pragma once

#include <optional>

#include "ecmkit/ecm.hpp"

namespace ecmkit {

// Event-processing scenario for kernels whose behavior is governed by access
// order rather than steady-state streaming.
struct LatencyScenario {
  bool worst_case = false;
  // Best case: the loop body's dependency critical path. Worst case: one full
  // memory latency per scattered access.
  double serial_cy = 0;
  TrafficBreakdown traffic;
  double effective_mem_bw_gbs = 0;  // bandwidth the access pattern can draw
};

// Events arrive in array order; traffic is the plain per-iteration volume and
// runtime is the critical path stored with the machine's timing entry.
LatencyScenario best_case_scenario(const KernelSpec& k, const MachineModel& m);

// Every indexed access misses and costs a full line plus a full latency.
// effective_bw_gbs overrides the machine's nominal bandwidth when the
// scattered pattern is known to draw less.
LatencyScenario worst_case_scenario(const KernelSpec& k, const MachineModel& m,
                                    std::optional<double> effective_bw_gbs = {});

double delivery_serial_cy(const LatencyScenario& s);

// max(serial / n, traffic * core_freq / effective bandwidth)
double delivery_parallel_cy(const LatencyScenario& s, const MachineModel& m,
                            int n_threads);

// Diagnostic only: worst-case serial plus the best-case critical path, for
// gauging how much of the observed gap dependency chains could explain.
double delivery_worst_case_adjusted_cy(const LatencyScenario& wc,
                                       const LatencyScenario& bc);

}  // namespace ecmkit
