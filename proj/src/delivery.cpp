#include "ecmkit/delivery.hpp"

#include <algorithm>

#include "ecmkit/error.hpp"

namespace ecmkit {

LatencyScenario best_case_scenario(const KernelSpec& k, const MachineModel& m) {
  const InCoreTimingEntry* e = find_timing(k, m.name, SimdLevel::scalar);
  if (!e || !e->cp_cy)
    throw UnsupportedError("kernel '" + k.name + "' has no dependency critical path for " +
                           m.name);
  LatencyScenario s;
  s.worst_case = false;
  s.serial_cy = *e->cp_cy;
  s.traffic = traffic(k);
  s.effective_mem_bw_gbs = m.mem_bw_gbs;
  return s;
}

LatencyScenario worst_case_scenario(const KernelSpec& k, const MachineModel& m,
                                    std::optional<double> effective_bw_gbs) {
  if (!k.random_access_count)
    throw UnsupportedError("kernel '" + k.name + "' has no scattered-access count");
  if (effective_bw_gbs && *effective_bw_gbs <= 0)
    throw Error("effective bandwidth must be positive");
  LatencyScenario s;
  s.worst_case = true;
  s.serial_cy = *k.random_access_count * m.avg_mem_access_latency_cy;
  s.traffic = worst_case_random_traffic(k, m.cache_line_b);
  s.effective_mem_bw_gbs = effective_bw_gbs.value_or(m.mem_bw_gbs);
  return s;
}

double delivery_serial_cy(const LatencyScenario& s) { return s.serial_cy; }

double delivery_parallel_cy(const LatencyScenario& s, const MachineModel& m,
                            int n_threads) {
  if (n_threads < 1) throw Error("thread count must be at least 1");
  // Latency chains split across threads until the scattered traffic pins the
  // memory interface.
  const double bw_floor_cy = s.traffic.total_b() * m.core_freq_ghz / s.effective_mem_bw_gbs;
  return std::max(s.serial_cy / n_threads, bw_floor_cy);
}

double delivery_worst_case_adjusted_cy(const LatencyScenario& wc,
                                       const LatencyScenario& bc) {
  if (!wc.worst_case || bc.worst_case)
    throw Error("adjusted diagnostic pairs a worst-case with a best-case scenario");
  return wc.serial_cy + bc.serial_cy;
}

}  // namespace ecmkit
