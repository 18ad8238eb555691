#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "ecmkit/simd.hpp"

namespace ecmkit {

// Measured reciprocal throughputs of the instructions that dominate in-core
// time. Values are cycles per scalar loop iteration at the given SIMD level
// (lane division already applied); the scalar entry is the plain libm call.
struct InstructionThroughputTable {
  std::map<SimdLevel, double> exp_cy_per_scalar_it;
  std::map<SimdLevel, double> div_cy_per_scalar_it;
  // Latency of one scalar exp call, for the event-delivery critical-path
  // diagnostic. Only benchmarked on some machines.
  std::optional<double> scalar_exp_latency_cy;
};

enum class L3Policy { inclusive, victim };

struct MachineModel {
  std::string name;
  double core_freq_ghz = 0;
  double uncore_freq_ghz = 0;
  double mem_bw_gbs = 0;  // sustained socket memory bandwidth, GB = 1e9 B
  int n_cores = 0;
  double cache_line_b = 64;
  double l1l2_bw_bcy = 0;              // per-core L1<->L2 bytes per cycle
  std::optional<double> l2l3_bw_bcy;   // absent: machine has no L3
  bool l2l3_duplex = false;            // true: bandwidth applies per direction
  L3Policy l3_policy = L3Policy::inclusive;
  SimdLevel simd_max = SimdLevel::scalar;
  double fma_per_cy = 1;   // mul+add pair counts as one 2-flop op
  double flops_per_fma = 2;
  std::map<SimdLevel, double> load_per_cy;  // descriptive only, not used in predictions
  std::map<SimdLevel, double> store_per_cy;
  double avg_mem_access_latency_cy = 20.0;  // per scattered access, measured
  InstructionThroughputTable throughputs;

  bool has_l3() const { return l2l3_bw_bcy.has_value(); }
};

// Strict loader: unknown keys, missing required fields, or out-of-range
// values raise ParseError with the offending file and field named.
MachineModel load_machine(const std::filesystem::path& file);

// core_freq * lanes * fma_per_cy * flops_per_fma * n_cores, in GF/s.
double peak_performance_gflops(const MachineModel& m, SimdLevel simd, int n_cores);

// Same machine clocked differently (uncore tracks core). Cache bandwidths are
// per-cycle and stay put; memory bandwidth is absolute and stays put, so
// memory link times in cycles scale with the new clock.
MachineModel rescale_frequency(const MachineModel& m, double core_freq_ghz);

}  // namespace ecmkit
