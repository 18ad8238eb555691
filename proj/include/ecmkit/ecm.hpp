#pragma once

#include <optional>
#include <vector>

#include "ecmkit/traffic.hpp"

namespace ecmkit {

// Cycle costs per iteration: {T_OL || T_nOL | T_L1L2 | T_L2L3 | T_mem}.
// Links below the working set's residence level carry zero.
struct EcmContribution {
  double t_ol_cy = 0;
  double t_nol_cy = 0;
  double t_l1l2_cy = 0;
  double t_l2l3_cy = 0;
  double t_l2mem_cy = 0;  // direct DRAM->L2 share (victim L3); zero otherwise
  double t_l3mem_cy = 0;

  double t_mem_cy() const { return t_l2mem_cy + t_l3mem_cy; }
};

// Single-core cycles per iteration with the working set at each level.
struct EcmPrediction {
  std::optional<double> t_l1_cy;  // absent when built from a serial override
  std::optional<double> t_l2_cy;
  std::optional<double> t_l3_cy;
  double t_mem_cy = 0;
  // Per-iteration memory transfer time; the floor that parallel execution on
  // one socket cannot undercut.
  double mem_bottleneck_cy = 0;
  std::optional<int> n_saturation;  // cores to hit the bandwidth ceiling; absent if never
  bool from_override = false;

  std::optional<double> at(Residence r) const;
};

EcmContribution contributions(const KernelSpec& k, const MachineModel& m,
                              SimdLevel simd, Residence residence);

// Non-overlapping composition of a full-depth (memory-resident) contribution:
// T at level X = max(T_OL, T_nOL + sum of link terms down to X).
EcmPrediction compose(const EcmContribution& c);

// contributions+compose for kernels with a published split; for kernels with
// only a stored serial override, the override replaces the in-memory level and
// the cache levels stay empty.
EcmPrediction predict(const KernelSpec& k, const MachineModel& m, SimdLevel simd);

// max(serial in-memory time / n, memory bottleneck)
double multicore_cy(const EcmPrediction& p, int n_threads);

// Iterations per second when one iteration costs cy_per_it on this machine.
double work_rate_per_s(double cy_per_it, const MachineModel& m);

struct WeightedKernel {
  KernelSpec kernel;
  double weight = 1.0;  // relative iterations per timestep
};

struct SaturationPoint {
  double core_freq_ghz = 0;
  std::optional<int> n90;  // smallest core count reaching the threshold; absent if none
};

// Smallest core count whose weighted bandwidth utilization reaches `threshold`,
// swept over clock frequencies.
std::vector<SaturationPoint> saturation_sweep(const std::vector<WeightedKernel>& kernels,
                                              const MachineModel& m, SimdLevel simd,
                                              const std::vector<double>& core_freqs_ghz,
                                              double threshold);

}  // namespace ecmkit
