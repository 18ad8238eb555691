#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ecmkit/ecm.hpp"

namespace ecmkit {

// One row of a measurement CSV. Volume-only rows (data volume per iteration,
// no timing) leave the cycle fields empty.
struct MeasurementRecord {
  std::string kernel;
  std::string machine;  // may be empty for cross-machine volume tables
  std::optional<SimdLevel> simd;
  std::optional<int> threads;
  std::optional<Residence> residence;
  std::optional<double> cy_per_it_median;
  std::optional<double> cy_per_it_iqr;
  std::optional<double> mem_b_per_it;
  std::optional<double> avg_freq_ghz;  // measured clock, when it deviated from nominal
};

// Strict reader: the header line must match the documented column set exactly.
std::vector<MeasurementRecord> load_measurements(const std::filesystem::path& file);

enum class MatchClass { within_10pct, within_35pct, outlier };
std::string_view match_class_name(MatchClass c);

struct ValidationRow {
  MeasurementRecord record;
  double predicted = 0;  // cy/it, or B/it for volume rows
  double measured = 0;
  bool volume = false;
  double rel_error = 0;  // (measured - predicted) / predicted
  MatchClass cls = MatchClass::within_10pct;
  std::string category;  // the kernel's category, for aggregation
};

struct ValidationReport {
  std::vector<ValidationRow> rows;
  // Records naming a kernel, SIMD level, or residence we cannot predict for.
  std::vector<std::string> unmatched;
  std::map<std::string, double> median_abs_rel_error;  // by kernel category
};

// Pairs records with model predictions by (kernel, simd, threads, residence).
// Records for other machines are ignored; records this machine should cover
// but cannot land in `unmatched`. A record carrying avg_freq_ghz is scored
// against a prediction at that clock.
ValidationReport validate(const std::vector<MeasurementRecord>& records,
                          const std::vector<KernelSpec>& kernels,
                          const MachineModel& m);

// Achieved fraction of the memory bandwidth ceiling for a weighted kernel mix
// at n threads, capped at 1.
double utilization(const std::vector<WeightedKernel>& kernels, const MachineModel& m,
                   SimdLevel simd, int n_threads);

// kernel name -> weight rows, in file order.
std::vector<std::pair<std::string, double>> load_weights(const std::filesystem::path& file);

}  // namespace ecmkit
