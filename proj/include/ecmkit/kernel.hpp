#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ecmkit/machine.hpp"

namespace ecmkit {

enum class StreamAccess { read, write, update };

// How the kernel walks the array. indexed_contiguous covers index-array
// indirection that in practice visits consecutive elements anyway.
enum class Contiguity { contiguous, indexed_contiguous, random };

struct StreamSpec {
  std::string name;
  double elem_b = 8;
  StreamAccess access = StreamAccess::read;
  double accesses_per_it = 1;
  // Average number of consecutive iterations hitting the same element; read
  // volume is divided by this. Only meaningful for read streams.
  double locality_run_length = 1;
  Contiguity contiguity = Contiguity::contiguous;
};

// In-core inputs for one (machine, SIMD) setting. Either the t_ol/t_nol pair
// is present, or only t_serial_override_cy when no split is published.
struct InCoreTimingEntry {
  std::optional<double> t_ol_base_cy;  // overlapping cycles, exp calls excluded
  std::optional<double> t_nol_cy;      // non-overlapping load/store issue cycles
  int n_exp = 0;                       // exp calls per iteration
  std::optional<double> cp_cy;         // dependency-chain critical path
  std::optional<double> t_serial_override_cy;  // single-core in-memory total

  bool has_split() const { return t_ol_base_cy.has_value() && t_nol_cy.has_value(); }
};

struct KernelSpec {
  std::string name;
  std::string display_name;
  std::string category;   // "current", "state", "solver", "delivery", "stream"
  std::string work_unit;  // what one iteration processes, e.g. "compartment"
  std::vector<StreamSpec> streams;
  // Timing entries keyed by machine name, then SIMD level.
  std::map<std::string, std::map<SimdLevel, InCoreTimingEntry>> timing;
  std::optional<int> random_access_count;       // worst-case scattered accesses
  std::optional<int> boundary_indirect_arrays;  // arrays hit through parent indices
};

KernelSpec load_kernel(const std::filesystem::path& file);

// nullptr when the kernel carries nothing for this (machine, simd).
const InCoreTimingEntry* find_timing(const KernelSpec& k, const std::string& machine,
                                     SimdLevel simd);

struct InCoreTimes {
  double t_ol_cy = 0;
  double t_nol_cy = 0;
};

// T_OL = t_ol_base + n_exp * exp throughput at this SIMD level; T_nOL as
// stored. Throws UnsupportedError when the kernel has no split for the pair
// or the machine lacks an exp throughput the kernel needs.
InCoreTimes in_core_times(const KernelSpec& k, const MachineModel& m, SimdLevel simd);

}  // namespace ecmkit
