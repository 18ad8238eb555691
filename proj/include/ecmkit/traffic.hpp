#pragma once

#include <string_view>

#include "ecmkit/kernel.hpp"

namespace ecmkit {

// Per-iteration data volumes by traffic class, in bytes.
struct TrafficBreakdown {
  double read_b = 0;   // demand reads, locality-weighted
  double wa_b = 0;     // write-allocate line fills for write-only streams
  double dirty_b = 0;  // write-backs of modified lines
  // Clean read footprint (elem_b per read stream, locality-weighted once):
  // the share a victim L3 receives as unmodified evictions from L2.
  double read_only_footprint_b = 0;

  double total_b() const { return read_b + wa_b + dirty_b; }
};

enum class Residence { l1, l2, l3, mem };
std::string_view residence_name(Residence r);
Residence parse_residence(std::string_view name);  // throws ParseError

TrafficBreakdown traffic(const KernelSpec& k);

// Volumes crossing each link when the working set lives at `residence`.
struct LinkVolumes {
  double v_l1l2_b = 0;
  double v_l2l3_read_b = 0;   // into L2
  double v_l2l3_write_b = 0;  // out of L2; on a victim L3 this includes clean evictions
  double v_l2mem_b = 0;       // DRAM->L2 direct path (victim L3 only)
  double v_l3mem_b = 0;
};
LinkVolumes link_volumes(const TrafficBreakdown& t, const MachineModel& m,
                         Residence residence);

// Tree-boundary pessimum: a fraction of iterations loads a whole line through
// parent indirection of which one element is useful, per indirect array.
TrafficBreakdown worst_case_branching(const TrafficBreakdown& t, const KernelSpec& k,
                                      double boundary_fraction, double cache_line_b);

// Scattered-access pessimum: every random access pulls a full line; streams
// walked contiguously keep their per-element cost.
TrafficBreakdown worst_case_random_traffic(const KernelSpec& k, double cache_line_b);

}  // namespace ecmkit
