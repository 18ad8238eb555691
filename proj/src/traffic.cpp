#include "ecmkit/traffic.hpp"

#include "ecmkit/error.hpp"

namespace ecmkit {

std::string_view residence_name(Residence r) {
  switch (r) {
    case Residence::l1: return "l1";
    case Residence::l2: return "l2";
    case Residence::l3: return "l3";
    case Residence::mem: return "mem";
  }
  throw Error("bad residence");
}

Residence parse_residence(std::string_view name) {
  if (name == "l1") return Residence::l1;
  if (name == "l2") return Residence::l2;
  if (name == "l3") return Residence::l3;
  if (name == "mem") return Residence::mem;
  throw ParseError("unknown residence '" + std::string(name) + "'");
}

TrafficBreakdown traffic(const KernelSpec& k) {
  TrafficBreakdown t;
  for (const StreamSpec& s : k.streams) {
    switch (s.access) {
      case StreamAccess::read:
        t.read_b += s.accesses_per_it * s.elem_b / s.locality_run_length;
        t.read_only_footprint_b += s.elem_b / s.locality_run_length;
        break;
      case StreamAccess::write:
        // A store-only stream allocates the line on the way in and writes it
        // back dirty on the way out.
        t.wa_b += s.elem_b;
        t.dirty_b += s.elem_b;
        break;
      case StreamAccess::update:
        // Read-modify-write: the line arrives through a demand read, so no
        // separate allocation transfer, but it still leaves dirty.
        t.read_b += s.elem_b;
        t.dirty_b += s.elem_b;
        break;
    }
  }
  return t;
}

LinkVolumes link_volumes(const TrafficBreakdown& t, const MachineModel& m,
                         Residence residence) {
  if (residence == Residence::l3 && !m.has_l3())
    throw UnsupportedError(m.name + " has no shared cache level");
  LinkVolumes v;
  if (residence == Residence::l1) return v;
  v.v_l1l2_b = t.total_b();
  if (residence == Residence::l2) return v;

  const bool victim = m.has_l3() && m.l3_policy == L3Policy::victim;
  if (residence == Residence::l3) {
    v.v_l2l3_read_b = t.read_b + t.wa_b;
    // A victim L3 is filled by L2 evictions, so clean lines cross the link
    // once on the way down in addition to the dirty write-backs.
    v.v_l2l3_write_b = victim ? t.read_only_footprint_b + t.dirty_b : t.dirty_b;
    return v;
  }

  // Memory-resident working set.
  if (victim) {
    v.v_l2mem_b = t.read_b + t.wa_b;  // demand path bypasses the L3
    v.v_l2l3_read_b = 0;
    v.v_l2l3_write_b = t.read_only_footprint_b + t.dirty_b;
    v.v_l3mem_b = t.dirty_b;
  } else if (m.has_l3()) {
    v.v_l2l3_read_b = t.read_b + t.wa_b;
    v.v_l2l3_write_b = t.dirty_b;
    v.v_l3mem_b = t.total_b();
  } else {
    v.v_l2mem_b = t.total_b();
  }
  return v;
}

TrafficBreakdown worst_case_branching(const TrafficBreakdown& t, const KernelSpec& k,
                                      double boundary_fraction, double cache_line_b) {
  if (boundary_fraction < 0 || boundary_fraction > 1)
    throw Error("boundary_fraction must be in [0, 1]");
  TrafficBreakdown out = t;
  const int arrays = k.boundary_indirect_arrays.value_or(0);
  // At a branch point the parent index jumps, so each indirect array loads a
  // whole line of which one 8-byte element is useful.
  out.read_b += boundary_fraction * arrays * (cache_line_b - 8.0);
  return out;
}

TrafficBreakdown worst_case_random_traffic(const KernelSpec& k, double cache_line_b) {
  if (!k.random_access_count)
    throw UnsupportedError("kernel '" + k.name + "' has no scattered-access count");
  TrafficBreakdown t;
  // Every scattered access misses and pulls a full line; the split mirrors
  // which of those lines leave dirty.
  int written_lines = 0;
  for (const StreamSpec& s : k.streams) {
    if (s.contiguity == Contiguity::random) {
      if (s.access != StreamAccess::read) ++written_lines;
    } else {
      // Streams walked in order keep their per-element cost.
      switch (s.access) {
        case StreamAccess::read:
          t.read_b += s.accesses_per_it * s.elem_b / s.locality_run_length;
          break;
        case StreamAccess::write:
          t.wa_b += s.elem_b;
          t.dirty_b += s.elem_b;
          break;
        case StreamAccess::update:
          t.read_b += s.elem_b;
          t.dirty_b += s.elem_b;
          break;
      }
    }
  }
  t.dirty_b += written_lines * cache_line_b;
  t.read_b += (*k.random_access_count - written_lines) * cache_line_b;
  return t;
}

}  // namespace ecmkit
