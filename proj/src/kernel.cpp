#include "ecmkit/kernel.hpp"

#include <yaml-cpp/yaml.h>

#include "ecmkit/error.hpp"
#include "yaml_util.hpp"

namespace ecmkit {

namespace {

StreamAccess parse_access(const std::string& s, const std::string& file) {
  if (s == "read") return StreamAccess::read;
  if (s == "write") return StreamAccess::write;
  if (s == "update") return StreamAccess::update;
  throw ParseError(file + ": stream access must be read, write, or update (got '" + s +
                   "')");
}

Contiguity parse_contiguity(const std::string& s, const std::string& file) {
  if (s == "contiguous") return Contiguity::contiguous;
  if (s == "indexed_contiguous") return Contiguity::indexed_contiguous;
  if (s == "random") return Contiguity::random;
  throw ParseError(file + ": contiguity must be contiguous, indexed_contiguous, or "
                          "random (got '" + s + "')");
}

StreamSpec load_stream(const YAML::Node& node, const std::string& f) {
  yml::require_keys(node, f, "stream",
                    {"name", "elem_b", "access", "accesses_per_it", "locality_run_length",
                     "contiguity"});
  StreamSpec s;
  s.name = yml::require<std::string>(node, f, "name");
  s.elem_b = yml::get_or<double>(node, f, "elem_b", 8.0);
  s.access = parse_access(yml::get_or<std::string>(node, f, "access", "read"), f);
  s.accesses_per_it = yml::get_or<double>(node, f, "accesses_per_it", 1.0);
  s.locality_run_length = yml::get_or<double>(node, f, "locality_run_length", 1.0);
  s.contiguity =
      parse_contiguity(yml::get_or<std::string>(node, f, "contiguity", "contiguous"), f);

  if (s.elem_b <= 0) throw ParseError(f + ": stream '" + s.name + "': elem_b must be positive");
  if (s.accesses_per_it <= 0)
    throw ParseError(f + ": stream '" + s.name + "': accesses_per_it must be positive");
  if (s.locality_run_length < 1)
    throw ParseError(f + ": stream '" + s.name + "': locality_run_length must be >= 1");
  if (s.access != StreamAccess::read) {
    // Written lines are filled and written back once regardless of how often
    // the loop body touches them; these knobs only shape read volume.
    if (s.accesses_per_it != 1)
      throw ParseError(f + ": stream '" + s.name +
                       "': accesses_per_it applies to read streams only");
    if (s.locality_run_length != 1)
      throw ParseError(f + ": stream '" + s.name +
                       "': locality_run_length applies to read streams only");
  }
  return s;
}

InCoreTimingEntry load_timing_entry(const YAML::Node& node, const std::string& f,
                                    int default_n_exp) {
  yml::require_keys(node, f, "timing entry",
                    {"t_ol_base_cy", "t_nol_cy", "n_exp", "cp_cy", "t_serial_override_cy"});
  InCoreTimingEntry e;
  if (node["t_ol_base_cy"]) e.t_ol_base_cy = yml::require<double>(node, f, "t_ol_base_cy");
  if (node["t_nol_cy"]) e.t_nol_cy = yml::require<double>(node, f, "t_nol_cy");
  e.n_exp = yml::get_or<int>(node, f, "n_exp", default_n_exp);
  if (node["cp_cy"]) e.cp_cy = yml::require<double>(node, f, "cp_cy");
  if (node["t_serial_override_cy"])
    e.t_serial_override_cy = yml::require<double>(node, f, "t_serial_override_cy");

  if (e.t_ol_base_cy.has_value() != e.t_nol_cy.has_value())
    throw ParseError(f + ": t_ol_base_cy and t_nol_cy must be given together");
  if (!e.has_split() && !e.t_serial_override_cy)
    throw ParseError(f + ": timing entry needs either the overlap split or "
                         "t_serial_override_cy");
  if (e.n_exp < 0) throw ParseError(f + ": n_exp must be non-negative");
  for (auto v : {e.t_ol_base_cy, e.t_nol_cy, e.cp_cy, e.t_serial_override_cy})
    if (v && *v < 0) throw ParseError(f + ": timing values must be non-negative");
  return e;
}

}  // namespace

KernelSpec load_kernel(const std::filesystem::path& file) {
  if (!std::filesystem::exists(file))
    throw ParseError(file.string() + ": no such file");
  YAML::Node root;
  try {
    root = YAML::LoadFile(file.string());
  } catch (const YAML::Exception& e) {
    throw ParseError(file.string() + ": " + e.what());
  }
  const std::string f = file.string();
  yml::require_keys(root, f, "kernel description",
                    {"name", "display_name", "category", "work_unit", "streams",
                     "exp_per_it", "timing", "random_access_count",
                     "boundary_indirect_arrays"});

  KernelSpec k;
  k.name = yml::require<std::string>(root, f, "name");
  k.display_name = yml::get_or<std::string>(root, f, "display_name", k.name);
  k.category = yml::require<std::string>(root, f, "category");
  k.work_unit = yml::get_or<std::string>(root, f, "work_unit", "iteration");

  const YAML::Node streams = root["streams"];
  if (!streams || !streams.IsSequence() || streams.size() == 0)
    throw ParseError(f + ": 'streams' must be a non-empty sequence");
  for (const auto& sn : streams) k.streams.push_back(load_stream(sn, f));

  const int default_n_exp = yml::get_or<int>(root, f, "exp_per_it", 0);
  if (default_n_exp < 0) throw ParseError(f + ": exp_per_it must be non-negative");

  const YAML::Node timing = root["timing"];
  if (timing) {
    if (!timing.IsMap()) throw ParseError(f + ": 'timing' must map machine names");
    for (const auto& mk : timing) {
      const std::string machine = mk.first.as<std::string>();
      if (!mk.second.IsMap())
        throw ParseError(f + ": timing for '" + machine + "' must map simd levels");
      for (const auto& sk : mk.second) {
        SimdLevel lvl = parse_simd(sk.first.as<std::string>());
        k.timing[machine][lvl] = load_timing_entry(sk.second, f, default_n_exp);
      }
    }
  }

  if (root["random_access_count"]) {
    k.random_access_count = yml::require<int>(root, f, "random_access_count");
    if (*k.random_access_count < 1)
      throw ParseError(f + ": random_access_count must be at least 1");
  }
  if (root["boundary_indirect_arrays"]) {
    k.boundary_indirect_arrays = yml::require<int>(root, f, "boundary_indirect_arrays");
    if (*k.boundary_indirect_arrays < 0)
      throw ParseError(f + ": boundary_indirect_arrays must be non-negative");
  }
  return k;
}

const InCoreTimingEntry* find_timing(const KernelSpec& k, const std::string& machine,
                                     SimdLevel simd) {
  auto mi = k.timing.find(machine);
  if (mi == k.timing.end()) return nullptr;
  auto si = mi->second.find(simd);
  if (si == mi->second.end()) return nullptr;
  return &si->second;
}

InCoreTimes in_core_times(const KernelSpec& k, const MachineModel& m, SimdLevel simd) {
  if (simd_rank(simd) > simd_rank(m.simd_max))
    throw UnsupportedError(m.name + " does not support " + std::string(simd_name(simd)));
  const InCoreTimingEntry* e = find_timing(k, m.name, simd);
  if (!e)
    throw UnsupportedError("kernel '" + k.name + "' has no in-core timing for " + m.name +
                           "/" + std::string(simd_name(simd)));
  if (!e->has_split())
    throw UnsupportedError("kernel '" + k.name + "' has only a serial runtime for " +
                           m.name + "/" + std::string(simd_name(simd)) +
                           ", not an overlap split");
  InCoreTimes t;
  t.t_ol_cy = *e->t_ol_base_cy;
  t.t_nol_cy = *e->t_nol_cy;
  if (e->n_exp > 0) {
    auto it = m.throughputs.exp_cy_per_scalar_it.find(simd);
    if (it == m.throughputs.exp_cy_per_scalar_it.end())
      throw UnsupportedError(m.name + " has no exp throughput for " +
                             std::string(simd_name(simd)));
    t.t_ol_cy += e->n_exp * it->second;
  }
  return t;
}

}  // namespace ecmkit
