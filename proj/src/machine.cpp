#include "ecmkit/machine.hpp"

#include <yaml-cpp/yaml.h>

#include "ecmkit/error.hpp"
#include "yaml_util.hpp"

namespace ecmkit {

namespace {

std::map<SimdLevel, double> load_simd_map(const YAML::Node& node, const std::string& file,
                                          const std::string& key) {
  std::map<SimdLevel, double> out;
  const YAML::Node v = node[key];
  if (!v) return out;
  if (!v.IsMap()) throw ParseError(file + ": '" + key + "' must map simd level to value");
  for (const auto& kv : v) {
    SimdLevel lvl = parse_simd(kv.first.as<std::string>());
    double val = kv.second.as<double>();
    if (val <= 0) throw ParseError(file + ": '" + key + "' entries must be positive");
    out[lvl] = val;
  }
  return out;
}

// Per-scalar-iteration cost must not grow when the vectors get wider.
void check_nonincreasing(const std::map<SimdLevel, double>& m, const std::string& file,
                         const std::string& key) {
  double prev = 0;
  bool first = true;
  for (const auto& [lvl, val] : m) {  // map is ordered by rank
    if (!first && val > prev + 1e-12)
      throw ParseError(file + ": '" + key + "' increases at " +
                       std::string(simd_name(lvl)));
    prev = val;
    first = false;
  }
}

}  // namespace

MachineModel load_machine(const std::filesystem::path& file) {
  if (!std::filesystem::exists(file))
    throw ParseError(file.string() + ": no such file");
  YAML::Node root;
  try {
    root = YAML::LoadFile(file.string());
  } catch (const YAML::Exception& e) {
    throw ParseError(file.string() + ": " + e.what());
  }
  const std::string f = file.string();
  yml::require_keys(root, f, "machine description",
                    {"name", "core_freq_ghz", "uncore_freq_ghz", "mem_bw_gbs", "n_cores",
                     "cache_line_b", "l1l2_bw_bcy", "l2l3_bw_bcy", "l2l3_duplex",
                     "l3_policy", "simd_max", "fma_per_cy", "flops_per_fma", "load_per_cy",
                     "store_per_cy", "avg_mem_access_latency_cy", "exp_cy_per_scalar_it",
                     "div_cy_per_scalar_it", "scalar_exp_latency_cy"});

  MachineModel m;
  m.name = yml::require<std::string>(root, f, "name");
  m.core_freq_ghz = yml::require<double>(root, f, "core_freq_ghz");
  m.uncore_freq_ghz = yml::get_or<double>(root, f, "uncore_freq_ghz", m.core_freq_ghz);
  m.mem_bw_gbs = yml::require<double>(root, f, "mem_bw_gbs");
  m.n_cores = yml::require<int>(root, f, "n_cores");
  m.cache_line_b = yml::get_or<double>(root, f, "cache_line_b", 64.0);
  m.l1l2_bw_bcy = yml::require<double>(root, f, "l1l2_bw_bcy");
  if (root["l2l3_bw_bcy"]) m.l2l3_bw_bcy = yml::require<double>(root, f, "l2l3_bw_bcy");
  m.l2l3_duplex = yml::get_or<bool>(root, f, "l2l3_duplex", false);

  const std::string policy = yml::get_or<std::string>(root, f, "l3_policy", "inclusive");
  if (policy == "inclusive")
    m.l3_policy = L3Policy::inclusive;
  else if (policy == "victim")
    m.l3_policy = L3Policy::victim;
  else
    throw ParseError(f + ": l3_policy must be 'inclusive' or 'victim'");

  m.simd_max = parse_simd(yml::require<std::string>(root, f, "simd_max"));
  m.fma_per_cy = yml::get_or<double>(root, f, "fma_per_cy", 1.0);
  m.flops_per_fma = yml::get_or<double>(root, f, "flops_per_fma", 2.0);
  m.load_per_cy = load_simd_map(root, f, "load_per_cy");
  m.store_per_cy = load_simd_map(root, f, "store_per_cy");
  m.avg_mem_access_latency_cy =
      yml::get_or<double>(root, f, "avg_mem_access_latency_cy", 20.0);
  m.throughputs.exp_cy_per_scalar_it = load_simd_map(root, f, "exp_cy_per_scalar_it");
  m.throughputs.div_cy_per_scalar_it = load_simd_map(root, f, "div_cy_per_scalar_it");
  if (root["scalar_exp_latency_cy"])
    m.throughputs.scalar_exp_latency_cy =
        yml::require<double>(root, f, "scalar_exp_latency_cy");

  if (m.name.empty()) throw ParseError(f + ": name must not be empty");
  if (m.core_freq_ghz <= 0 || m.uncore_freq_ghz <= 0)
    throw ParseError(f + ": frequencies must be positive");
  if (m.mem_bw_gbs <= 0) throw ParseError(f + ": mem_bw_gbs must be positive");
  if (m.n_cores < 1) throw ParseError(f + ": n_cores must be at least 1");
  if (m.cache_line_b < 8) throw ParseError(f + ": cache_line_b must be at least 8");
  if (m.l1l2_bw_bcy <= 0) throw ParseError(f + ": l1l2_bw_bcy must be positive");
  if (m.l2l3_bw_bcy && *m.l2l3_bw_bcy <= 0)
    throw ParseError(f + ": l2l3_bw_bcy must be positive");
  if (!m.has_l3() && m.l3_policy == L3Policy::victim)
    throw ParseError(f + ": victim l3_policy requires l2l3_bw_bcy");
  if (!m.has_l3() && m.l2l3_duplex)
    throw ParseError(f + ": l2l3_duplex requires l2l3_bw_bcy");
  check_nonincreasing(m.throughputs.exp_cy_per_scalar_it, f, "exp_cy_per_scalar_it");
  return m;
}

double peak_performance_gflops(const MachineModel& m, SimdLevel simd, int n_cores) {
  if (simd_rank(simd) > simd_rank(m.simd_max))
    throw UnsupportedError(m.name + " does not support " + std::string(simd_name(simd)));
  if (n_cores < 1 || n_cores > m.n_cores)
    throw Error(m.name + ": core count out of range");
  return m.core_freq_ghz * lanes_f64(simd) * m.fma_per_cy * m.flops_per_fma * n_cores;
}

MachineModel rescale_frequency(const MachineModel& m, double core_freq_ghz) {
  if (core_freq_ghz <= 0) throw Error("core frequency must be positive");
  MachineModel out = m;
  double ratio = core_freq_ghz / m.core_freq_ghz;
  out.core_freq_ghz = core_freq_ghz;
  out.uncore_freq_ghz = m.uncore_freq_ghz * ratio;
  // Cache bandwidths are bytes per cycle, latency and instruction costs are
  // cycles: all clock-invariant. Memory bandwidth is absolute and stays put.
  return out;
}

}  // namespace ecmkit
