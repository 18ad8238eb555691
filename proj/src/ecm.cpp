#include "ecmkit/ecm.hpp"

#include <algorithm>
#include <cmath>

#include "ecmkit/error.hpp"
#include "ecmkit/validation.hpp"

namespace ecmkit {

namespace {

// ceil() proof against values that land an ulp above an integer.
int robust_ceil(double x) {
  return static_cast<int>(std::ceil(x - 1e-9 * std::max(1.0, std::fabs(x))));
}

double mem_time_cy(double bytes, const MachineModel& m) {
  // GB/s with GB = 1e9 and GHz cycles: cy = B * GHz / GBs exactly.
  return bytes * m.core_freq_ghz / m.mem_bw_gbs;
}

}  // namespace

std::optional<double> EcmPrediction::at(Residence r) const {
  switch (r) {
    case Residence::l1: return t_l1_cy;
    case Residence::l2: return t_l2_cy;
    case Residence::l3: return t_l3_cy;
    case Residence::mem: return t_mem_cy;
  }
  throw Error("bad residence");
}

EcmContribution contributions(const KernelSpec& k, const MachineModel& m, SimdLevel simd,
                              Residence residence) {
  const InCoreTimes core = in_core_times(k, m, simd);
  const TrafficBreakdown t = traffic(k);
  const LinkVolumes v = link_volumes(t, m, residence);

  EcmContribution c;
  c.t_ol_cy = core.t_ol_cy;
  c.t_nol_cy = core.t_nol_cy;
  c.t_l1l2_cy = v.v_l1l2_b / m.l1l2_bw_bcy;
  if (m.has_l3()) {
    const double bw = *m.l2l3_bw_bcy;
    c.t_l2l3_cy = m.l2l3_duplex
                      ? std::max(v.v_l2l3_read_b, v.v_l2l3_write_b) / bw
                      : (v.v_l2l3_read_b + v.v_l2l3_write_b) / bw;
  }
  c.t_l2mem_cy = mem_time_cy(v.v_l2mem_b, m);
  c.t_l3mem_cy = mem_time_cy(v.v_l3mem_b, m);
  return c;
}

EcmPrediction compose(const EcmContribution& c) {
  EcmPrediction p;
  const double ol = c.t_ol_cy;
  double acc = c.t_nol_cy;
  p.t_l1_cy = std::max(ol, acc);
  acc += c.t_l1l2_cy;
  p.t_l2_cy = std::max(ol, acc);
  acc += c.t_l2l3_cy;
  p.t_l3_cy = std::max(ol, acc);
  acc += c.t_l2mem_cy + c.t_l3mem_cy;
  p.t_mem_cy = std::max(ol, acc);
  p.mem_bottleneck_cy = c.t_mem_cy();
  if (p.mem_bottleneck_cy > 0)
    p.n_saturation = robust_ceil(p.t_mem_cy / p.mem_bottleneck_cy);
  return p;
}

EcmPrediction predict(const KernelSpec& k, const MachineModel& m, SimdLevel simd) {
  const InCoreTimingEntry* e = find_timing(k, m.name, simd);
  if (e && !e->has_split() && e->t_serial_override_cy) {
    // Measured single-core runtime stands in for the model; cache-resident
    // levels stay unknown but the bandwidth floor still comes from traffic.
    if (simd_rank(simd) > simd_rank(m.simd_max))
      throw UnsupportedError(m.name + " does not support " +
                             std::string(simd_name(simd)));
    EcmPrediction p;
    p.from_override = true;
    p.t_mem_cy = *e->t_serial_override_cy;
    const TrafficBreakdown t = traffic(k);
    p.mem_bottleneck_cy = mem_time_cy(t.total_b(), m);
    if (p.mem_bottleneck_cy > 0)
      p.n_saturation = robust_ceil(p.t_mem_cy / p.mem_bottleneck_cy);
    return p;
  }
  EcmPrediction p = compose(contributions(k, m, simd, Residence::mem));
  if (!m.has_l3()) p.t_l3_cy.reset();
  return p;
}

double multicore_cy(const EcmPrediction& p, int n_threads) {
  if (n_threads < 1) throw Error("thread count must be at least 1");
  return std::max(p.t_mem_cy / n_threads, p.mem_bottleneck_cy);
}

double work_rate_per_s(double cy_per_it, const MachineModel& m) {
  if (cy_per_it <= 0) throw Error("cycle count must be positive");
  return m.core_freq_ghz * 1e9 / cy_per_it;
}

std::vector<SaturationPoint> saturation_sweep(const std::vector<WeightedKernel>& kernels,
                                              const MachineModel& m, SimdLevel simd,
                                              const std::vector<double>& core_freqs_ghz,
                                              double threshold) {
  std::vector<SaturationPoint> out;
  for (double f : core_freqs_ghz) {
    const MachineModel scaled = rescale_frequency(m, f);
    SaturationPoint pt;
    pt.core_freq_ghz = f;
    for (int n = 1; n <= m.n_cores; ++n) {
      if (utilization(kernels, scaled, simd, n) >= threshold) {
        pt.n90 = n;
        break;
      }
    }
    out.push_back(pt);
  }
  return out;
}

}  // namespace ecmkit
