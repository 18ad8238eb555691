#include "ecmkit/roofline.hpp"

#include <algorithm>

#include "ecmkit/error.hpp"

namespace ecmkit {

double roofline_gflops(double intensity_flop_b, const MachineModel& m, SimdLevel simd,
                       int n_cores) {
  if (intensity_flop_b < 0) throw Error("arithmetic intensity must be non-negative");
  return std::min(peak_performance_gflops(m, simd, n_cores),
                  intensity_flop_b * m.mem_bw_gbs);
}

}  // namespace ecmkit
