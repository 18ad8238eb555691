#pragma once

#include "ecmkit/machine.hpp"

namespace ecmkit {

// min(peak flops, arithmetic intensity * memory bandwidth), in GF/s.
// Intensity is flop per byte of memory traffic.
double roofline_gflops(double intensity_flop_b, const MachineModel& m, SimdLevel simd,
                       int n_cores);

}  // namespace ecmkit
