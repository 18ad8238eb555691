#pragma once

#include <string_view>

namespace ecmkit {

enum class SimdLevel { scalar, sse, avx, avx2, avx512 };

// f64 lanes per register: 1, 2, 4, 4, 8.
int lanes_f64(SimdLevel level);

// Position in the scalar..avx512 widening order, for "at most simd_max" checks.
int simd_rank(SimdLevel level);

std::string_view simd_name(SimdLevel level);
SimdLevel parse_simd(std::string_view name);  // throws ParseError

}  // namespace ecmkit
