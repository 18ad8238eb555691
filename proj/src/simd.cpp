#include "ecmkit/simd.hpp"

#include "ecmkit/error.hpp"

namespace ecmkit {

int lanes_f64(SimdLevel s) {
  switch (s) {
    case SimdLevel::scalar: return 1;
    case SimdLevel::sse: return 2;
    case SimdLevel::avx: return 4;
    case SimdLevel::avx2: return 4;
    case SimdLevel::avx512: return 8;
  }
  throw Error("bad simd level");
}

int simd_rank(SimdLevel s) { return static_cast<int>(s); }

std::string_view simd_name(SimdLevel s) {
  switch (s) {
    case SimdLevel::scalar: return "scalar";
    case SimdLevel::sse: return "sse";
    case SimdLevel::avx: return "avx";
    case SimdLevel::avx2: return "avx2";
    case SimdLevel::avx512: return "avx512";
  }
  throw Error("bad simd level");
}

SimdLevel parse_simd(std::string_view s) {
  if (s == "scalar") return SimdLevel::scalar;
  if (s == "sse") return SimdLevel::sse;
  if (s == "avx") return SimdLevel::avx;
  if (s == "avx2") return SimdLevel::avx2;
  if (s == "avx512") return SimdLevel::avx512;
  throw ParseError("unknown simd level '" + std::string(s) + "'");
}

}  // namespace ecmkit
