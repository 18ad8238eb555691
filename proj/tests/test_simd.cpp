#include "doctest.h"
#include "ecmkit/error.hpp"
#include "ecmkit/simd.hpp"

using namespace ecmkit;

TEST_CASE("f64 lane counts per register") {
  CHECK(lanes_f64(SimdLevel::scalar) == 1);
  CHECK(lanes_f64(SimdLevel::sse) == 2);
  CHECK(lanes_f64(SimdLevel::avx) == 4);
  CHECK(lanes_f64(SimdLevel::avx2) == 4);
  CHECK(lanes_f64(SimdLevel::avx512) == 8);
}

TEST_CASE("rank orders levels by width") {
  CHECK(simd_rank(SimdLevel::scalar) < simd_rank(SimdLevel::sse));
  CHECK(simd_rank(SimdLevel::sse) < simd_rank(SimdLevel::avx));
  CHECK(simd_rank(SimdLevel::avx) < simd_rank(SimdLevel::avx2));
  CHECK(simd_rank(SimdLevel::avx2) < simd_rank(SimdLevel::avx512));
}

TEST_CASE("names round-trip through the parser") {
  for (SimdLevel l : {SimdLevel::scalar, SimdLevel::sse, SimdLevel::avx, SimdLevel::avx2,
                      SimdLevel::avx512}) {
    CHECK(parse_simd(simd_name(l)) == l);
  }
}

TEST_CASE("unknown simd name raises a parse error") {
  CHECK_THROWS_AS(parse_simd("avx-512"), ParseError);
  CHECK_THROWS_AS(parse_simd(""), ParseError);
  CHECK_THROWS_AS(parse_simd("AVX"), ParseError);
}
