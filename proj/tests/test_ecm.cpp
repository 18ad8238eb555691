#include <cmath>

#include "doctest.h"
#include "ecmkit/ecm.hpp"
#include "ecmkit/error.hpp"
#include "ecmkit/validation.hpp"
#include "test_util.hpp"

using namespace ecmkit;

TEST_CASE("contribution terms, worked by hand on the shipped machines") {
  const MachineModel ivb = testutil::machine("ivb");
  const MachineModel skx = testutil::machine("skx");

  // 136 B through a 32 B/cy L1<->L2 link and an inclusive L3 on the same
  // budget; memory costs 136 B * 2.2 GHz / 40 GB/s.
  const EcmContribution im = contributions(testutil::kernel("im_current"), ivb,
                                           SimdLevel::sse, Residence::mem);
  CHECK(im.t_ol_cy == doctest::Approx(7.8));
  CHECK(im.t_nol_cy == doctest::Approx(5.5));
  CHECK(im.t_l1l2_cy == doctest::Approx(4.25));
  CHECK(im.t_l2l3_cy == doctest::Approx(4.25));
  CHECK(im.t_l2mem_cy == doctest::Approx(0.0));
  CHECK(im.t_l3mem_cy == doctest::Approx(136.0 * 2.2 / 40.0));
  CHECK(im.t_mem_cy() == doctest::Approx(7.48));

  // Victim L3 with a 16 B/cy duplex link: the wider direction decides, and
  // memory time covers the direct demand path plus the dirty write-backs.
  const EcmContribution exc = contributions(testutil::kernel("exc_syn_current"), skx,
                                            SimdLevel::avx512, Residence::mem);
  const double read_wa = 16.0 / 3 + 48.0 + 8.0 + 72.0;      // 133.33 B into L2
  const double evict = 16.0 / 3 + 48.0 + 8.0 + 72.0;        // footprint + dirty out
  CHECK(exc.t_ol_cy == doctest::Approx(7.2));
  CHECK(exc.t_nol_cy == doctest::Approx(3.5));
  CHECK(exc.t_l1l2_cy == doctest::Approx((205.0 + 1.0 / 3) / 64.0));
  CHECK(exc.t_l2l3_cy == doctest::Approx(std::max(read_wa, evict) / 16.0));
  CHECK(exc.t_l2mem_cy == doctest::Approx(read_wa * 2.3 / 105.0));
  CHECK(exc.t_l3mem_cy == doctest::Approx(72.0 * 2.3 / 105.0));
  CHECK(exc.t_mem_cy() == doctest::Approx((205.0 + 1.0 / 3) * 2.3 / 105.0));
}

TEST_CASE("composition takes the slowest of overlap and accumulated transfers") {
  const MachineModel ivb = testutil::machine("ivb");
  const EcmPrediction p = predict(testutil::kernel("im_current"), ivb, SimdLevel::sse);
  REQUIRE(p.t_l1_cy.has_value());
  REQUIRE(p.t_l2_cy.has_value());
  REQUIRE(p.t_l3_cy.has_value());
  CHECK(*p.t_l1_cy == doctest::Approx(7.8));    // overlap still wins
  CHECK(*p.t_l2_cy == doctest::Approx(9.75));   // 5.5 + 4.25
  CHECK(*p.t_l3_cy == doctest::Approx(14.0));
  CHECK(p.t_mem_cy == doctest::Approx(21.48));
  CHECK(p.mem_bottleneck_cy == doctest::Approx(7.48));
  REQUIRE(p.n_saturation.has_value());
  CHECK(*p.n_saturation == 3);  // ceil(21.48 / 7.48)
  CHECK_FALSE(p.from_override);
}

TEST_CASE("textbook streaming kernel on the victim-cache machine") {
  const MachineModel skx = testutil::machine("skx");
  const EcmPrediction p = predict(testutil::kernel("stream_triad"), skx, SimdLevel::avx);
  CHECK(*p.t_l1_cy == doctest::Approx(0.375));
  CHECK(*p.t_l2_cy == doctest::Approx(0.75));
  CHECK(*p.t_l3_cy == doctest::Approx(2.25));
  CHECK(p.t_mem_cy == doctest::Approx(0.25 + 0.5 + 1.5 + 32.0 * 2.3 / 105.0));
  CHECK(*p.n_saturation == 5);
}

TEST_CASE("kernels without a published split fall back to the stored runtime") {
  const MachineModel skx = testutil::machine("skx");
  const EcmPrediction p = predict(testutil::kernel("inh_syn_current"), skx,
                                  SimdLevel::avx512);
  CHECK(p.from_override);
  CHECK_FALSE(p.t_l1_cy.has_value());
  CHECK_FALSE(p.t_l2_cy.has_value());
  CHECK_FALSE(p.t_l3_cy.has_value());
  CHECK(p.t_mem_cy == doctest::Approx(16.6));
  // The bandwidth floor still comes from the stream volumes: 181.33 B.
  CHECK(p.mem_bottleneck_cy == doctest::Approx((181.0 + 1.0 / 3) * 2.3 / 105.0));
  CHECK(multicore_cy(p, 18) == doctest::Approx(3.972).epsilon(1e-3));
}

TEST_CASE("prediction propagates unsupported pairs") {
  const MachineModel ivb = testutil::machine("ivb");
  CHECK_THROWS_AS(predict(testutil::kernel("im_current"), ivb, SimdLevel::avx512),
                  UnsupportedError);
  CHECK_THROWS_AS(predict(testutil::kernel("stream_triad"), ivb, SimdLevel::sse),
                  UnsupportedError);
}

TEST_CASE("machines without a shared cache report no L3-resident level") {
  MachineModel m = testutil::synth_machine();
  m.l2l3_bw_bcy.reset();
  KernelSpec k = testutil::kernel("stream_triad");
  InCoreTimingEntry e;
  e.t_ol_base_cy = 1.0;
  e.t_nol_cy = 0.5;
  k.timing["synth"][SimdLevel::sse] = e;
  const EcmPrediction p = predict(k, m, SimdLevel::sse);
  CHECK(p.t_l1_cy.has_value());
  CHECK(p.t_l2_cy.has_value());
  CHECK_FALSE(p.t_l3_cy.has_value());
  CHECK(p.t_mem_cy == doctest::Approx(0.5 + 1.0 + 32.0 * 2.0 / 40.0));
}

TEST_CASE("multicore runtime is the serial share until bandwidth pins it") {
  const MachineModel ivb = testutil::machine("ivb");
  const EcmPrediction p = predict(testutil::kernel("im_current"), ivb, SimdLevel::sse);
  CHECK(multicore_cy(p, 1) == doctest::Approx(p.t_mem_cy));
  CHECK(multicore_cy(p, 2) == doctest::Approx(p.t_mem_cy / 2));
  CHECK(multicore_cy(p, 10) == doctest::Approx(7.48));  // bandwidth-bound
  CHECK(multicore_cy(p, 1000) == doctest::Approx(7.48));
  CHECK_THROWS_AS(multicore_cy(p, 0), Error);
}

TEST_CASE("saturation core count survives exact integer ratios") {
  EcmContribution c;
  c.t_ol_cy = 0.0;
  c.t_nol_cy = 6.6;
  c.t_l2mem_cy = 1.1;  // prediction 7.7, ratio 7.7/1.1 = 7 up to rounding
  const EcmPrediction p = compose(c);
  REQUIRE(p.n_saturation.has_value());
  CHECK(*p.n_saturation == 7);
}

TEST_CASE("kernels with no traffic never saturate") {
  EcmContribution c;
  c.t_ol_cy = 5.0;
  c.t_nol_cy = 3.0;
  const EcmPrediction p = compose(c);
  CHECK(p.t_mem_cy == doctest::Approx(5.0));
  CHECK(p.mem_bottleneck_cy == doctest::Approx(0.0));
  CHECK_FALSE(p.n_saturation.has_value());
}

TEST_CASE("work rate converts cycles per iteration to iterations per second") {
  const MachineModel ivb = testutil::machine("ivb");
  CHECK(work_rate_per_s(22.0, ivb) == doctest::Approx(2.2e9 / 22.0));
  CHECK_THROWS_AS(work_rate_per_s(0.0, ivb), Error);
}

TEST_CASE("saturation sweep reproduces the published core counts per clock") {
  const MachineModel skx = testutil::machine("skx");
  std::vector<WeightedKernel> mix;
  for (const auto& [name, w] : load_weights(testutil::fixtures() / "weights" /
                                            "iteration_weights.csv"))
    mix.push_back({testutil::kernel(name), w});

  struct Cell {
    SimdLevel simd;
    int at_2_3, at_3_5;
  };
  for (const Cell& c : {Cell{SimdLevel::sse, 16, 11}, Cell{SimdLevel::avx, 12, 8},
                        Cell{SimdLevel::avx512, 6, 4}}) {
    const auto pts = saturation_sweep(mix, skx, c.simd, {2.3, 3.5}, 0.9);
    REQUIRE(pts.size() == 2);
    REQUIRE(pts[0].n90.has_value());
    REQUIRE(pts[1].n90.has_value());
    CHECK(*pts[0].n90 == c.at_2_3);
    CHECK(*pts[1].n90 == c.at_3_5);
  }

  // A threshold above 1 is unreachable by construction.
  const auto none = saturation_sweep(mix, skx, SimdLevel::avx, {2.3}, 1.5);
  CHECK_FALSE(none[0].n90.has_value());
}
