#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "test_util.hpp"

#ifndef ECMKIT_CLI_PATH
#error "ECMKIT_CLI_PATH must point at the built command-line binary"
#endif

namespace fs = std::filesystem;

namespace {

struct CmdResult {
  int rc = -1;
  std::string out;
};

// Run the CLI with the given arguments, capturing interleaved stdout/stderr.
CmdResult run(const std::string& args) {
  const std::string cmd = std::string(ECMKIT_CLI_PATH) + " " + args + " 2>&1";
  FILE* p = ::popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  CmdResult r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = ::pclose(p);
  r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// All regular files under a directory, keyed by relative path.
std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::ifstream f(e.path());
    std::ostringstream ss;
    ss << f.rdbuf();
    out[fs::relative(e.path(), root).string()] = ss.str();
  }
  return out;
}

}  // namespace

TEST_CASE("predict prints the contribution and runtime tuples") {
  const CmdResult r = run("predict --kernel im_current --machine ivb --simd sse");
  CHECK(r.rc == 0);
  CHECK(r.out.find("{7.80 || 5.50 | 4.25 | 4.25 | 7.48}") != std::string::npos);
  CHECK(r.out.find("{7.80 ] 9.75 ] 14.0 ] 21.5}") != std::string::npos);
  CHECK(r.out.find("saturates at 3 cores") != std::string::npos);
}

TEST_CASE("predict emits machine-readable json with full precision") {
  const CmdResult r = run(
      "predict --kernel im_current --machine ivb --simd sse --format json");
  REQUIRE(r.rc == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j.at("kernel") == "im_current");
  CHECK(j.at("machine") == "ivb");
  CHECK(j.at("prediction").at("t_mem_cy").get<double>() ==
        doctest::Approx(21.48).epsilon(1e-9));
  CHECK(j.at("prediction").at("n_saturation") == 3);
  CHECK(j.at("contributions").at("t_l1l2_cy").get<double>() ==
        doctest::Approx(4.25).epsilon(1e-12));
  CHECK(j.at("runtime_cy_per_it").get<double>() == doctest::Approx(21.48).epsilon(1e-9));
}

TEST_CASE("predict on an override kernel carries the bandwidth floor") {
  const CmdResult r = run(
      "predict --kernel inh_syn_current --machine skx --simd avx512 --threads 18 "
      "--format json");
  REQUIRE(r.rc == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j.at("prediction").at("from_override") == true);
  CHECK_FALSE(j.at("prediction").contains("t_l1_cy"));
  CHECK(j.at("runtime_cy_per_it").get<double>() == doctest::Approx(3.972).epsilon(1e-3));
}

TEST_CASE("exit codes separate user errors from unsupported requests") {
  CHECK(run("--help").rc == 0);
  CHECK(run("predict --help").rc == 0);
  CHECK(run("nonsense").rc == 1);
  CHECK(run("predict --kernel im_current").rc == 1);        // missing required flags
  CHECK(run("predict --kernel no_such_kernel --machine ivb --simd sse").rc == 1);
  CHECK(run("predict --kernel im_current --machine ivb --simd avx512").rc == 2);
  CHECK(run("predict --kernel im_current --machine ivb --simd sse --format xml").rc == 1);
  CHECK(run("--fixtures /no/such/dir predict --kernel im_current --machine ivb "
            "--simd sse").rc == 1);
}

TEST_CASE("validate scores the shipped measurement corpus cleanly") {
  const CmdResult ivb = run("validate --machine ivb");
  CHECK(ivb.rc == 0);
  CHECK(ivb.out.find("records scored: 85") != std::string::npos);

  const CmdResult skx = run("validate --machine skx --format csv");
  CHECK(skx.rc == 0);
  CHECK(skx.out.find("ih_state,sse,1,l2,runtime") != std::string::npos);
  CHECK(skx.out.find("outlier") != std::string::npos);
}

TEST_CASE("validate exits 3 when records cannot be matched") {
  testutil::TempDir td;
  const fs::path csv = td.write(
      "weird.csv",
      "kernel,machine,simd,threads,residence,cy_per_it_median,cy_per_it_iqr,"
      "mem_b_per_it,avg_freq_ghz\n"
      "mystery_kernel,ivb,sse,1,mem,10.0,0.1,,\n");
  const CmdResult r = run("validate --machine ivb --measurements " + csv.string());
  CHECK(r.rc == 3);
  CHECK(r.out.find("mystery_kernel") != std::string::npos);
}

TEST_CASE("report writes the full artifact set deterministically") {
  testutil::TempDir td;
  const fs::path a = td.path() / "report_a";
  const fs::path b = td.path() / "report_b";
  REQUIRE(run("report --out " + a.string()).rc == 0);
  REQUIRE(run("report --out " + b.string()).rc == 0);

  const auto ta = read_tree(a);
  const auto tb = read_tree(b);
  CHECK(ta.size() == 12);
  CHECK(ta == tb);  // byte-identical across runs

  // The artifact names are part of the interface.
  for (const char* name :
       {"tables/tab_im_current.csv", "tables/tab_exc_syn_current.csv",
        "tables/tab_ih_state.csv", "tables/tab_exc_syn_state.csv", "tables/tab_ivb.csv",
        "tables/tab_skx.csv", "tables/tab_mem.csv", "tables/tab_linalg.csv",
        "tables/tab_delivery.csv", "tables/tab_satur_freq.csv",
        "figures/fig_scaling.csv", "figures/fig_satur_skx_avx512.csv"}) {
    CAPTURE(name);
    CHECK(ta.count(name) == 1);
  }

  // Spot values: bandwidth-bound socket runtimes and the solver tuple.
  CHECK(ta.at("tables/tab_skx.csv").find("exc_syn_state,avx512,9.7,2.1") !=
        std::string::npos);
  CHECK(ta.at("tables/tab_ivb.csv").find("im_current,sse,21.5,7.5") != std::string::npos);
  CHECK(ta.at("tables/tab_mem.csv").find("linear_algebra,88.0") != std::string::npos);
  CHECK(ta.at("tables/tab_linalg.csv").find("skx,8.1,6.0,1.4,4.0,1.9,13.3,7") !=
        std::string::npos);
  CHECK(ta.at("tables/tab_delivery.csv").find("ivb,bc_serial") != std::string::npos);
  CHECK(ta.at("tables/tab_satur_freq.csv").find("16") != std::string::npos);
}
