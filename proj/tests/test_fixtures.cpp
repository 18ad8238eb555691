#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "ecmkit/fixtures.hpp"
#include "test_util.hpp"

using namespace ecmkit;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& s) {
  std::ofstream f(p);
  f << s;
}

// Copy of the shipped fixture tree that a test may corrupt freely.
fs::path tampered_copy(const testutil::TempDir& td) {
  const fs::path dst = td.path() / "fixtures";
  fs::copy(testutil::fixtures(), dst, fs::copy_options::recursive);
  return dst;
}

}  // namespace

TEST_CASE("fixture path helpers") {
  const fs::path d = "/somewhere";
  CHECK(machine_file(d, "ivb") == fs::path("/somewhere/machines/ivb.yaml"));
  CHECK(kernel_file(d, "ih_state") == fs::path("/somewhere/kernels/ih_state.yaml"));
  CHECK_FALSE(default_fixture_dir().empty());
}

TEST_CASE("manifest names every shipped file and its source") {
  const auto manifest = load_manifest(testutil::fixtures());
  CHECK(manifest.size() >= 20);
  for (const auto& e : manifest) {
    CHECK_FALSE(e.file.empty());
    CHECK_FALSE(e.source.empty());
    CHECK(fs::exists(testutil::fixtures() / e.file));
  }
}

TEST_CASE("reference tables load with the expected shapes") {
  const auto contrib = load_reference_contributions(testutil::fixtures() / "reference" /
                                                    "contributions.csv");
  REQUIRE(contrib.size() == 25);
  CHECK(contrib.front().kernel == "im_current");
  CHECK(contrib.front().t_ol == doctest::Approx(7.8));
  REQUIRE(contrib.front().p_l1.has_value());
  CHECK(*contrib.front().p_l1 == doctest::Approx(7.8));

  const auto runtimes = load_reference_runtimes(testutil::fixtures() / "reference" /
                                                "serial_socket.csv");
  CHECK(runtimes.size() == 60);

  const auto volumes = load_reference_volumes(testutil::fixtures() / "reference" /
                                              "mem_volumes.csv");
  CHECK(volumes.size() == 15);

  const auto sat = load_reference_saturation(testutil::fixtures() / "reference" /
                                             "saturation.csv");
  REQUIRE(sat.size() == 6);
  CHECK(sat.front().n90 == 16);

  const auto del = load_reference_delivery(testutil::fixtures() / "reference" /
                                           "delivery.csv");
  REQUIRE(del.size() == 10);
  int flagged = 0;
  for (const auto& r : del)
    if (!r.flag.empty()) ++flagged;
  CHECK(flagged == 4);  // two diagnostics, one measured and one back-solved bandwidth
}

TEST_CASE("shipped fixtures verify against their own model recomputation") {
  const FixtureReport rep = verify_fixtures(testutil::fixtures());
  for (const auto& m : rep.mismatches) {
    CAPTURE(m.fixture);
    CAPTURE(m.anchor);
    FAIL_CHECK(m.message);
  }
  CHECK(rep.ok());
  CHECK(rep.checked > 150);
}

TEST_CASE("fixture verification actually bites: a tampered value is caught") {
  testutil::TempDir td;
  const fs::path dir = tampered_copy(td);
  const fs::path f = dir / "reference" / "contributions.csv";
  std::string s = slurp(f);
  const std::string needle = "im_current,ivb,sse,7.8";
  const auto pos = s.find(needle);
  REQUIRE(pos != std::string::npos);
  s.replace(pos, needle.size(), "im_current,ivb,sse,9.9");
  spit(f, s);

  const FixtureReport rep = verify_fixtures(dir);
  CHECK_FALSE(rep.ok());
  bool names_file = false;
  for (const auto& m : rep.mismatches)
    if (m.fixture.find("contributions.csv") != std::string::npos) names_file = true;
  CHECK(names_file);
}

TEST_CASE("fixture verification catches a manifest that has drifted") {
  testutil::TempDir td;
  const fs::path dir = tampered_copy(td);
  const fs::path f = dir / "manifest.csv";
  std::string s = slurp(f);
  const std::string needle = "machines/ivb.yaml";
  const auto pos = s.find(needle);
  REQUIRE(pos != std::string::npos);
  s.replace(pos, needle.size(), "machines/ghost.yaml");
  spit(f, s);

  const FixtureReport rep = verify_fixtures(dir);
  // Two directions break: the manifest names a missing file, and a shipped
  // file is no longer listed.
  CHECK(rep.mismatches.size() >= 2);
}
