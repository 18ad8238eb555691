#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ecmkit/kernel.hpp"
#include "ecmkit/simd.hpp"

namespace ecmkit {

// ECMKIT_FIXTURES env var when set, else the directory baked in at build time.
std::filesystem::path default_fixture_dir();

std::filesystem::path machine_file(const std::filesystem::path& dir, const std::string& name);
std::filesystem::path kernel_file(const std::filesystem::path& dir, const std::string& name);

struct ManifestEntry {
  std::string file;    // relative to the fixture dir
  std::string source;  // anchor in the study the data was transcribed from
  std::string note;
};
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& dir);

// Transcribed single-core model tuples: contribution terms plus the composed
// per-level predictions where published.
struct ReferenceContribution {
  std::string kernel;
  std::string machine;
  SimdLevel simd = SimdLevel::scalar;
  double t_ol = 0, t_nol = 0, t_l1l2 = 0, t_l2l3 = 0, t_mem = 0;
  std::optional<double> p_l1, p_l2, p_l3;
  double p_mem = 0;
};
std::vector<ReferenceContribution> load_reference_contributions(
    const std::filesystem::path& file);

// Transcribed single-core and full-socket in-memory predictions.
struct ReferenceRuntime {
  std::string kernel;
  std::string machine;
  SimdLevel simd = SimdLevel::scalar;
  double serial_cy = 0;
  double socket_cy = 0;
};
std::vector<ReferenceRuntime> load_reference_runtimes(const std::filesystem::path& file);

struct ReferenceVolume {
  std::string kernel;
  double total_b = 0;
};
std::vector<ReferenceVolume> load_reference_volumes(const std::filesystem::path& file);

struct ReferenceSaturation {
  std::string machine;
  SimdLevel simd = SimdLevel::scalar;
  double core_freq_ghz = 0;
  int n90 = 0;
};
std::vector<ReferenceSaturation> load_reference_saturation(const std::filesystem::path& file);

// Event-delivery scenario targets with the published measurements alongside.
// `flag` is non-empty for rows whose inputs are not fully explained by the
// machine description (e.g. a back-solved bandwidth) or that are diagnostics.
struct ReferenceDelivery {
  std::string kernel;
  std::string machine;
  std::string scenario;  // bc_serial, wc_serial, bc_parallel, wc_parallel, wc_adjusted
  int threads = 1;
  std::optional<double> effective_bw_gbs;
  double pred_cy = 0;
  std::optional<double> meas_cy, meas_iqr_cy;
  std::string flag;
};
std::vector<ReferenceDelivery> load_reference_delivery(const std::filesystem::path& file);

struct FixtureMismatch {
  std::string fixture;  // file the bad value lives in
  std::string anchor;   // source anchor from the manifest
  std::string message;
};
struct FixtureReport {
  int checked = 0;
  std::vector<FixtureMismatch> mismatches;
  bool ok() const { return mismatches.empty(); }
};

// Self-test of the shipped data: manifest completeness both ways, traffic
// totals against the transcribed volume table, recomputed contributions and
// runtimes against the transcribed reference tuples, override coverage for
// every (kernel, machine, simd) the runtime table lists.
FixtureReport verify_fixtures(const std::filesystem::path& dir);

}  // namespace ecmkit
