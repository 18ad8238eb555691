#include "ecmkit/fixtures.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <set>

#include "ecmkit/delivery.hpp"
#include "ecmkit/ecm.hpp"
#include "ecmkit/error.hpp"
#include "ecmkit/validation.hpp"
#include "csv.hpp"

#ifndef ECMKIT_DEFAULT_FIXTURES
#define ECMKIT_DEFAULT_FIXTURES ""
#endif

namespace ecmkit {

namespace fs = std::filesystem;

std::filesystem::path default_fixture_dir() {
  if (const char* env = std::getenv("ECMKIT_FIXTURES"); env && *env) return env;
  const std::string built_in = ECMKIT_DEFAULT_FIXTURES;
  if (built_in.empty())
    throw Error("no fixture directory: set ECMKIT_FIXTURES or pass one explicitly");
  return built_in;
}

std::filesystem::path machine_file(const std::filesystem::path& dir,
                                   const std::string& name) {
  return dir / "machines" / (name + ".yaml");
}

std::filesystem::path kernel_file(const std::filesystem::path& dir,
                                  const std::string& name) {
  return dir / "kernels" / (name + ".yaml");
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& dir) {
  const csv::Table t = csv::read(dir / "manifest.csv");
  const int cf = t.col("file"), cs = t.col("source"), cn = t.col("note");
  std::vector<ManifestEntry> out;
  for (const auto& row : t.rows) {
    ManifestEntry e;
    e.file = row[cf];
    e.source = cs < static_cast<int>(row.size()) ? row[cs] : "";
    e.note = cn < static_cast<int>(row.size()) ? row[cn] : "";
    if (e.file.empty()) throw ParseError(t.file + ": manifest row without a file");
    out.push_back(e);
  }
  return out;
}

std::vector<ReferenceContribution> load_reference_contributions(
    const std::filesystem::path& file) {
  const csv::Table t = csv::read(file);
  const int ck = t.col("kernel"), cm = t.col("machine"), cs = t.col("simd");
  const int col = t.col("t_ol"), cnol = t.col("t_nol"), c12 = t.col("t_l1l2");
  const int c23 = t.col("t_l2l3"), cme = t.col("t_mem");
  const int p1 = t.col("p_l1"), p2 = t.col("p_l2"), p3 = t.col("p_l3"),
            pm = t.col("p_mem");
  std::vector<ReferenceContribution> out;
  for (const auto& row : t.rows) {
    ReferenceContribution r;
    r.kernel = row[ck];
    r.machine = row[cm];
    r.simd = parse_simd(row[cs]);
    r.t_ol = csv::to_double(t, row, col);
    r.t_nol = csv::to_double(t, row, cnol);
    r.t_l1l2 = csv::to_double(t, row, c12);
    r.t_l2l3 = csv::to_double(t, row, c23);
    r.t_mem = csv::to_double(t, row, cme);
    if (!row[p1].empty()) r.p_l1 = csv::to_double(t, row, p1);
    if (!row[p2].empty()) r.p_l2 = csv::to_double(t, row, p2);
    if (!row[p3].empty()) r.p_l3 = csv::to_double(t, row, p3);
    r.p_mem = csv::to_double(t, row, pm);
    out.push_back(r);
  }
  return out;
}

std::vector<ReferenceRuntime> load_reference_runtimes(const std::filesystem::path& file) {
  const csv::Table t = csv::read(file);
  const int ck = t.col("kernel"), cm = t.col("machine"), cs = t.col("simd");
  const int cse = t.col("serial_cy"), cso = t.col("socket_cy");
  std::vector<ReferenceRuntime> out;
  for (const auto& row : t.rows) {
    ReferenceRuntime r;
    r.kernel = row[ck];
    r.machine = row[cm];
    r.simd = parse_simd(row[cs]);
    r.serial_cy = csv::to_double(t, row, cse);
    r.socket_cy = csv::to_double(t, row, cso);
    out.push_back(r);
  }
  return out;
}

std::vector<ReferenceVolume> load_reference_volumes(const std::filesystem::path& file) {
  const csv::Table t = csv::read(file);
  const int ck = t.col("kernel"), cv = t.col("total_b");
  std::vector<ReferenceVolume> out;
  for (const auto& row : t.rows)
    out.push_back({row[ck], csv::to_double(t, row, cv)});
  return out;
}

std::vector<ReferenceSaturation> load_reference_saturation(
    const std::filesystem::path& file) {
  const csv::Table t = csv::read(file);
  const int cm = t.col("machine"), cs = t.col("simd");
  const int cf = t.col("core_freq_ghz"), cn = t.col("n90");
  std::vector<ReferenceSaturation> out;
  for (const auto& row : t.rows) {
    ReferenceSaturation r;
    r.machine = row[cm];
    r.simd = parse_simd(row[cs]);
    r.core_freq_ghz = csv::to_double(t, row, cf);
    r.n90 = csv::to_int(t, row, cn);
    out.push_back(r);
  }
  return out;
}

std::vector<ReferenceDelivery> load_reference_delivery(const std::filesystem::path& file) {
  const csv::Table t = csv::read(file);
  const int ck = t.col("kernel"), cm = t.col("machine"), cs = t.col("scenario");
  const int cn = t.col("threads"), cb = t.col("effective_bw_gbs");
  const int cp = t.col("pred_cy"), cme = t.col("meas_cy"), ci = t.col("meas_iqr_cy");
  const int cf = t.col("flag");
  std::vector<ReferenceDelivery> out;
  for (const auto& row : t.rows) {
    ReferenceDelivery r;
    r.kernel = row[ck];
    r.machine = row[cm];
    r.scenario = row[cs];
    r.threads = csv::to_int(t, row, cn);
    if (!row[cb].empty()) r.effective_bw_gbs = csv::to_double(t, row, cb);
    r.pred_cy = csv::to_double(t, row, cp);
    if (!row[cme].empty()) r.meas_cy = csv::to_double(t, row, cme);
    if (!row[ci].empty()) r.meas_iqr_cy = csv::to_double(t, row, ci);
    r.flag = cf < static_cast<int>(row.size()) ? row[cf] : "";
    out.push_back(r);
  }
  return out;
}

namespace {

// Rounded transcriptions carry one decimal; the source's own tables disagree
// with each other by up to that much in places.
constexpr double kTupleTol = 0.1 + 1e-9;
// Scenario targets are checked relatively; parallel values mix rounded inputs.
constexpr double kScenarioRelTol = 0.02;

struct Checker {
  FixtureReport& rep;
  std::string fixture;
  std::string anchor;

  void fail(const std::string& msg) { rep.mismatches.push_back({fixture, anchor, msg}); }

  void near(const std::string& what, double got, double want, double tol) {
    ++rep.checked;
    if (std::fabs(got - want) > tol)
      fail(what + ": recomputed " + std::to_string(got) + ", stored " +
           std::to_string(want));
  }

  void rel_near(const std::string& what, double got, double want, double tol) {
    ++rep.checked;
    if (std::fabs(got - want) > tol * std::fabs(want))
      fail(what + ": recomputed " + std::to_string(got) + ", stored " +
           std::to_string(want));
  }

  void equal_int(const std::string& what, int got, int want) {
    ++rep.checked;
    if (got != want)
      fail(what + ": recomputed " + std::to_string(got) + ", stored " +
           std::to_string(want));
  }
};

std::string manifest_anchor(const std::vector<ManifestEntry>& manifest,
                            const std::string& file) {
  for (const auto& e : manifest)
    if (e.file == file) return e.source;
  return "";
}

}  // namespace

FixtureReport verify_fixtures(const std::filesystem::path& dir) {
  FixtureReport rep;
  const std::vector<ManifestEntry> manifest = load_manifest(dir);

  // Manifest and directory must list exactly the same files.
  std::set<std::string> listed;
  for (const auto& e : manifest) {
    if (!listed.insert(e.file).second)
      rep.mismatches.push_back({"manifest.csv", "", "duplicate entry " + e.file});
    if (!fs::exists(dir / e.file))
      rep.mismatches.push_back({"manifest.csv", "", "listed file missing: " + e.file});
    ++rep.checked;
  }
  for (const auto& p : fs::recursive_directory_iterator(dir)) {
    if (!p.is_regular_file()) continue;
    const std::string rel = fs::relative(p.path(), dir).generic_string();
    if (rel == "manifest.csv") continue;
    ++rep.checked;
    if (!listed.count(rel))
      rep.mismatches.push_back({rel, "", "file not listed in manifest.csv"});
  }

  // Everything below needs the machine and kernel descriptions to load.
  std::map<std::string, MachineModel> machines;
  std::map<std::string, KernelSpec> kernels;
  try {
    for (const auto& p : fs::directory_iterator(dir / "machines")) {
      MachineModel m = load_machine(p.path());
      if (p.path().stem().string() != m.name)
        rep.mismatches.push_back({fs::relative(p.path(), dir).generic_string(), "",
                                  "file name does not match machine name " + m.name});
      machines.emplace(m.name, std::move(m));
    }
    for (const auto& p : fs::directory_iterator(dir / "kernels")) {
      KernelSpec k = load_kernel(p.path());
      if (p.path().stem().string() != k.name)
        rep.mismatches.push_back({fs::relative(p.path(), dir).generic_string(), "",
                                  "file name does not match kernel name " + k.name});
      kernels.emplace(k.name, std::move(k));
    }
  } catch (const Error& e) {
    rep.mismatches.push_back({"", "", std::string("load failure: ") + e.what()});
    return rep;
  }

  auto find_kernel = [&](Checker& c, const std::string& name) -> const KernelSpec* {
    auto it = kernels.find(name);
    if (it == kernels.end()) {
      c.fail("unknown kernel '" + name + "'");
      return nullptr;
    }
    return &it->second;
  };
  auto find_machine = [&](Checker& c, const std::string& name) -> const MachineModel* {
    auto it = machines.find(name);
    if (it == machines.end()) {
      c.fail("unknown machine '" + name + "'");
      return nullptr;
    }
    return &it->second;
  };

  // Per-iteration volumes.
  {
    Checker c{rep, "reference/mem_volumes.csv",
              manifest_anchor(manifest, "reference/mem_volumes.csv")};
    for (const auto& r : load_reference_volumes(dir / "reference/mem_volumes.csv")) {
      const KernelSpec* k = find_kernel(c, r.kernel);
      if (!k) continue;
      c.near(r.kernel + " volume", traffic(*k).total_b(), r.total_b, kTupleTol);
    }
  }

  // Contribution tuples and their composed per-level runtimes.
  {
    Checker c{rep, "reference/contributions.csv",
              manifest_anchor(manifest, "reference/contributions.csv")};
    for (const auto& r :
         load_reference_contributions(dir / "reference/contributions.csv")) {
      const KernelSpec* k = find_kernel(c, r.kernel);
      const MachineModel* m = find_machine(c, r.machine);
      if (!k || !m) continue;
      const std::string tag =
          r.kernel + "/" + r.machine + "/" + std::string(simd_name(r.simd));
      try {
        const EcmContribution got = contributions(*k, *m, r.simd, Residence::mem);
        c.near(tag + " t_ol", got.t_ol_cy, r.t_ol, kTupleTol);
        c.near(tag + " t_nol", got.t_nol_cy, r.t_nol, kTupleTol);
        c.near(tag + " t_l1l2", got.t_l1l2_cy, r.t_l1l2, kTupleTol);
        c.near(tag + " t_l2l3", got.t_l2l3_cy, r.t_l2l3, kTupleTol);
        c.near(tag + " t_mem", got.t_mem_cy(), r.t_mem, kTupleTol);
        const EcmPrediction p = compose(got);
        if (r.p_l1) c.near(tag + " p_l1", *p.t_l1_cy, *r.p_l1, kTupleTol);
        if (r.p_l2) c.near(tag + " p_l2", *p.t_l2_cy, *r.p_l2, kTupleTol);
        if (r.p_l3) c.near(tag + " p_l3", *p.t_l3_cy, *r.p_l3, kTupleTol);
        c.near(tag + " p_mem", p.t_mem_cy, r.p_mem, kTupleTol);
      } catch (const Error& e) {
        c.fail(tag + ": " + e.what());
      }
    }
  }

  // Single-core and full-socket in-memory runtimes.
  {
    Checker c{rep, "reference/serial_socket.csv",
              manifest_anchor(manifest, "reference/serial_socket.csv")};
    for (const auto& r : load_reference_runtimes(dir / "reference/serial_socket.csv")) {
      const KernelSpec* k = find_kernel(c, r.kernel);
      const MachineModel* m = find_machine(c, r.machine);
      if (!k || !m) continue;
      const std::string tag =
          r.kernel + "/" + r.machine + "/" + std::string(simd_name(r.simd));
      try {
        const EcmPrediction p = predict(*k, *m, r.simd);
        c.near(tag + " serial", p.t_mem_cy, r.serial_cy, kTupleTol);
        c.near(tag + " socket", multicore_cy(p, m->n_cores), r.socket_cy, kTupleTol);
      } catch (const Error& e) {
        c.fail(tag + ": " + e.what());
      }
    }
  }

  // Bandwidth-saturation core counts across clock settings.
  {
    Checker c{rep, "reference/saturation.csv",
              manifest_anchor(manifest, "reference/saturation.csv")};
    std::vector<std::pair<std::string, double>> weights;
    try {
      weights = load_weights(dir / "weights/iteration_weights.csv");
    } catch (const Error& e) {
      c.fail(e.what());
    }
    for (const auto& r : load_reference_saturation(dir / "reference/saturation.csv")) {
      const MachineModel* m = find_machine(c, r.machine);
      if (!m || weights.empty()) continue;
      std::vector<WeightedKernel> mix;
      bool ok = true;
      for (const auto& [name, w] : weights) {
        const KernelSpec* k = find_kernel(c, name);
        if (!k) {
          ok = false;
          break;
        }
        mix.push_back({*k, w});
      }
      if (!ok) continue;
      const std::string tag = r.machine + "/" + std::string(simd_name(r.simd)) + "@" +
                              std::to_string(r.core_freq_ghz);
      try {
        const auto pts = saturation_sweep(mix, *m, r.simd, {r.core_freq_ghz}, 0.9);
        if (!pts[0].n90)
          c.fail(tag + ": sweep never saturates, stored " + std::to_string(r.n90));
        else
          c.equal_int(tag + " n90", *pts[0].n90, r.n90);
      } catch (const Error& e) {
        c.fail(tag + ": " + e.what());
      }
    }
  }

  // Event-delivery scenarios.
  {
    Checker c{rep, "reference/delivery.csv",
              manifest_anchor(manifest, "reference/delivery.csv")};
    for (const auto& r : load_reference_delivery(dir / "reference/delivery.csv")) {
      const KernelSpec* k = find_kernel(c, r.kernel);
      const MachineModel* m = find_machine(c, r.machine);
      if (!k || !m) continue;
      const std::string tag = r.kernel + "/" + r.machine + "/" + r.scenario;
      try {
        double got = 0;
        if (r.scenario == "bc_serial")
          got = delivery_serial_cy(best_case_scenario(*k, *m));
        else if (r.scenario == "wc_serial")
          got = delivery_serial_cy(worst_case_scenario(*k, *m, r.effective_bw_gbs));
        else if (r.scenario == "bc_parallel")
          got = delivery_parallel_cy(best_case_scenario(*k, *m), *m, r.threads);
        else if (r.scenario == "wc_parallel")
          got = delivery_parallel_cy(worst_case_scenario(*k, *m, r.effective_bw_gbs), *m,
                                     r.threads);
        else if (r.scenario == "wc_adjusted")
          got = delivery_worst_case_adjusted_cy(
              worst_case_scenario(*k, *m, r.effective_bw_gbs),
              best_case_scenario(*k, *m));
        else {
          c.fail(tag + ": unknown scenario");
          continue;
        }
        c.rel_near(tag, got, r.pred_cy, kScenarioRelTol);
      } catch (const Error& e) {
        c.fail(tag + ": " + e.what());
      }
    }
  }

  // Measurement files must parse strictly and only name known kernels/machines.
  for (const auto& p : fs::directory_iterator(dir / "measurements")) {
    const std::string rel = fs::relative(p.path(), dir).generic_string();
    Checker c{rep, rel, manifest_anchor(manifest, rel)};
    try {
      for (const auto& r : load_measurements(p.path())) {
        ++rep.checked;
        if (!kernels.count(r.kernel)) c.fail("unknown kernel '" + r.kernel + "'");
        if (!machines.count(r.machine)) c.fail("unknown machine '" + r.machine + "'");
      }
    } catch (const Error& e) {
      c.fail(e.what());
    }
  }

  // Weight rows must name known kernels.
  {
    Checker c{rep, "weights/iteration_weights.csv",
              manifest_anchor(manifest, "weights/iteration_weights.csv")};
    try {
      for (const auto& [name, w] : load_weights(dir / "weights/iteration_weights.csv")) {
        ++rep.checked;
        if (!kernels.count(name)) c.fail("unknown kernel '" + name + "'");
      }
    } catch (const Error& e) {
      c.fail(e.what());
    }
  }

  return rep;
}

}  // namespace ecmkit
