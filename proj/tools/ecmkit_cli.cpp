// Command-line front end: single-kernel predictions, thread scaling, clock
// sweeps for the bandwidth saturation point, measurement validation, and the
// full report artifact set.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ecmkit/delivery.hpp"
#include "ecmkit/ecm.hpp"
#include "ecmkit/error.hpp"
#include "ecmkit/fixtures.hpp"
#include "ecmkit/validation.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ecmkit;

namespace {

std::string fmt(double v, int dp) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", dp, v);
  return buf;
}

// Round-trip-safe rendering for json/csv output.
std::string fmt_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Interactive cycle display: two decimals while values are small, one after.
std::string fmt_cy(double v) { return fmt(v, std::fabs(v) < 10 ? 2 : 1); }

std::string contribution_tuple(const EcmContribution& c) {
  return "{" + fmt_cy(c.t_ol_cy) + " || " + fmt_cy(c.t_nol_cy) + " | " +
         fmt_cy(c.t_l1l2_cy) + " | " + fmt_cy(c.t_l2l3_cy) + " | " +
         fmt_cy(c.t_mem_cy()) + "}";
}

std::string prediction_tuple(const EcmPrediction& p) {
  std::vector<double> lvls;
  if (p.t_l1_cy) lvls.push_back(*p.t_l1_cy);
  if (p.t_l2_cy) lvls.push_back(*p.t_l2_cy);
  if (p.t_l3_cy) lvls.push_back(*p.t_l3_cy);
  lvls.push_back(p.t_mem_cy);
  std::string out = "{";
  for (size_t i = 0; i < lvls.size(); ++i) {
    if (i) out += " ] ";
    out += fmt_cy(lvls[i]);
  }
  return out + "}";
}

struct Ctx {
  fs::path fixtures;

  MachineModel machine(const std::string& name) const {
    return load_machine(machine_file(fixtures, name));
  }
  KernelSpec kernel(const std::string& name) const {
    return load_kernel(kernel_file(fixtures, name));
  }
  std::map<std::string, MachineModel> all_machines() const {
    std::map<std::string, MachineModel> out;
    for (const auto& p : fs::directory_iterator(fixtures / "machines")) {
      MachineModel m = load_machine(p.path());
      out.emplace(m.name, std::move(m));
    }
    return out;
  }
  std::map<std::string, KernelSpec> all_kernels() const {
    std::map<std::string, KernelSpec> out;
    for (const auto& p : fs::directory_iterator(fixtures / "kernels")) {
      KernelSpec k = load_kernel(p.path());
      out.emplace(k.name, std::move(k));
    }
    return out;
  }
  // The simulation operator mix, in file order.
  std::vector<WeightedKernel> weighted_mix(const fs::path& weights_file) const {
    std::vector<WeightedKernel> mix;
    for (const auto& [name, w] : load_weights(weights_file))
      mix.push_back({kernel(name), w});
    return mix;
  }
};

json contribution_json(const EcmContribution& c) {
  return {{"t_ol_cy", c.t_ol_cy},       {"t_nol_cy", c.t_nol_cy},
          {"t_l1l2_cy", c.t_l1l2_cy},   {"t_l2l3_cy", c.t_l2l3_cy},
          {"t_l2mem_cy", c.t_l2mem_cy}, {"t_l3mem_cy", c.t_l3mem_cy},
          {"t_mem_cy", c.t_mem_cy()}};
}

json prediction_json(const EcmPrediction& p) {
  json j;
  if (p.t_l1_cy) j["t_l1_cy"] = *p.t_l1_cy;
  if (p.t_l2_cy) j["t_l2_cy"] = *p.t_l2_cy;
  if (p.t_l3_cy) j["t_l3_cy"] = *p.t_l3_cy;
  j["t_mem_cy"] = p.t_mem_cy;
  j["mem_bottleneck_cy"] = p.mem_bottleneck_cy;
  if (p.n_saturation) j["n_saturation"] = *p.n_saturation;
  j["from_override"] = p.from_override;
  return j;
}

// ---------------------------------------------------------------- predict --

struct PredictOpts {
  std::string kernel, machine, simd;
  std::string residence = "mem";
  int threads = 1;
  std::string format = "table";
};

int run_predict(const Ctx& ctx, const PredictOpts& o) {
  const MachineModel m = ctx.machine(o.machine);
  const KernelSpec k = ctx.kernel(o.kernel);
  const SimdLevel simd = parse_simd(o.simd);
  const Residence res = parse_residence(o.residence);

  const EcmPrediction p = predict(k, m, simd);
  std::optional<EcmContribution> c;
  if (!p.from_override) c = contributions(k, m, simd, Residence::mem);

  const std::optional<double> at_level = p.at(res);
  if (!at_level)
    throw UnsupportedError("no " + std::string(residence_name(res)) +
                           "-resident prediction for '" + k.name + "' on " + m.name);
  const double runtime =
      (res == Residence::mem && o.threads > 1) ? multicore_cy(p, o.threads) : *at_level;
  if (res != Residence::mem && o.threads > 1)
    throw UnsupportedError("cache-resident runs are modeled single-core only");

  if (o.format == "json") {
    json j = {{"kernel", k.name},
              {"machine", m.name},
              {"simd", std::string(simd_name(simd))},
              {"residence", std::string(residence_name(res))},
              {"threads", o.threads},
              {"runtime_cy_per_it", runtime},
              {"work_rate_per_s", work_rate_per_s(runtime, m)},
              {"prediction", prediction_json(p)}};
    if (c) j["contributions"] = contribution_json(*c);
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  if (o.format == "csv") {
    std::cout << "kernel,machine,simd,residence,threads,runtime_cy_per_it,"
                 "mem_bottleneck_cy,n_saturation,from_override\n";
    std::cout << k.name << ',' << m.name << ',' << simd_name(simd) << ','
              << residence_name(res) << ',' << o.threads << ',' << fmt_full(runtime)
              << ',' << fmt_full(p.mem_bottleneck_cy) << ','
              << (p.n_saturation ? std::to_string(*p.n_saturation) : std::string())
              << ',' << (p.from_override ? "true" : "false") << "\n";
    return 0;
  }

  std::cout << "kernel:  " << k.name << " (" << k.display_name << ")\n";
  std::cout << "machine: " << m.name << "  simd: " << simd_name(simd) << "\n";
  if (c) {
    std::cout << "cycles per " << k.work_unit << " {OL || nOL | L1L2 | L2L3 | Mem}: "
              << contribution_tuple(*c) << "\n";
    std::cout << "runtime by working-set level: " << prediction_tuple(p) << "\n";
  } else {
    std::cout << "single-core in-memory runtime (measured, model input): "
              << fmt_cy(p.t_mem_cy) << " cy/" << k.work_unit << "\n";
  }
  std::cout << "requested: " << residence_name(res) << "-resident, " << o.threads
            << " thread(s): " << fmt_cy(runtime) << " cy/" << k.work_unit << " = "
            << fmt(work_rate_per_s(runtime, m) / 1e6, 1) << " M" << k.work_unit
            << "/s\n";
  std::cout << "memory bottleneck: " << fmt_cy(p.mem_bottleneck_cy) << " cy/"
            << k.work_unit;
  if (p.n_saturation) std::cout << "  (saturates at " << *p.n_saturation << " cores)";
  std::cout << "\n";
  return 0;
}

// ------------------------------------------------------------------ scale --

struct ScaleOpts {
  std::string kernel, machine, simd;
  int max_threads = 0;  // 0: full socket
  std::string format = "table";
};

int run_scale(const Ctx& ctx, const ScaleOpts& o) {
  const MachineModel m = ctx.machine(o.machine);
  const KernelSpec k = ctx.kernel(o.kernel);
  const SimdLevel simd = parse_simd(o.simd);
  const int nmax = o.max_threads > 0 ? o.max_threads : m.n_cores;

  const EcmPrediction p = predict(k, m, simd);
  if (o.format == "json") {
    json rows = json::array();
    for (int n = 1; n <= nmax; ++n) {
      const double cy = multicore_cy(p, n);
      rows.push_back({{"threads", n},
                      {"cy_per_it", cy},
                      {"work_rate_per_s", work_rate_per_s(cy, m)}});
    }
    json j = {{"kernel", k.name},
              {"machine", m.name},
              {"simd", std::string(simd_name(simd))},
              {"mem_bottleneck_cy", p.mem_bottleneck_cy},
              {"scaling", rows}};
    if (p.n_saturation) j["n_saturation"] = *p.n_saturation;
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  if (o.format == "csv") {
    std::cout << "threads,cy_per_it,work_rate_per_s\n";
    for (int n = 1; n <= nmax; ++n) {
      const double cy = multicore_cy(p, n);
      std::cout << n << ',' << fmt_full(cy) << ',' << fmt_full(work_rate_per_s(cy, m))
                << "\n";
    }
    return 0;
  }

  std::cout << "kernel: " << k.name << "  machine: " << m.name
            << "  simd: " << simd_name(simd) << "\n";
  std::cout << "threads  cy/" << k.work_unit << "  M" << k.work_unit << "/s\n";
  for (int n = 1; n <= nmax; ++n) {
    const double cy = multicore_cy(p, n);
    std::cout << fmt(n, 0) << "  " << fmt_cy(cy) << "  "
              << fmt(work_rate_per_s(cy, m) / 1e6, 1) << "\n";
  }
  if (p.n_saturation)
    std::cout << "bandwidth-bound from " << *p.n_saturation << " cores on\n";
  return 0;
}

// --------------------------------------------------------------- saturate --

struct SaturateOpts {
  std::string machine, simd;
  std::vector<double> freqs;
  double threshold = 0.9;
  std::string weights;
  bool curve = false;
  std::string format = "table";
};

int run_saturate(const Ctx& ctx, const SaturateOpts& o) {
  const MachineModel m = ctx.machine(o.machine);
  const SimdLevel simd = parse_simd(o.simd);
  const fs::path weights_file =
      o.weights.empty() ? ctx.fixtures / "weights/iteration_weights.csv"
                        : fs::path(o.weights);
  const std::vector<WeightedKernel> mix = ctx.weighted_mix(weights_file);
  const std::vector<double> freqs =
      o.freqs.empty() ? std::vector<double>{m.core_freq_ghz} : o.freqs;

  const auto points = saturation_sweep(mix, m, simd, freqs, o.threshold);

  if (o.format == "json") {
    json rows = json::array();
    for (const auto& pt : points) {
      json r = {{"core_freq_ghz", pt.core_freq_ghz}};
      if (pt.n90) r["n_saturation"] = *pt.n90;
      if (o.curve) {
        json curve = json::array();
        const MachineModel scaled = rescale_frequency(m, pt.core_freq_ghz);
        for (int n = 1; n <= m.n_cores; ++n)
          curve.push_back(
              {{"threads", n}, {"utilization", utilization(mix, scaled, simd, n)}});
        r["curve"] = curve;
      }
      rows.push_back(r);
    }
    json j = {{"machine", m.name},
              {"simd", std::string(simd_name(simd))},
              {"threshold", o.threshold},
              {"points", rows}};
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  if (o.format == "csv") {
    if (o.curve) {
      std::cout << "core_freq_ghz,threads,utilization\n";
      for (const auto& pt : points) {
        const MachineModel scaled = rescale_frequency(m, pt.core_freq_ghz);
        for (int n = 1; n <= m.n_cores; ++n)
          std::cout << fmt_full(pt.core_freq_ghz) << ',' << n << ','
                    << fmt_full(utilization(mix, scaled, simd, n)) << "\n";
      }
    } else {
      std::cout << "core_freq_ghz,n_saturation\n";
      for (const auto& pt : points)
        std::cout << fmt_full(pt.core_freq_ghz) << ','
                  << (pt.n90 ? std::to_string(*pt.n90) : std::string()) << "\n";
    }
    return 0;
  }

  std::cout << "machine: " << m.name << "  simd: " << simd_name(simd)
            << "  threshold: " << fmt(o.threshold * 100, 0) << "% of "
            << fmt(m.mem_bw_gbs, 0) << " GB/s\n";
  std::cout << "core_freq_ghz  cores_to_saturate\n";
  for (const auto& pt : points)
    std::cout << fmt(pt.core_freq_ghz, 2) << "  "
              << (pt.n90 ? std::to_string(*pt.n90) : std::string("never")) << "\n";
  if (o.curve) {
    for (const auto& pt : points) {
      const MachineModel scaled = rescale_frequency(m, pt.core_freq_ghz);
      std::cout << "utilization at " << fmt(pt.core_freq_ghz, 2) << " GHz:";
      for (int n = 1; n <= m.n_cores; ++n)
        std::cout << ' ' << fmt(utilization(mix, scaled, simd, n), 3);
      std::cout << "\n";
    }
  }
  return 0;
}

// --------------------------------------------------------------- validate --

struct ValidateOpts {
  std::string machine;
  std::vector<std::string> measurement_files;
  std::string format = "table";
};

int run_validate(const Ctx& ctx, const ValidateOpts& o) {
  const MachineModel m = ctx.machine(o.machine);
  std::vector<KernelSpec> kernels;
  for (auto& [name, k] : ctx.all_kernels()) kernels.push_back(std::move(k));

  std::vector<fs::path> files;
  if (o.measurement_files.empty()) {
    for (const auto& p : fs::directory_iterator(ctx.fixtures / "measurements"))
      files.push_back(p.path());
    std::sort(files.begin(), files.end());
  } else {
    for (const auto& f : o.measurement_files) files.emplace_back(f);
  }

  std::vector<MeasurementRecord> records;
  for (const auto& f : files)
    for (auto& r : load_measurements(f)) records.push_back(std::move(r));

  const ValidationReport rep = validate(records, kernels, m);

  int n10 = 0, n35 = 0, nout = 0;
  for (const auto& row : rep.rows) {
    if (row.cls == MatchClass::within_10pct) ++n10;
    else if (row.cls == MatchClass::within_35pct) ++n35;
    else ++nout;
  }

  if (o.format == "json") {
    json rows = json::array();
    for (const auto& row : rep.rows) {
      json r = {{"kernel", row.record.kernel},
                {"kind", row.volume ? "volume" : "runtime"},
                {"predicted", row.predicted},
                {"measured", row.measured},
                {"rel_error", row.rel_error},
                {"class", std::string(match_class_name(row.cls))},
                {"category", row.category}};
      if (row.record.simd) r["simd"] = std::string(simd_name(*row.record.simd));
      if (row.record.threads) r["threads"] = *row.record.threads;
      if (row.record.residence)
        r["residence"] = std::string(residence_name(*row.record.residence));
      rows.push_back(r);
    }
    json j = {{"machine", m.name},
              {"rows", rows},
              {"unmatched", rep.unmatched},
              {"median_abs_rel_error", rep.median_abs_rel_error},
              {"counts",
               {{"within_10pct", n10}, {"within_35pct", n35}, {"outlier", nout}}}};
    std::cout << j.dump(2) << "\n";
  } else if (o.format == "csv") {
    std::cout << "kernel,simd,threads,residence,kind,predicted,measured,rel_error,"
                 "class\n";
    for (const auto& row : rep.rows) {
      std::cout << row.record.kernel << ','
                << (row.record.simd ? std::string(simd_name(*row.record.simd))
                                    : std::string())
                << ','
                << (row.record.threads ? std::to_string(*row.record.threads)
                                       : std::string())
                << ','
                << (row.record.residence
                        ? std::string(residence_name(*row.record.residence))
                        : std::string())
                << ',' << (row.volume ? "volume" : "runtime") << ','
                << fmt_full(row.predicted) << ',' << fmt_full(row.measured) << ','
                << fmt_full(row.rel_error) << ',' << match_class_name(row.cls) << "\n";
    }
  } else {
    std::cout << "machine: " << m.name << "  records scored: " << rep.rows.size()
              << "\n";
    std::cout << "kernel  simd  threads  residence  kind  predicted  measured  rel\n";
    for (const auto& row : rep.rows) {
      std::cout << row.record.kernel << "  "
                << (row.record.simd ? simd_name(*row.record.simd) : "-") << "  "
                << (row.record.threads ? std::to_string(*row.record.threads)
                                       : std::string("-"))
                << "  "
                << (row.record.residence ? residence_name(*row.record.residence) : "-")
                << "  " << (row.volume ? "volume" : "runtime") << "  "
                << fmt_cy(row.predicted) << "  " << fmt_cy(row.measured) << "  "
                << fmt(row.rel_error * 100, 1) << "% " << match_class_name(row.cls)
                << "\n";
    }
    std::cout << "within 10%: " << n10 << "  within 35%: " << n35
              << "  outliers: " << nout << "\n";
    for (const auto& [cat, med] : rep.median_abs_rel_error)
      std::cout << "median |rel| (" << cat << "): " << fmt(med * 100, 1) << "%\n";
    for (const auto& u : rep.unmatched) std::cout << "unmatched: " << u << "\n";
  }
  return rep.unmatched.empty() ? 0 : 3;
}

// ----------------------------------------------------------------- report --

struct ReportOpts {
  std::string out = "report";
};

std::ofstream open_out(const fs::path& p) {
  fs::create_directories(p.parent_path());
  std::ofstream f(p);
  if (!f) throw Error("cannot write " + p.string());
  return f;
}

// Simd levels a kernel carries for a machine, narrowest first.
std::vector<SimdLevel> timing_levels(const KernelSpec& k, const std::string& machine) {
  std::vector<SimdLevel> out;
  auto it = k.timing.find(machine);
  if (it == k.timing.end()) return out;
  for (const auto& [lvl, e] : it->second) out.push_back(lvl);
  return out;
}

int run_report(const Ctx& ctx, const ReportOpts& o) {
  const fs::path out(o.out);
  const auto machines = ctx.all_machines();
  const auto weights = load_weights(ctx.fixtures / "weights/iteration_weights.csv");

  std::vector<KernelSpec> mix_kernels;  // canonical order: the weights file
  std::vector<WeightedKernel> mix;
  for (const auto& [name, w] : weights) {
    mix_kernels.push_back(ctx.kernel(name));
    mix.push_back({mix_kernels.back(), w});
  }

  // Deep-dive tables for every mix kernel with a full in-core split.
  for (const KernelSpec& k : mix_kernels) {
    bool split = true;
    for (const auto& [mname, m] : machines)
      for (SimdLevel lvl : timing_levels(k, mname))
        split = split && find_timing(k, mname, lvl)->has_split();
    if (!split || k.timing.empty()) continue;
    auto f = open_out(out / "tables" / ("tab_" + k.name + ".csv"));
    f << "machine,simd,t_ol,t_nol,t_l1l2,t_l2l3,t_mem,p_l1,p_l2,p_l3,p_mem\n";
    for (const auto& [mname, m] : machines) {
      for (SimdLevel lvl : timing_levels(k, mname)) {
        const EcmContribution c = contributions(k, m, lvl, Residence::mem);
        const EcmPrediction p = compose(c);
        f << mname << ',' << simd_name(lvl) << ',' << fmt(c.t_ol_cy, 1) << ','
          << fmt(c.t_nol_cy, 1) << ',' << fmt(c.t_l1l2_cy, 1) << ','
          << fmt(c.t_l2l3_cy, 1) << ',' << fmt(c.t_mem_cy(), 1) << ','
          << fmt(*p.t_l1_cy, 1) << ',' << fmt(*p.t_l2_cy, 1) << ','
          << fmt(*p.t_l3_cy, 1) << ',' << fmt(p.t_mem_cy, 1) << "\n";
      }
    }
  }

  // Serial and full-socket in-memory runtimes, one table per machine.
  for (const auto& [mname, m] : machines) {
    auto f = open_out(out / "tables" / ("tab_" + mname + ".csv"));
    f << "kernel,simd,serial_cy,socket_cy\n";
    for (const KernelSpec& k : mix_kernels) {
      for (SimdLevel lvl : timing_levels(k, mname)) {
        const EcmPrediction p = predict(k, m, lvl);
        f << k.name << ',' << simd_name(lvl) << ',' << fmt(p.t_mem_cy, 1) << ','
          << fmt(multicore_cy(p, m.n_cores), 1) << "\n";
      }
    }
  }

  // Per-iteration memory volumes for the mix kernels plus the solver.
  {
    auto f = open_out(out / "tables" / "tab_mem.csv");
    f << "kernel,total_b\n";
    for (const KernelSpec& k : mix_kernels)
      f << k.name << ',' << fmt(traffic(k).total_b(), 1) << "\n";
    const KernelSpec solver = ctx.kernel("linear_algebra");
    f << solver.name << ',' << fmt(traffic(solver).total_b(), 1) << "\n";
  }

  // The solver's own table: full tuple plus saturation core count.
  {
    const KernelSpec solver = ctx.kernel("linear_algebra");
    auto f = open_out(out / "tables" / "tab_linalg.csv");
    f << "machine,t_ol,t_nol,t_l1l2,t_l2l3,t_mem,p_mem,n_saturation\n";
    for (const auto& [mname, m] : machines) {
      const EcmContribution c = contributions(solver, m, SimdLevel::scalar,
                                              Residence::mem);
      const EcmPrediction p = compose(c);
      f << mname << ',' << fmt(c.t_ol_cy, 1) << ',' << fmt(c.t_nol_cy, 1) << ','
        << fmt(c.t_l1l2_cy, 1) << ',' << fmt(c.t_l2l3_cy, 1) << ','
        << fmt(c.t_mem_cy(), 1) << ',' << fmt(p.t_mem_cy, 1) << ','
        << (p.n_saturation ? std::to_string(*p.n_saturation) : std::string()) << "\n";
    }
  }

  // Event-delivery scenarios: the scenario grid (thread counts, effective
  // bandwidths, measurements) lives in the fixture; predictions recomputed.
  {
    const auto scenarios = load_reference_delivery(ctx.fixtures / "reference/delivery.csv");
    auto f = open_out(out / "tables" / "tab_delivery.csv");
    f << "machine,scenario,threads,effective_bw_gbs,pred_cy,meas_cy,meas_iqr_cy,flag\n";
    for (const auto& r : scenarios) {
      const MachineModel& m = machines.at(r.machine);
      const KernelSpec k = ctx.kernel(r.kernel);
      double pred = 0;
      if (r.scenario == "bc_serial")
        pred = delivery_serial_cy(best_case_scenario(k, m));
      else if (r.scenario == "wc_serial")
        pred = delivery_serial_cy(worst_case_scenario(k, m, r.effective_bw_gbs));
      else if (r.scenario == "bc_parallel")
        pred = delivery_parallel_cy(best_case_scenario(k, m), m, r.threads);
      else if (r.scenario == "wc_parallel")
        pred = delivery_parallel_cy(worst_case_scenario(k, m, r.effective_bw_gbs), m,
                                    r.threads);
      else if (r.scenario == "wc_adjusted")
        pred = delivery_worst_case_adjusted_cy(
            worst_case_scenario(k, m, r.effective_bw_gbs), best_case_scenario(k, m));
      else
        throw Error("unknown delivery scenario '" + r.scenario + "'");
      f << r.machine << ',' << r.scenario << ',' << r.threads << ','
        << (r.effective_bw_gbs ? fmt(*r.effective_bw_gbs, 2) : std::string()) << ','
        << fmt(pred, 1) << ',' << (r.meas_cy ? fmt(*r.meas_cy, 1) : std::string())
        << ',' << (r.meas_iqr_cy ? fmt(*r.meas_iqr_cy, 1) : std::string()) << ','
        << r.flag << "\n";
    }
  }

  // Saturation core counts over the published clock grid.
  {
    const auto grid = load_reference_saturation(ctx.fixtures / "reference/saturation.csv");
    auto f = open_out(out / "tables" / "tab_satur_freq.csv");
    f << "machine,simd,core_freq_ghz,n90\n";
    for (const auto& r : grid) {
      const MachineModel& m = machines.at(r.machine);
      const auto pts = saturation_sweep(mix, m, r.simd, {r.core_freq_ghz}, 0.9);
      f << r.machine << ',' << simd_name(r.simd) << ',' << fmt(r.core_freq_ghz, 1)
        << ',' << (pts[0].n90 ? std::to_string(*pts[0].n90) : std::string()) << "\n";
    }
  }

  // Thread-scaling curves for every mix kernel, full precision.
  {
    auto f = open_out(out / "figures" / "fig_scaling.csv");
    f << "kernel,machine,simd,threads,cy_per_it\n";
    for (const KernelSpec& k : mix_kernels) {
      for (const auto& [mname, m] : machines) {
        for (SimdLevel lvl : timing_levels(k, mname)) {
          const EcmPrediction p = predict(k, m, lvl);
          for (int n = 1; n <= m.n_cores; ++n)
            f << k.name << ',' << mname << ',' << simd_name(lvl) << ',' << n << ','
              << fmt_full(multicore_cy(p, n)) << "\n";
        }
      }
    }
  }

  // Utilization curves behind the widest-vector saturation points.
  {
    const auto grid = load_reference_saturation(ctx.fixtures / "reference/saturation.csv");
    auto f = open_out(out / "figures" / "fig_satur_skx_avx512.csv");
    f << "machine,simd,core_freq_ghz,threads,utilization\n";
    for (const auto& r : grid) {
      if (r.simd != SimdLevel::avx512) continue;
      const MachineModel scaled =
          rescale_frequency(machines.at(r.machine), r.core_freq_ghz);
      for (int n = 1; n <= scaled.n_cores; ++n)
        f << r.machine << ',' << simd_name(r.simd) << ',' << fmt(r.core_freq_ghz, 1)
          << ',' << n << ',' << fmt_full(utilization(mix, scaled, r.simd, n)) << "\n";
    }
  }

  std::cout << "report written to " << out.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analytic runtime model for steady-state loop kernels"};
  app.require_subcommand(1);

  std::string fixtures_opt;
  app.add_option("--fixtures", fixtures_opt,
                 "fixture directory (default: ECMKIT_FIXTURES or the built-in set)");

  PredictOpts po;
  CLI::App* predict_cmd =
      app.add_subcommand("predict", "runtime tuple for one kernel/machine/simd");
  predict_cmd->add_option("--kernel", po.kernel)->required();
  predict_cmd->add_option("--machine", po.machine)->required();
  predict_cmd->add_option("--simd", po.simd)->required();
  predict_cmd->add_option("--residence", po.residence,
                          "working-set level: l1, l2, l3, mem (default mem)");
  predict_cmd->add_option("--threads", po.threads, "cores sharing the socket");
  predict_cmd->add_option("--format", po.format)
      ->check(CLI::IsMember({"table", "json", "csv"}));

  ScaleOpts so;
  CLI::App* scale_cmd =
      app.add_subcommand("scale", "in-memory runtime versus core count");
  scale_cmd->add_option("--kernel", so.kernel)->required();
  scale_cmd->add_option("--machine", so.machine)->required();
  scale_cmd->add_option("--simd", so.simd)->required();
  scale_cmd->add_option("--max-threads", so.max_threads);
  scale_cmd->add_option("--format", so.format)
      ->check(CLI::IsMember({"table", "json", "csv"}));

  SaturateOpts sa;
  CLI::App* saturate_cmd = app.add_subcommand(
      "saturate", "cores needed to reach the bandwidth threshold, per clock");
  saturate_cmd->add_option("--machine", sa.machine)->required();
  saturate_cmd->add_option("--simd", sa.simd)->required();
  saturate_cmd->add_option("--freq", sa.freqs, "core clock(s) in GHz");
  saturate_cmd->add_option("--threshold", sa.threshold);
  saturate_cmd->add_option("--weights", sa.weights, "kernel mix CSV");
  saturate_cmd->add_flag("--curve", sa.curve, "also print utilization per core count");
  saturate_cmd->add_option("--format", sa.format)
      ->check(CLI::IsMember({"table", "json", "csv"}));

  ValidateOpts vo;
  CLI::App* validate_cmd =
      app.add_subcommand("validate", "score measurements against the model");
  validate_cmd->add_option("--machine", vo.machine)->required();
  validate_cmd->add_option("--measurements", vo.measurement_files,
                           "measurement CSV(s); default: the fixture set");
  validate_cmd->add_option("--format", vo.format)
      ->check(CLI::IsMember({"table", "json", "csv"}));

  ReportOpts ro;
  CLI::App* report_cmd =
      app.add_subcommand("report", "write the full table and figure set");
  report_cmd->add_option("--out", ro.out, "output directory (default ./report)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    Ctx ctx;
    ctx.fixtures = fixtures_opt.empty() ? default_fixture_dir() : fs::path(fixtures_opt);
    if (predict_cmd->parsed()) return run_predict(ctx, po);
    if (scale_cmd->parsed()) return run_scale(ctx, so);
    if (saturate_cmd->parsed()) return run_saturate(ctx, sa);
    if (validate_cmd->parsed()) return run_validate(ctx, vo);
    if (report_cmd->parsed()) return run_report(ctx, ro);
    return 1;
  } catch (const UnsupportedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
