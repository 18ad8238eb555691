#include "ecmkit/validation.hpp"

#include <algorithm>
#include <cmath>

#include "ecmkit/error.hpp"
#include "csv.hpp"

namespace ecmkit {

namespace {

const char* kMeasurementHeader =
    "kernel,machine,simd,threads,residence,cy_per_it_median,cy_per_it_iqr,"
    "mem_b_per_it,avg_freq_ghz";

std::string join_header(const std::vector<std::string>& h) {
  std::string out;
  for (size_t i = 0; i < h.size(); ++i) {
    if (i) out += ',';
    out += h[i];
  }
  return out;
}

std::optional<std::string> field(const std::vector<std::string>& row, size_t i) {
  if (i >= row.size() || row[i].empty()) return std::nullopt;
  return row[i];
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::string_view match_class_name(MatchClass c) {
  switch (c) {
    case MatchClass::within_10pct: return "within_10pct";
    case MatchClass::within_35pct: return "within_35pct";
    case MatchClass::outlier: return "outlier";
  }
  throw Error("bad match class");
}

std::vector<MeasurementRecord> load_measurements(const std::filesystem::path& file) {
  const csv::Table t = csv::read(file);
  if (join_header(t.header) != kMeasurementHeader)
    throw ParseError(file.string() + ": header must be exactly '" +
                     std::string(kMeasurementHeader) + "'");
  std::vector<MeasurementRecord> out;
  for (const auto& row : t.rows) {
    if (row.size() < 8 || row.size() > 9)
      throw ParseError(file.string() + ": each row needs 8 or 9 fields");
    MeasurementRecord r;
    r.kernel = row[0];
    r.machine = row[1];
    if (r.kernel.empty()) throw ParseError(file.string() + ": kernel field is required");
    if (auto s = field(row, 2)) r.simd = parse_simd(*s);
    if (auto s = field(row, 3)) r.threads = csv::to_int(t, row, 3);
    if (auto s = field(row, 4)) r.residence = parse_residence(*s);
    if (field(row, 5)) r.cy_per_it_median = csv::to_double(t, row, 5);
    if (field(row, 6)) r.cy_per_it_iqr = csv::to_double(t, row, 6);
    if (field(row, 7)) r.mem_b_per_it = csv::to_double(t, row, 7);
    if (field(row, 8)) r.avg_freq_ghz = csv::to_double(t, row, 8);
    if (r.cy_per_it_median && (!r.simd || !r.threads || !r.residence))
      throw ParseError(file.string() +
                       ": timed rows need simd, threads, and residence filled in");
    if (!r.cy_per_it_median && !r.mem_b_per_it)
      throw ParseError(file.string() + ": row carries neither a runtime nor a volume");
    out.push_back(r);
  }
  return out;
}

ValidationReport validate(const std::vector<MeasurementRecord>& records,
                          const std::vector<KernelSpec>& kernels, const MachineModel& m) {
  ValidationReport rep;
  std::map<std::string, std::vector<double>> abs_rel_by_category;

  for (const MeasurementRecord& r : records) {
    if (r.machine != m.name) continue;

    const KernelSpec* k = nullptr;
    for (const KernelSpec& c : kernels)
      if (c.name == r.kernel) {
        k = &c;
        break;
      }
    if (!k) {
      rep.unmatched.push_back("unknown kernel '" + r.kernel + "'");
      continue;
    }

    ValidationRow row;
    row.record = r;
    row.category = k->category;
    if (r.cy_per_it_median) {
      const MachineModel mm =
          r.avg_freq_ghz ? rescale_frequency(m, *r.avg_freq_ghz) : m;
      try {
        const EcmPrediction p = predict(*k, mm, *r.simd);
        if (*r.residence == Residence::mem) {
          row.predicted = *r.threads == 1 ? p.t_mem_cy : multicore_cy(p, *r.threads);
        } else {
          if (*r.threads != 1) {
            rep.unmatched.push_back("'" + r.kernel +
                                    "': cache-resident runs are modeled single-core only");
            continue;
          }
          const std::optional<double> lvl = p.at(*r.residence);
          if (!lvl) {
            rep.unmatched.push_back("'" + r.kernel + "': no " +
                                    std::string(residence_name(*r.residence)) +
                                    "-resident prediction for " + mm.name);
            continue;
          }
          row.predicted = *lvl;
        }
      } catch (const UnsupportedError& e) {
        rep.unmatched.push_back(e.what());
        continue;
      }
      row.measured = *r.cy_per_it_median;
    } else {
      row.predicted = traffic(*k).total_b();
      row.measured = *r.mem_b_per_it;
      row.volume = true;
    }

    row.rel_error = (row.measured - row.predicted) / row.predicted;
    const double a = std::fabs(row.rel_error);
    row.cls = a <= 0.10  ? MatchClass::within_10pct
              : a <= 0.35 ? MatchClass::within_35pct
                          : MatchClass::outlier;
    abs_rel_by_category[row.category].push_back(a);
    rep.rows.push_back(std::move(row));
  }

  for (auto& [cat, v] : abs_rel_by_category)
    rep.median_abs_rel_error[cat] = median(std::move(v));
  return rep;
}

double utilization(const std::vector<WeightedKernel>& kernels, const MachineModel& m,
                   SimdLevel simd, int n_threads) {
  if (kernels.empty()) throw Error("utilization needs at least one kernel");
  double bytes = 0, cycles = 0;
  for (const WeightedKernel& wk : kernels) {
    if (wk.weight < 0) throw Error("kernel weights must be non-negative");
    bytes += wk.weight * traffic(wk.kernel).total_b();
    cycles += wk.weight * multicore_cy(predict(wk.kernel, m, simd), n_threads);
  }
  if (cycles <= 0) throw Error("weighted runtime is zero");
  // Achieved bandwidth over the sustained ceiling.
  return std::min(1.0, bytes * m.core_freq_ghz / (cycles * m.mem_bw_gbs));
}

std::vector<std::pair<std::string, double>> load_weights(
    const std::filesystem::path& file) {
  const csv::Table t = csv::read(file);
  const int ck = t.col("kernel");
  const int cw = t.col("weight");
  std::vector<std::pair<std::string, double>> out;
  for (const auto& row : t.rows) {
    double w = csv::to_double(t, row, cw);
    if (w < 0) throw ParseError(file.string() + ": weights must be non-negative");
    out.emplace_back(row[ck], w);
  }
  return out;
}

}  // namespace ecmkit
