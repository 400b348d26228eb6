#include "archicop/study.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "archicop/csv.hpp"
#include "archicop/errors.hpp"
#include "archicop/parallel.hpp"
#include "archicop/rank.hpp"
#include "archicop/rng.hpp"
#include "archicop/sampling.hpp"

namespace archicop {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <class E, std::size_t N>
E parse_enum(std::string_view s, const E (&all)[N], std::string_view what) {
  for (E e : all) {
    if (s == to_string(e)) return e;
  }
  std::string list;
  for (E e : all) {
    if (!list.empty()) list += ", ";
    list += to_string(e);
  }
  throw ArgumentError("unknown " + std::string(what) + " '" + std::string(s) + "' (expected one of " + list + ")");
}

constexpr Margins kMarginsAll[] = {Margins::known, Margins::pobs};
constexpr MarginsMode kMarginsModeAll[] = {MarginsMode::known, MarginsMode::pobs, MarginsMode::both};
constexpr Metric kMetricAll[] = {Metric::bias, Metric::rmse, Metric::mut};

std::vector<Margins> margins_list(MarginsMode m) {
  switch (m) {
    case MarginsMode::known: return {Margins::known};
    case MarginsMode::pobs: return {Margins::pobs};
    case MarginsMode::both: return {Margins::known, Margins::pobs};
  }
  return {};
}

// Stream key of a cell. Known-margins and pobs fits share it, which gives the
// paired design.
std::uint64_t cell_key(std::uint64_t seed, Family f, int d, double tau) {
  std::uint64_t k = mix64(seed ^ 0x6A09E667F3BCC909ULL);
  k = mix64(k ^ static_cast<std::uint64_t>(f));
  k = mix64(k ^ static_cast<std::uint64_t>(d));
  return mix64(k ^ std::bit_cast<std::uint64_t>(tau));
}

struct Cell {
  Family family;
  int d;
  double tau;
  double theta0;
  std::uint64_t key;
};

std::vector<Cell> make_cells(const StudyConfig& cfg) {
  std::vector<Cell> cells;
  for (Family f : cfg.families) {
    for (int d : cfg.d_list) {
      for (double t : tau_targets_for(f, cfg)) {
        cells.push_back({f, d, t, tau_inv(f, t), cell_key(cfg.master_seed, f, d, t)});
      }
    }
  }
  return cells;
}

// Fills the records of replication r: margins-major, then methods in order.
void run_replication(const StudyConfig& cfg, const Cell& c, std::size_t r, StreamPurpose data_purpose,
                     StreamPurpose smle_purpose, const std::vector<Margins>& margins, ReplicationRecord* out) {
  RngStream data_rng(c.key, r, data_purpose);
  const DataMatrix x = sample_copula(FamilySpec(c.family, c.theta0), cfg.n, c.d, data_rng);
  std::size_t slot = 0;
  for (Margins mg : margins) {
    const DataMatrix u = mg == Margins::known ? x : pobs(x);
    for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
      const Method m = cfg.methods[mi];
      ReplicationRecord& rec = out[slot++];
      rec = {c.family, c.d, c.tau, m, mg, r, c.theta0, kNaN, false, false, 0.0};
      RngStream smle_rng = RngStream(c.key, r, smle_purpose).substream(static_cast<std::uint64_t>(mg) * 64 + mi);
      const double t0 = thread_cpu_seconds();
      try {
        const EstimateResult e = estimate(m, c.family, u, cfg.est, smle_rng);
        rec.theta_hat = e.theta_hat;
        rec.converged = e.converged;
        rec.clamped = e.clamped;
        rec.user_time = e.user_time;
      } catch (const std::exception&) {
        rec.user_time = thread_cpu_seconds() - t0;
      }
      if (!cfg.record_time) rec.user_time = 0.0;
    }
  }
}

// Quantile with linear interpolation between order statistics.
double quantile_sorted(const std::vector<double>& x, double p) {
  if (x.empty()) return kNaN;
  const double h = p * static_cast<double>(x.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, x.size() - 1);
  return x[lo] + (h - static_cast<double>(lo)) * (x[hi] - x[lo]);
}

using CellId = std::tuple<Family, int, double, Margins>;
using RowId = std::tuple<Family, int, double, Margins, Method>;

RowId row_id(const ReplicationRecord& r) { return {r.family, r.d, r.tau, r.margins, r.method}; }

double metric_value(const ReportRow& r, Metric m) {
  switch (m) {
    case Metric::bias: return 1000.0 * r.bias;
    case Metric::rmse: return 1000.0 * r.rmse;
    case Metric::mut: return 1000.0 * r.mean_user_time;
  }
  return kNaN;
}

double metric_factor(const ReportRow& r, Metric m) {
  switch (m) {
    case Metric::bias: return r.bias_factor;
    case Metric::rmse: return r.rmse_factor;
    case Metric::mut: return r.mut_factor;
  }
  return kNaN;
}

std::string fixed(double v, int prec) {
  if (std::isnan(v)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

bool parse_bool01(const std::string& s) {
  if (s == "1" || s == "true") return true;
  if (s == "0" || s == "false") return false;
  throw ArgumentError("raw csv: not a flag: '" + s + "'");
}

}  // namespace

std::string_view to_string(Margins m) { return m == Margins::known ? "known" : "pobs"; }
Margins parse_margins(std::string_view s) { return parse_enum(s, kMarginsAll, "margins"); }

std::string_view to_string(MarginsMode m) {
  switch (m) {
    case MarginsMode::known: return "known";
    case MarginsMode::pobs: return "pobs";
    case MarginsMode::both: return "both";
  }
  return "?";
}
MarginsMode parse_margins_mode(std::string_view s) { return parse_enum(s, kMarginsModeAll, "margins mode"); }

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::bias: return "bias";
    case Metric::rmse: return "rmse";
    case Metric::mut: return "mut";
  }
  return "?";
}
Metric parse_metric(std::string_view s) { return parse_enum(s, kMetricAll, "metric"); }

std::vector<double> tau_targets_for(Family f, const StudyConfig& cfg) {
  std::vector<double> out;
  for (double t : cfg.tau_targets) {
    if (f == Family::A && t >= 1.0 / 3.0) continue;
    out.push_back(t);
  }
  return out;
}

void validate(const StudyConfig& cfg) {
  if (cfg.families.empty()) throw ArgumentError("study: no families");
  if (cfg.d_list.empty()) throw ArgumentError("study: no dimensions");
  if (cfg.tau_targets.empty()) throw ArgumentError("study: no tau targets");
  if (cfg.methods.empty()) throw ArgumentError("study: no methods");
  if (cfg.replications < 1) throw ArgumentError("study: replications must be at least 1");
  if (cfg.n < 2) throw ArgumentError("study: sample size must be at least 2");
  if (cfg.est.smle_m < 1) throw ArgumentError("study: smle block size must be at least 1");
  if (!(cfg.time_cap >= 0.0)) throw ArgumentError("study: time cap must be nonnegative");
  for (int d : cfg.d_list) {
    if (d < 2 || d > kTableBound) {
      throw ArgumentError("study: dimension " + std::to_string(d) + " outside [2, " + std::to_string(kTableBound) + "]");
    }
  }
  for (double t : cfg.tau_targets) {
    if (!(t > 0.0 && t < 1.0)) throw ArgumentError("study: tau targets must lie in (0,1)");
  }
  for (Family f : cfg.families) tau_interval(f, cfg.est);
}

StudyReport run_study(const StudyConfig& cfg) {
  validate(cfg);
  StudyReport report;
  const auto cells = make_cells(cfg);
  const auto margins = margins_list(cfg.margins);
  const std::size_t per_rep = margins.size() * cfg.methods.size();

  if (cfg.time_cap > 0.0 && !cells.empty()) {
    constexpr std::size_t kPilot = 3;
    std::vector<ReplicationRecord> scratch(per_rep);
    double projected = 0.0;
    for (const Cell& c : cells) {
      const auto t0 = std::chrono::steady_clock::now();
      for (std::size_t r = 0; r < kPilot; ++r) {
        run_replication(cfg, c, r, StreamPurpose::pilot, StreamPurpose::pilot, margins, scratch.data());
      }
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      projected += secs / kPilot * static_cast<double>(cfg.replications);
    }
    if (cfg.exec == Exec::parallel) projected /= std::max(1, worker_threads());
    if (projected > cfg.time_cap) {
      report.warnings.push_back("projected wall time " + fixed(projected, 0) + " s exceeds the cap of " +
                                fixed(cfg.time_cap, 0) + " s");
    }
  }

  for (const Cell& c : cells) {
    std::vector<ReplicationRecord> slots(cfg.replications * per_rep);
    for_each_index(cfg.replications, cfg.exec, [&](std::size_t r) {
      run_replication(cfg, c, r, StreamPurpose::data, StreamPurpose::smle, margins, slots.data() + r * per_rep);
    });
    // records ordered by margins, method, replication
    for (std::size_t k = 0; k < per_rep; ++k) {
      for (std::size_t r = 0; r < cfg.replications; ++r) report.raw.push_back(slots[r * per_rep + k]);
    }
  }
  report.rows = aggregate(report.raw);
  return report;
}

DataMatrix replication_data(const StudyConfig& cfg, Family f, int d, double tau, std::size_t rep) {
  RngStream rng(cell_key(cfg.master_seed, f, d, tau), rep, StreamPurpose::data);
  return sample_copula(FamilySpec(f, tau_inv(f, tau)), cfg.n, d, rng);
}

std::vector<ReportRow> aggregate(const std::vector<ReplicationRecord>& raw) {
  std::map<RowId, std::size_t> index;
  std::vector<std::vector<const ReplicationRecord*>> groups;
  for (const auto& r : raw) {
    const auto [it, fresh] = index.emplace(row_id(r), groups.size());
    if (fresh) groups.emplace_back();
    groups[it->second].push_back(&r);
  }
  std::vector<ReportRow> rows;
  rows.reserve(groups.size());
  for (const auto& g : groups) {
    const ReplicationRecord& h = *g.front();
    ReportRow row;
    row.family = h.family;
    row.d = h.d;
    row.tau = h.tau;
    row.method = h.method;
    row.margins = h.margins;
    row.theta0 = h.theta0;
    row.replications = g.size();
    double err = 0.0;
    double sq = 0.0;
    double time = 0.0;
    for (const ReplicationRecord* r : g) {
      time += r->user_time;
      row.n_fail += r->converged ? 0 : 1;
      row.n_clamped += r->clamped ? 1 : 0;
      if (!std::isfinite(r->theta_hat)) continue;
      const double e = r->theta_hat - r->theta0;
      err += e;
      sq += e * e;
      ++row.used;
    }
    const double used = static_cast<double>(row.used);
    row.bias = row.used ? err / used : kNaN;
    row.rmse = row.used ? std::sqrt(sq / used) : kNaN;
    row.mean_user_time = time / static_cast<double>(g.size());
    rows.push_back(row);
  }
  std::map<CellId, const ReportRow*> mle;
  for (const auto& r : rows) {
    if (r.method == Method::mle) mle.emplace(CellId{r.family, r.d, r.tau, r.margins}, &r);
  }
  for (auto& r : rows) {
    const auto it = mle.find(CellId{r.family, r.d, r.tau, r.margins});
    if (it == mle.end()) {
      r.bias_factor = r.rmse_factor = r.mut_factor = kNaN;
      continue;
    }
    const ReportRow& m = *it->second;
    r.bias_factor = r.bias / m.bias;
    r.rmse_factor = r.rmse / m.rmse;
    r.mut_factor = r.mean_user_time / m.mean_user_time;
  }
  return rows;
}

std::vector<ErrorSummary> sqrt_abs_error_summary(const std::vector<ReplicationRecord>& raw) {
  std::map<RowId, std::size_t> index;
  std::vector<ErrorSummary> out;
  std::vector<std::vector<double>> vals;
  for (const auto& r : raw) {
    const auto [it, fresh] = index.emplace(row_id(r), out.size());
    if (fresh) {
      out.push_back({r.family, r.d, r.tau, r.method, r.margins, {}});
      vals.emplace_back();
    }
    if (std::isfinite(r.theta_hat)) vals[it->second].push_back(std::sqrt(std::fabs(r.theta_hat - r.theta0)));
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto& v = vals[i];
    std::sort(v.begin(), v.end());
    const double ps[5] = {0.0, 0.25, 0.5, 0.75, 1.0};
    for (int k = 0; k < 5; ++k) out[i].q[k] = quantile_sorted(v, ps[k]);
  }
  return out;
}

void write_table(std::ostream& os, const std::vector<ReportRow>& rows, Metric metric, TableFormat fmt) {
  // Column order: methods in first appearance order. Row order: tau, then
  // first appearance of (family, d, margins).
  std::vector<Method> methods;
  std::vector<CellId> cells;
  std::map<CellId, std::map<Method, const ReportRow*>> lookup;
  for (const auto& r : rows) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) methods.push_back(r.method);
    const CellId id{r.family, r.d, r.tau, r.margins};
    if (!lookup.count(id)) cells.push_back(id);
    lookup[id][r.method] = &r;
  }
  std::stable_sort(cells.begin(), cells.end(),
                   [](const CellId& a, const CellId& b) { return std::get<2>(a) < std::get<2>(b); });

  std::vector<std::vector<std::string>> table;
  std::vector<std::string> header{"tau", "family", "d", "margins"};
  for (Method m : methods) {
    header.emplace_back(to_string(m));
    header.push_back(std::string(to_string(m)) + "_factor");
  }
  table.push_back(header);
  const bool csv = fmt == TableFormat::csv;
  for (const CellId& id : cells) {
    std::vector<std::string> line{csv ? format_double(std::get<2>(id)) : fixed(std::get<2>(id), 2),
                                  std::string(to_string(std::get<0>(id))), std::to_string(std::get<1>(id)),
                                  std::string(to_string(std::get<3>(id)))};
    const auto& by_method = lookup[id];
    for (Method m : methods) {
      const auto it = by_method.find(m);
      const double v = it == by_method.end() ? kNaN : metric_value(*it->second, metric);
      const double f = it == by_method.end() ? kNaN : metric_factor(*it->second, metric);
      if (csv) {
        line.push_back(format_double(v));
        line.push_back(format_double(f));
      } else {
        line.push_back(fixed(v, 1));
        line.push_back("(" + fixed(f, 1) + ")");
      }
    }
    table.push_back(std::move(line));
  }

  if (csv) {
    for (const auto& line : table) {
      for (std::size_t j = 0; j < line.size(); ++j) os << (j ? "," : "") << line[j];
      os << '\n';
    }
    return;
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : table) {
    for (std::size_t j = 0; j < line.size(); ++j) width[j] = std::max(width[j], line[j].size());
  }
  for (const auto& line : table) {
    std::string out;
    for (std::size_t j = 0; j < line.size(); ++j) {
      if (j) out += "  ";
      const std::size_t pad = width[j] - line[j].size();
      // labels left-aligned, numbers right-aligned
      if (j == 1 || j == 3 || &line == &table.front()) {
        out += line[j] + std::string(pad, ' ');
      } else {
        out += std::string(pad, ' ') + line[j];
      }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    os << out << '\n';
  }
}

namespace {
const std::vector<std::string> kRawHeader{"family",  "d",         "tau",       "method",  "margins",  "rep",
                                          "theta0",  "theta_hat", "converged", "clamped", "user_time"};
}

void write_raw_csv(std::ostream& os, const std::vector<ReplicationRecord>& raw) {
  for (std::size_t j = 0; j < kRawHeader.size(); ++j) os << (j ? "," : "") << kRawHeader[j];
  os << '\n';
  for (const auto& r : raw) {
    os << to_string(r.family) << ',' << r.d << ',' << format_double(r.tau) << ',' << to_string(r.method) << ','
       << to_string(r.margins) << ',' << r.rep << ',' << format_double(r.theta0) << ','
       << format_double(r.theta_hat) << ',' << (r.converged ? 1 : 0) << ',' << (r.clamped ? 1 : 0) << ','
       << format_double(r.user_time) << '\n';
  }
}

std::vector<ReplicationRecord> read_raw_csv(std::istream& is) {
  const CsvTable t = read_csv(is);
  if (t.header != kRawHeader) {
    std::string expected;
    for (const auto& h : kRawHeader) expected += (expected.empty() ? "" : ",") + h;
    throw ArgumentError("raw csv: header must be " + expected);
  }
  std::vector<ReplicationRecord> out;
  out.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    ReplicationRecord r;
    r.family = parse_family(row[0]);
    r.d = static_cast<int>(parse_double(row[1]));
    r.tau = parse_double(row[2]);
    r.method = parse_method(row[3]);
    r.margins = parse_margins(row[4]);
    r.rep = static_cast<std::size_t>(parse_double(row[5]));
    r.theta0 = parse_double(row[6]);
    r.theta_hat = parse_double(row[7]);
    r.converged = parse_bool01(row[8]);
    r.clamped = parse_bool01(row[9]);
    r.user_time = parse_double(row[10]);
    out.push_back(r);
  }
  return out;
}

void write_summary_csv(std::ostream& os, const std::vector<ErrorSummary>& s) {
  os << "family,d,tau,method,margins,min,q25,median,q75,max\n";
  for (const auto& e : s) {
    os << to_string(e.family) << ',' << e.d << ',' << format_double(e.tau) << ',' << to_string(e.method) << ','
       << to_string(e.margins);
    for (double q : e.q) os << ',' << format_double(q);
    os << '\n';
  }
}

}  // namespace archicop
