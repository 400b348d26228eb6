// Command-line front end: sample, density, estimate, gof-transform, simulate
// and tables subcommands over CSV input and CSV or JSON-lines output.

#include <omp.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "archicop/csv.hpp"
#include "archicop/density.hpp"
#include "archicop/errors.hpp"
#include "archicop/estimators.hpp"
#include "archicop/family.hpp"
#include "archicop/rank.hpp"
#include "archicop/rng.hpp"
#include "archicop/sampling.hpp"
#include "archicop/study.hpp"
#include "archicop/transform.hpp"

namespace ac = archicop;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Library argument errors raised while interpreting flags are usage errors.
template <class F>
auto usage(F&& f) {
  try {
    return f();
  } catch (const ac::ArgumentError& e) {
    throw UsageError(e.what());
  } catch (const ac::RangeError& e) {
    throw UsageError(e.what());
  } catch (const ac::DomainError& e) {
    throw UsageError(e.what());
  }
}

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

// Output goes to a buffer first so that a failure leaves neither a partial
// file nor partial standard output.
void emit(const std::string& path, const std::function<void(std::ostream&)>& writer) {
  if (path.empty() || path == "-") {
    std::ostringstream buf;
    writer(buf);
    std::cout << buf.str() << std::flush;
    return;
  }
  ac::write_file_atomic(path, writer);
}

ac::Matrix read_input(const std::string& path) {
  if (path == "-") return ac::read_matrix(std::cin);
  return ac::read_matrix_file(path);
}

struct ParamFlags {
  std::string family;
  std::optional<double> theta;
  std::optional<double> tau;

  void add(CLI::App* app) {
    app->add_option("--family", family, "A, C, F, G or J (or the full name)")->required();
    auto* th = app->add_option("--theta", theta, "Copula parameter");
    auto* ta = app->add_option("--tau", tau, "Kendall's tau, inverted to theta");
    th->excludes(ta);
  }

  ac::FamilySpec spec() const {
    return usage([&] {
      const ac::Family f = ac::parse_family(family);
      if (!theta && !tau) throw UsageError("exactly one of --theta and --tau is required");
      return ac::FamilySpec(f, theta ? *theta : ac::tau_inv(f, *tau));
    });
  }
};

void apply_thread_env() {
  const char* env = std::getenv("ARCHICOP_THREADS");
  if (!env || !*env) return;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1 || n > 4096) throw UsageError("ARCHICOP_THREADS must be a positive integer");
  omp_set_num_threads(static_cast<int>(n));
}

std::vector<ac::Method> parse_methods(const std::vector<std::string>& tags) {
  std::vector<ac::Method> out;
  for (const auto& t : tags) {
    if (t == "all") {
      out.insert(out.end(), ac::kAllMethods.begin(), ac::kAllMethods.end());
      continue;
    }
    out.push_back(usage([&] { return ac::parse_method(t); }));
  }
  return out;
}

std::optional<bool> parse_include_k(const std::string& s) {
  if (s == "auto") return std::nullopt;
  if (s == "yes" || s == "true" || s == "1") return true;
  if (s == "no" || s == "false" || s == "0") return false;
  throw UsageError("--include-k must be auto, yes or no");
}

// Applies key = value items of a config file to the options not given on the
// command line.
void apply_config_file(CLI::App* app, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  const auto items = CLI::ConfigTOML().from_config(in);
  for (const auto& it : items) {
    if (it.name == "++" || it.name == "--" || it.name.empty()) continue;
    CLI::Option* opt = nullptr;
    try {
      opt = app->get_option("--" + it.name);
    } catch (const CLI::OptionNotFound&) {
      throw UsageError("unknown key '" + it.name + "' in config file '" + path + "'");
    }
    if (opt->count() > 0) continue;
    for (const auto& v : it.inputs) opt->add_result(v);
    opt->run_callback();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Estimation and simulation for one-parameter Archimedean copulas"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  // sample
  auto* sample = app.add_subcommand("sample", "Draw a copula sample");
  ParamFlags sample_p;
  sample_p.add(sample);
  std::size_t sample_n = 0;
  int sample_d = 0;
  std::uint64_t sample_seed = 1;
  std::string sample_out;
  bool sample_header = false;
  sample->add_option("--n", sample_n, "Sample size")->required()->check(CLI::PositiveNumber);
  sample->add_option("--d", sample_d, "Dimension")->required()->check(CLI::Range(1, 100000));
  sample->add_option("--seed", sample_seed, "Random seed");
  sample->add_option("--out", sample_out, "Output CSV (default: standard output)");
  sample->add_flag("--header", sample_header, "Write a u1,...,ud header row");

  // density
  auto* density = app.add_subcommand("density", "Log-density of each row");
  ParamFlags dens_p;
  dens_p.add(density);
  std::string dens_in;
  std::string dens_out;
  std::string dens_polyg = "default";
  bool dens_generic = false;
  density->add_option("--in", dens_in, "Input CSV with values in (0,1)")->required();
  density->add_option("--out", dens_out, "Output CSV (default: standard output)");
  density->add_option("--polyg-method", dens_polyg, "Gumbel polynomial method");
  density->add_flag("--generic", dens_generic, "Use the generator-derivative route instead of the explicit density");

  // estimate
  auto* est = app.add_subcommand("estimate", "Estimate the copula parameter");
  std::string est_family;
  std::vector<std::string> est_methods{"mle"};
  std::string est_in;
  std::string est_out;
  std::string est_format = "csv";
  std::string est_include_k = "auto";
  bool est_pobs = false;
  bool est_fixed_block = false;
  std::size_t est_smle_m = 10000;
  std::uint64_t est_seed = 1;
  est->add_option("--family", est_family, "A, C, F, G or J")->required();
  est->add_option("--method", est_methods, "Method tags, comma separated, or 'all'")->delimiter(',');
  est->add_option("--in", est_in, "Input CSV")->required();
  est->add_option("--out", est_out, "Output file (default: standard output)");
  est->add_option("--format", est_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  est->add_option("--include-k", est_include_k, "MDE: include the Kendall component (auto, yes, no)");
  est->add_flag("--pobs", est_pobs, "Replace the data by pseudo-observations first");
  est->add_option("--smle-m", est_smle_m, "SMLE Monte Carlo block size")->check(CLI::PositiveNumber);
  est->add_flag("--smle-fixed-block", est_fixed_block, "SMLE: one variate block per fit");
  est->add_option("--seed", est_seed, "Random seed (SMLE)");

  // gof-transform
  auto* gof = app.add_subcommand("gof-transform", "Transform data to uniforms under a fitted copula");
  ParamFlags gof_p;
  gof_p.add(gof);
  std::string gof_in;
  std::string gof_out;
  std::string gof_reduced;
  std::string gof_include_k = "auto";
  bool gof_pobs = false;
  gof->add_option("--in", gof_in, "Input CSV")->required();
  gof->add_option("--out", gof_out, "Transformed matrix (default: standard output)");
  gof->add_option("--reduced-out", gof_reduced, "Write the chi-square and gamma reductions y_n,y_l here");
  gof->add_option("--include-k", gof_include_k, "Include the Kendall component (auto, yes, no)");
  gof->add_flag("--pobs", gof_pobs, "Replace the data by pseudo-observations first");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run a simulation study");
  std::string sim_config;
  std::vector<std::string> sim_families{"C", "G"};
  std::vector<int> sim_d{5};
  std::vector<double> sim_tau{0.25};
  std::size_t sim_n = 100;
  std::size_t sim_reps = 250;
  std::string sim_margins = "known";
  std::vector<std::string> sim_methods{"mle"};
  std::uint64_t sim_seed = 1;
  std::size_t sim_smle_m = 10000;
  bool sim_fixed_block = false;
  std::string sim_include_k = "auto";
  std::string sim_tau_clamp = "clamp";
  double sim_time_cap = 1800.0;
  bool sim_no_time = false;
  bool sim_serial = false;
  std::string sim_out_dir;
  sim->add_option("--config", sim_config, "key = value file; command-line flags take precedence");
  sim->add_option("--families", sim_families, "Families, comma separated")->delimiter(',');
  sim->add_option("--d", sim_d, "Dimensions, comma separated")->delimiter(',');
  sim->add_option("--tau", sim_tau, "Kendall's tau targets, comma separated")->delimiter(',');
  sim->add_option("--n", sim_n, "Sample size");
  sim->add_option("--replications", sim_reps, "Replications per cell");
  sim->add_option("--margins", sim_margins, "known, pobs or both");
  sim->add_option("--methods", sim_methods, "Method tags, comma separated, or 'all'")->delimiter(',');
  sim->add_option("--seed", sim_seed, "Master seed");
  sim->add_option("--smle-m", sim_smle_m, "SMLE Monte Carlo block size");
  sim->add_flag("--smle-fixed-block", sim_fixed_block, "SMLE: one variate block per fit");
  sim->add_option("--include-k", sim_include_k, "MDE: include the Kendall component (auto, yes, no)");
  sim->add_option("--tau-clamp", sim_tau_clamp, "clamp or error for unattainable averaged tau");
  sim->add_option("--time-cap", sim_time_cap, "Warn when the projected wall time exceeds this many seconds (0: off)");
  sim->add_flag("--no-time", sim_no_time, "Record zero user times for byte-identical output");
  sim->add_flag("--serial", sim_serial, "Run replications on one thread");
  sim->add_option("--out-dir", sim_out_dir, "Directory for raw.csv, summary.csv and the tables")->required();

  // tables
  auto* tab = app.add_subcommand("tables", "Aggregate a raw replication file into a table");
  std::string tab_in;
  std::string tab_out;
  std::string tab_metric = "rmse";
  std::string tab_format = "text";
  tab->add_option("--in", tab_in, "raw.csv written by simulate")->required();
  tab->add_option("--metric", tab_metric, "bias, rmse or mut");
  tab->add_option("--format", tab_format, "text or csv")->check(CLI::IsMember({"text", "csv"}));
  tab->add_option("--out", tab_out, "Output file (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "archicop: error: " << one_line(e.what()) << '\n';
    return 2;
  }

  try {
    apply_thread_env();

    if (*sample) {
      const ac::FamilySpec spec = sample_p.spec();
      ac::RngStream rng(sample_seed, 0, ac::StreamPurpose::cli);
      const ac::Matrix u = ac::sample_copula(spec, sample_n, sample_d, rng);
      std::vector<std::string> header;
      if (sample_header) {
        for (int j = 1; j <= sample_d; ++j) header.push_back("u" + std::to_string(j));
      }
      emit(sample_out, [&](std::ostream& os) { ac::write_matrix(os, u, header); });
    } else if (*density) {
      const ac::FamilySpec spec = dens_p.spec();
      const auto pm = usage([&] { return ac::parse_polyg_method(dens_polyg); });
      const ac::Matrix u = read_input(dens_in);
      if (u.empty()) throw ac::ArgumentError("input has no data rows");
      ac::Matrix out(u.rows(), 1);
      if (dens_generic) {
        for (std::size_t i = 0; i < u.rows(); ++i) out(i, 0) = ac::log_density_generic(spec, u.row(i));
      } else {
        const ac::DensityContext ctx(spec, static_cast<int>(u.cols()), pm);
        const auto v = ac::log_density_rows(ctx, u, ac::Exec::parallel);
        for (std::size_t i = 0; i < v.size(); ++i) out(i, 0) = v[i];
      }
      emit(dens_out, [&](std::ostream& os) { ac::write_matrix(os, out, {"log_density"}); });
    } else if (*est) {
      const ac::Family f = usage([&] { return ac::parse_family(est_family); });
      const auto methods = parse_methods(est_methods);
      ac::EstimatorConfig cfg;
      cfg.smle_m = est_smle_m;
      cfg.smle_fixed_block = est_fixed_block;
      cfg.mde_include_k = parse_include_k(est_include_k);
      cfg.exec = ac::Exec::parallel;
      ac::Matrix u = read_input(est_in);
      if (est_pobs) u = ac::pobs(u);
      std::vector<ac::EstimateResult> results;
      for (std::size_t k = 0; k < methods.size(); ++k) {
        ac::RngStream rng = ac::RngStream(est_seed, 0, ac::StreamPurpose::cli).substream(k);
        results.push_back(ac::estimate(methods[k], f, u, cfg, rng));
      }
      emit(est_out, [&](std::ostream& os) {
        if (est_format == "csv") os << "family,method,theta_hat,converged,clamped,objective,user_time\n";
        for (const auto& r : results) {
          if (est_format == "json") {
            nlohmann::json j;
            j["family"] = std::string(ac::to_string(f));
            j["method"] = std::string(ac::to_string(r.method));
            j["theta_hat"] = r.theta_hat;
            j["converged"] = r.converged;
            j["clamped"] = r.clamped;
            j["objective"] = r.objective;
            j["user_time"] = r.user_time;
            os << j.dump() << '\n';
          } else {
            os << ac::to_string(f) << ',' << ac::to_string(r.method) << ',' << ac::format_double(r.theta_hat) << ','
               << (r.converged ? 1 : 0) << ',' << (r.clamped ? 1 : 0) << ',' << ac::format_double(r.objective)
               << ',' << ac::format_double(r.user_time) << '\n';
          }
        }
      });
    } else if (*gof) {
      const ac::FamilySpec spec = gof_p.spec();
      const auto inc = parse_include_k(gof_include_k);
      ac::Matrix u = read_input(gof_in);
      if (u.empty()) throw ac::ArgumentError("input has no data rows");
      if (gof_pobs) u = ac::pobs(u);
      const bool include_k = inc.value_or(ac::default_include_k(static_cast<int>(u.cols())));
      const ac::TransformOutput tr = ac::hh_transform(spec, u, include_k, ac::Exec::parallel);
      if (!gof_reduced.empty()) {
        ac::Matrix y(tr.y_n.size(), 2);
        for (std::size_t i = 0; i < tr.y_n.size(); ++i) {
          y(i, 0) = tr.y_n[i];
          y(i, 1) = tr.y_l[i];
        }
        ac::write_file_atomic(gof_reduced, [&](std::ostream& os) { ac::write_matrix(os, y, {"y_n", "y_l"}); });
      }
      emit(gof_out, [&](std::ostream& os) { ac::write_matrix(os, tr.uprime); });
    } else if (*sim) {
      if (!sim_config.empty()) {
        try {
          apply_config_file(sim, sim_config);
        } catch (const CLI::Error& e) {
          throw UsageError(std::string("config file: ") + e.what());
        }
      }
      ac::StudyConfig cfg;
      cfg.families.clear();
      for (const auto& s : sim_families) cfg.families.push_back(usage([&] { return ac::parse_family(s); }));
      cfg.d_list = sim_d;
      cfg.tau_targets = sim_tau;
      cfg.n = sim_n;
      cfg.replications = sim_reps;
      cfg.margins = usage([&] { return ac::parse_margins_mode(sim_margins); });
      cfg.methods = parse_methods(sim_methods);
      cfg.master_seed = sim_seed;
      cfg.est.smle_m = sim_smle_m;
      cfg.est.smle_fixed_block = sim_fixed_block;
      cfg.est.mde_include_k = parse_include_k(sim_include_k);
      if (sim_tau_clamp == "clamp") {
        cfg.est.tau_clamp = ac::TauClampPolicy::clamp;
      } else if (sim_tau_clamp == "error") {
        cfg.est.tau_clamp = ac::TauClampPolicy::error;
      } else {
        throw UsageError("--tau-clamp must be clamp or error");
      }
      cfg.record_time = !sim_no_time;
      cfg.time_cap = sim_time_cap;
      cfg.exec = sim_serial ? ac::Exec::serial : ac::Exec::parallel;
      usage([&] {
        ac::validate(cfg);
        return 0;
      });

      const ac::StudyReport rep = ac::run_study(cfg);
      for (const auto& w : rep.warnings) std::cerr << "archicop: warning: " << w << '\n';
      namespace fs = std::filesystem;
      fs::create_directories(sim_out_dir);
      const fs::path dir(sim_out_dir);
      ac::write_file_atomic((dir / "raw.csv").string(), [&](std::ostream& os) { ac::write_raw_csv(os, rep.raw); });
      ac::write_file_atomic((dir / "summary.csv").string(), [&](std::ostream& os) {
        ac::write_summary_csv(os, ac::sqrt_abs_error_summary(rep.raw));
      });
      for (ac::Metric m : {ac::Metric::bias, ac::Metric::rmse, ac::Metric::mut}) {
        const std::string base = std::string(ac::to_string(m));
        ac::write_file_atomic((dir / (base + ".csv")).string(), [&](std::ostream& os) {
          ac::write_table(os, rep.rows, m, ac::TableFormat::csv);
        });
        ac::write_file_atomic((dir / (base + ".txt")).string(), [&](std::ostream& os) {
          ac::write_table(os, rep.rows, m, ac::TableFormat::text);
        });
      }
    } else if (*tab) {
      const ac::Metric metric = usage([&] { return ac::parse_metric(tab_metric); });
      std::vector<ac::ReplicationRecord> raw;
      if (tab_in == "-") {
        raw = ac::read_raw_csv(std::cin);
      } else {
        std::ifstream in(tab_in, std::ios::binary);
        if (!in) throw ac::Error("cannot open '" + tab_in + "' for reading");
        raw = ac::read_raw_csv(in);
      }
      const auto rows = ac::aggregate(raw);
      const auto fmt = tab_format == "csv" ? ac::TableFormat::csv : ac::TableFormat::text;
      emit(tab_out, [&](std::ostream& os) { ac::write_table(os, rows, metric, fmt); });
    }
  } catch (const UsageError& e) {
    std::cerr << "archicop: error: " << one_line(e.what()) << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "archicop: error: " << one_line(e.what()) << '\n';
    return 1;
  }
  return 0;
}
