#pragma once

// Simulation harness: replicate, estimate and aggregate bias, RMSE and mean
// user time per (family, d, tau, method, margins) cell.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "archicop/estimators.hpp"
#include "archicop/family.hpp"
#include "archicop/matrix.hpp"

namespace archicop {

enum class Margins { known, pobs };
enum class MarginsMode { known, pobs, both };

std::string_view to_string(Margins m);
Margins parse_margins(std::string_view s);
std::string_view to_string(MarginsMode m);
MarginsMode parse_margins_mode(std::string_view s);

struct StudyConfig {
  std::vector<Family> families{Family::C, Family::G};
  std::vector<int> d_list{5};
  std::vector<double> tau_targets{0.25};
  std::size_t n = 100;
  std::size_t replications = 250;
  MarginsMode margins = MarginsMode::known;
  std::vector<Method> methods{Method::mle};
  std::uint64_t master_seed = 1;
  EstimatorConfig est;
  /// Execution policy across replications.
  Exec exec = Exec::parallel;
  /// When false every user time is recorded as 0, which makes all outputs
  /// byte-identical between runs.
  bool record_time = true;
  /// Projected wall-time cap in seconds for the pilot guard; 0 disables it.
  double time_cap = 0.0;
};

/// Throws ArgumentError on an empty or inconsistent configuration.
void validate(const StudyConfig& cfg);

/// One estimator call of one replication.
struct ReplicationRecord {
  Family family = Family::C;
  int d = 0;
  double tau = 0.0;
  Method method = Method::mle;
  Margins margins = Margins::known;
  std::size_t rep = 0;
  double theta0 = 0.0;
  /// NaN when the estimator raised an error.
  double theta_hat = 0.0;
  bool converged = false;
  bool clamped = false;
  double user_time = 0.0;
};

struct ReportRow {
  Family family = Family::C;
  int d = 0;
  double tau = 0.0;
  Method method = Method::mle;
  Margins margins = Margins::known;
  double theta0 = 0.0;
  std::size_t replications = 0;
  /// Replications with a finite estimate; bias and RMSE are taken over these.
  std::size_t used = 0;
  double bias = 0.0;
  double rmse = 0.0;
  double mean_user_time = 0.0;
  /// Errors plus non-converged fits.
  std::size_t n_fail = 0;
  std::size_t n_clamped = 0;
  /// metric / metric(MLE) in the same cell; NaN when MLE is absent.
  double bias_factor = 0.0;
  double rmse_factor = 0.0;
  double mut_factor = 0.0;
};

struct StudyReport {
  std::vector<ReportRow> rows;
  std::vector<ReplicationRecord> raw;
  std::vector<std::string> warnings;
};

/// The tau targets of cfg that apply to family f (A stays below 1/3).
std::vector<double> tau_targets_for(Family f, const StudyConfig& cfg);

StudyReport run_study(const StudyConfig& cfg);

/// The copula sample of replication `rep` in cell (f, d, tau). It depends on
/// the master seed, the sample size and the cell only, not on which other
/// replications ran.
DataMatrix replication_data(const StudyConfig& cfg, Family f, int d, double tau, std::size_t rep);

/// Rows from raw records, ordered by (family, d, tau, margins, method) in first
/// appearance order of the records.
std::vector<ReportRow> aggregate(const std::vector<ReplicationRecord>& raw);

struct ErrorSummary {
  Family family;
  int d;
  double tau;
  Method method;
  Margins margins;
  /// min, lower quartile, median, upper quartile, max of sqrt|theta_hat - theta0|.
  double q[5];
};
std::vector<ErrorSummary> sqrt_abs_error_summary(const std::vector<ReplicationRecord>& raw);

enum class Metric { bias, rmse, mut };
std::string_view to_string(Metric m);
Metric parse_metric(std::string_view s);

enum class TableFormat { csv, text };

/// One table per metric: rows (tau, family, d, margins), one column per method
/// with the MLE-relative factor in a paired column. Bias and RMSE are scaled
/// by 1000, mean user time is in milliseconds.
void write_table(std::ostream& os, const std::vector<ReportRow>& rows, Metric metric, TableFormat fmt);

void write_raw_csv(std::ostream& os, const std::vector<ReplicationRecord>& raw);
std::vector<ReplicationRecord> read_raw_csv(std::istream& is);

void write_summary_csv(std::ostream& os, const std::vector<ErrorSummary>& s);

}  // namespace archicop
