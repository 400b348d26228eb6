#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "doctest.h"

#include "archicop/csv.hpp"
#include "archicop/errors.hpp"
#include "archicop/estimators.hpp"
#include "archicop/rank.hpp"
#include "archicop/study.hpp"

namespace ac = archicop;
using ac::Family;
using ac::Method;

namespace {

ac::StudyConfig small_config() {
  ac::StudyConfig cfg;
  cfg.families = {Family::C, Family::G};
  cfg.d_list = {3};
  cfg.tau_targets = {0.25};
  cfg.n = 40;
  cfg.replications = 6;
  cfg.methods = {Method::mle, Method::tau_tau_bar, Method::smle};
  cfg.est.smle_m = 200;
  cfg.record_time = false;
  return cfg;
}

std::string raw_text(const ac::StudyReport& r) {
  std::ostringstream os;
  ac::write_raw_csv(os, r.raw);
  return os.str();
}

}  // namespace

TEST_SUITE("study") {

TEST_CASE("a single replication reproduces the single estimate") {
  ac::StudyConfig cfg;
  cfg.families = {Family::C};
  cfg.d_list = {2};
  cfg.tau_targets = {0.4};
  cfg.replications = 1;
  cfg.methods = {Method::tau_tau_bar};
  const auto rep = ac::run_study(cfg);
  REQUIRE(rep.rows.size() == 1);
  const auto u = ac::replication_data(cfg, Family::C, 2, 0.4, 0);
  const auto e = ac::est_tau_tau_bar(Family::C, u, cfg.est);
  CHECK(rep.raw[0].theta_hat == e.theta_hat);
  CHECK(rep.rows[0].bias == e.theta_hat - ac::tau_inv(Family::C, 0.4));
  CHECK(rep.rows[0].rmse == std::fabs(rep.rows[0].bias));
  CHECK(rep.rows[0].n_fail == 0);
}

TEST_CASE("reports are deterministic and independent of the thread count") {
  auto cfg = small_config();
  const auto a = ac::run_study(cfg);
  const auto b = ac::run_study(cfg);
  cfg.exec = ac::Exec::serial;
  const auto c = ac::run_study(cfg);
  CHECK(raw_text(a) == raw_text(b));
  CHECK(raw_text(a) == raw_text(c));
  std::ostringstream ta, tc;
  ac::write_table(ta, a.rows, ac::Metric::rmse, ac::TableFormat::csv);
  ac::write_table(tc, c.rows, ac::Metric::rmse, ac::TableFormat::csv);
  CHECK(ta.str() == tc.str());
}

TEST_CASE("replication streams are isolated") {
  auto cfg = small_config();
  const auto first = ac::replication_data(cfg, Family::G, 3, 0.25, 4);
  cfg.replications = 100;
  cfg.methods = {Method::beta};
  CHECK(ac::replication_data(cfg, Family::G, 3, 0.25, 4) == first);
  CHECK(!(ac::replication_data(cfg, Family::G, 3, 0.25, 5) == first));
  cfg.replications = 5;
  const auto rep = ac::run_study(cfg);
  const auto e = ac::est_beta(Family::G, first, cfg.est);
  bool found = false;
  for (const auto& r : rep.raw) {
    if (r.family == Family::G && r.rep == 4) {
      CHECK(r.theta_hat == e.theta_hat);
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("aggregates: rmse identity, factors and counts") {
  auto cfg = small_config();
  cfg.margins = ac::MarginsMode::both;
  const auto rep = ac::run_study(cfg);
  CHECK(rep.rows.size() == 2 * 2 * 3);
  for (const auto& row : rep.rows) {
    CHECK(row.replications == cfg.replications);
    double mean = 0.0;
    std::size_t k = 0;
    for (const auto& r : rep.raw) {
      if (r.family == row.family && r.method == row.method && r.margins == row.margins) {
        mean += r.theta_hat;
        ++k;
      }
    }
    mean /= k;
    double var = 0.0;
    for (const auto& r : rep.raw) {
      if (r.family == row.family && r.method == row.method && r.margins == row.margins) {
        var += (r.theta_hat - mean) * (r.theta_hat - mean);
      }
    }
    var /= k;
    CHECK(row.rmse * row.rmse == doctest::Approx(row.bias * row.bias + var).epsilon(1e-12));
    CHECK(row.rmse >= std::fabs(row.bias) * (1 - 1e-15));
    if (row.method == Method::mle) {
      CHECK(row.rmse_factor == 1.0);
      CHECK(row.bias_factor == 1.0);
    }
  }
}

TEST_CASE("paired design: pobs fits use the same samples") {
  auto cfg = small_config();
  cfg.margins = ac::MarginsMode::both;
  cfg.methods = {Method::tau_tau_bar};
  const auto rep = ac::run_study(cfg);
  // the averaged sample tau is rank-based, so both margins give the same estimate
  for (const auto& k : rep.raw) {
    if (k.margins != ac::Margins::known) continue;
    for (const auto& p : rep.raw) {
      if (p.margins == ac::Margins::pobs && p.family == k.family && p.rep == k.rep) CHECK(p.theta_hat == k.theta_hat);
    }
  }
}

TEST_CASE("AMH is skipped for tau targets of 1/3 and above") {
  ac::StudyConfig cfg;
  cfg.families = {Family::A, Family::C};
  cfg.tau_targets = {0.25, 0.75};
  CHECK(ac::tau_targets_for(Family::A, cfg) == std::vector<double>{0.25});
  CHECK(ac::tau_targets_for(Family::C, cfg).size() == 2);
}

TEST_CASE("estimator errors are counted, not fatal") {
  ac::StudyConfig cfg;
  cfg.families = {Family::C};
  cfg.d_list = {2};
  cfg.tau_targets = {0.02};
  cfg.n = 10;
  cfg.replications = 40;
  cfg.methods = {Method::tau_tau_bar};
  cfg.est.tau_clamp = ac::TauClampPolicy::error;
  const auto rep = ac::run_study(cfg);
  REQUIRE(rep.rows.size() == 1);
  CHECK(rep.rows[0].n_fail > 0);
  CHECK(rep.rows[0].used == cfg.replications - rep.rows[0].n_fail);
  CHECK(std::isfinite(rep.rows[0].rmse));
}

TEST_CASE("configuration checks") {
  ac::StudyConfig cfg;
  cfg.replications = 0;
  CHECK_THROWS_AS(ac::validate(cfg), ac::ArgumentError);
  cfg = {};
  cfg.d_list = {1};
  CHECK_THROWS_AS(ac::validate(cfg), ac::ArgumentError);
  cfg = {};
  cfg.tau_targets = {1.0};
  CHECK_THROWS_AS(ac::validate(cfg), ac::ArgumentError);
  cfg = {};
  cfg.methods.clear();
  CHECK_THROWS_AS(ac::run_study(cfg), ac::ArgumentError);
}

TEST_CASE("pilot guard warns when the projection exceeds the cap") {
  auto cfg = small_config();
  cfg.replications = 3;
  cfg.time_cap = 1e-9;
  CHECK(ac::run_study(cfg).warnings.size() == 1);
  cfg.time_cap = 0.0;
  CHECK(ac::run_study(cfg).warnings.empty());
}

TEST_CASE("tables") {
  std::ostringstream empty;
  ac::write_table(empty, {}, ac::Metric::rmse, ac::TableFormat::csv);
  CHECK(empty.str() == "tau,family,d,margins\n");

  auto cfg = small_config();
  cfg.families = {Family::C};
  const auto rep = ac::run_study(cfg);
  std::ostringstream os;
  ac::write_table(os, rep.rows, ac::Metric::rmse, ac::TableFormat::csv);
  std::istringstream is(os.str());
  const auto t = ac::read_csv(is);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.header[4] == "mle");
  CHECK(t.header[5] == "mle_factor");
  CHECK(ac::parse_double(t.rows[0][4]) == 1000.0 * rep.rows[0].rmse);
  CHECK(ac::parse_double(t.rows[0][5]) == 1.0);

  std::ostringstream text;
  ac::write_table(text, rep.rows, ac::Metric::rmse, ac::TableFormat::text);
  CHECK(text.str().find("(1.0)") != std::string::npos);
}

TEST_CASE("raw records round trip") {
  auto cfg = small_config();
  cfg.record_time = true;
  const auto rep = ac::run_study(cfg);
  std::stringstream ss;
  ac::write_raw_csv(ss, rep.raw);
  const auto back = ac::read_raw_csv(ss);
  REQUIRE(back.size() == rep.raw.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].theta_hat == rep.raw[i].theta_hat);
    CHECK(back[i].theta0 == rep.raw[i].theta0);
    CHECK(back[i].user_time == rep.raw[i].user_time);
    CHECK(back[i].method == rep.raw[i].method);
    CHECK(back[i].converged == rep.raw[i].converged);
  }
  const auto rows = ac::aggregate(back);
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].rmse == rep.rows[i].rmse);
  std::istringstream bad("family,d\nC,5\n");
  CHECK_THROWS_AS(ac::read_raw_csv(bad), ac::ArgumentError);
}

TEST_CASE("square-root absolute error summary") {
  std::vector<ac::ReplicationRecord> raw(5);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    raw[i].theta0 = 2.0;
    raw[i].theta_hat = 2.0;
    raw[i].rep = i;
  }
  auto s = ac::sqrt_abs_error_summary(raw);
  REQUIRE(s.size() == 1);
  for (double q : s[0].q) CHECK(q == 0.0);

  const auto rep = ac::run_study(small_config());
  for (const auto& e : ac::sqrt_abs_error_summary(rep.raw)) {
    for (int k = 0; k < 4; ++k) CHECK(e.q[k] <= e.q[k + 1]);
  }
}

}  // TEST_SUITE

TEST_SUITE("csv") {

TEST_CASE("shortest round-trip formatting") {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> U(-50.0, 50.0);
  for (int i = 0; i < 2000; ++i) {
    const double x = std::exp(U(gen)) * (i % 2 ? 1 : -1);
    CHECK(ac::parse_double(ac::format_double(x)) == x);
  }
  CHECK(ac::format_double(0.1) == "0.1");
  CHECK(ac::format_double(1e300) == "1e+300");
  CHECK(std::isnan(ac::parse_double(ac::format_double(std::nan("")))));
  CHECK(ac::parse_double(ac::format_double(-ac::kInf)) == -ac::kInf);
  CHECK_THROWS_AS(ac::parse_double("1,5"), ac::ArgumentError);
  CHECK_THROWS_AS(ac::parse_double(""), ac::ArgumentError);
}

TEST_CASE("header detection and line endings") {
  std::istringstream with_header("u1,u2\r\n0.5,0.25\r\n\r\n0.125,1e-3\r\n");
  const auto m = ac::read_matrix(with_header);
  CHECK(m.rows() == 2);
  CHECK(m(1, 1) == 1e-3);
  std::istringstream plain("0.5,0.25\n0.125,0.75");
  CHECK(ac::read_matrix(plain).rows() == 2);
  std::istringstream ragged("0.5,0.25\n0.125\n");
  CHECK_THROWS_AS(ac::read_matrix(ragged), ac::ArgumentError);
  std::istringstream junk("a,b\n0.5,x\n");
  CHECK_THROWS_AS(ac::read_matrix(junk), ac::ArgumentError);
}

TEST_CASE("matrix round trip") {
  ac::Matrix m(3, 2);
  m(0, 0) = 1.0 / 3;
  m(1, 1) = 2.0 / 7;
  m(2, 0) = 1e-17;
  std::stringstream ss;
  ac::write_matrix(ss, m, {"a", "b"});
  CHECK(ac::read_matrix(ss) == m);
}

TEST_CASE("atomic writes leave no partial file") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "archicop_csv_test";
  fs::create_directories(dir);
  const std::string path = (dir / "out.csv").string();
  fs::remove(path);
  CHECK_THROWS(ac::write_file_atomic(path, [](std::ostream& os) {
    os << "partial";
    throw ac::Error("boom");
  }));
  CHECK(!fs::exists(path));
  CHECK(!fs::exists(path + ".tmp"));
  ac::write_file_atomic(path, [](std::ostream& os) { os << "ok\n"; });
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "ok");
  fs::remove_all(dir);
}

}  // TEST_SUITE
