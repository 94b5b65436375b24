#include <cmath>
#include <sstream>

#include "chiralrbm/errors.hpp"
#include "chiralrbm/experiments.hpp"
#include "chiralrbm/newman.hpp"
#include "doctest.h"

using namespace chiralrbm;
using namespace std::complex_literals;

TEST_CASE("decay fit recovers an exact line") {
  std::vector<DecayPoint> pts;
  for (int n : {4, 8, 16, 32}) pts.push_back({double(n), 5.0 - 0.25 * n, 1.0});
  const auto f = fit_exponential_decay(pts);
  CHECK(f.slope == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(f.intercept == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(f.chi2 < 1e-20);
  CHECK(f.dof == 2);
}

TEST_CASE("decay fit on constant data has zero slope") {
  std::vector<DecayPoint> pts;
  for (int n : {2, 4, 6}) pts.push_back({double(n), 1.5, 0.1});
  CHECK(std::abs(fit_exponential_decay(pts).slope) < 1e-14);
}

TEST_CASE("decay fit on noisy synthetic data") {
  // Oracle: the generating slope, with Gaussian noise of sigma 0.01 from a fixed stream.
  RngStream rng(1, 0);
  std::vector<DecayPoint> pts;
  for (int n = 4; n <= 64; n += 4) pts.push_back({double(n), 5.0 - 0.25 * n + 0.01 * rng.normal(), 0.01});
  const auto f = fit_exponential_decay(pts);
  CHECK(std::abs(f.slope - 0.25) < 3.0 * f.slope_std_error);
  CHECK(std::abs(f.intercept - 5.0) < 3.0 * f.intercept_std_error);
  // Analytic slope error for equal weights: sigma / sqrt(sum (n - mean n)^2).
  double mean = 0.0, sxx = 0.0;
  for (const auto& p : pts) mean += p.n / pts.size();
  for (const auto& p : pts) sxx += (p.n - mean) * (p.n - mean);
  CHECK(f.slope_std_error == doctest::Approx(0.01 / std::sqrt(sxx)).epsilon(1e-12));
}

TEST_CASE("decay fit rejects degenerate input") {
  CHECK_THROWS_AS(fit_exponential_decay({{2, 0, 1}, {4, 1, 1}}), ConfigError);
  CHECK_THROWS_AS(fit_exponential_decay({{2, 0, 1}, {2, 1, 1}, {2, 2, 1}}), ConfigError);
  CHECK_THROWS_AS(fit_exponential_decay({{2, 0, 1}, {4, 1, 0}, {6, 2, 1}}), ConfigError);
  CHECK_THROWS_AS(fit_exponential_decay({{2, 0, 1}, {4, NAN, 1}, {6, 2, 1}}), ConfigError);
}

TEST_CASE("power-law fit") {
  const std::vector<double> Ws{2, 4, 8, 16, 32};
  std::vector<double> exact, flat, newman;
  for (double W : Ws) {
    exact.push_back(0.7 / W);
    flat.push_back(0.3);
    newman.push_back(newman_decay_rate(int(W)));
  }
  const auto f = fit_power_law(Ws, exact);
  CHECK(f.alpha == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(f.prefactor == doctest::Approx(0.7).epsilon(1e-13));
  CHECK(f.residual_sum_of_squares < 1e-25);
  CHECK(std::abs(fit_power_law(Ws, flat).alpha) < 1e-13);
  const auto n = fit_power_law(Ws, newman);
  CHECK(n.alpha >= 0.85);
  CHECK(n.alpha <= 1.05);
  CHECK_THROWS_AS(fit_power_law({2, 4, 8}, {0.1, 0.0, 0.1}), ConfigError);
  CHECK_THROWS_AS(fit_power_law({2, 2, 4}, {0.1, 0.1, 0.1}), ConfigError);
  CHECK_THROWS_AS(fit_power_law({2, 4}, {0.1, 0.1, 0.1}), ConfigError);
}

TEST_CASE("per-block rates are half the per-factor exponents") {
  CHECK(newman_decay_rate(1) == doctest::Approx(0.31759071136536954).epsilon(1e-14));
  CHECK(newman_decay_rate(2) == doctest::Approx(kEulerGamma / 4).epsilon(1e-14));
  CHECK(complex_newman_decay_rate(1) == doctest::Approx(0.14430391622538322).epsilon(1e-14));
  CHECK(complex_newman_decay_rate(2) == doctest::Approx(0.067590711365369543).epsilon(1e-14));
}

TEST_CASE("decay scan config validation") {
  DecayScanConfig c;
  c.blocks = {4, 7};
  CHECK_THROWS_AS(run_decay_scan(c), ConfigError);
  c.blocks = {4, 8};
  c.samples = 10;
  CHECK_THROWS_AS(run_decay_scan(c), ConfigError);
  c.samples = 40;
  c.widths = {};
  CHECK_THROWS_AS(run_decay_scan(c), ConfigError);
  c.widths = {1};
  c.kind = ModelKind::full;
  CHECK_THROWS_AS(run_decay_scan(c), ConfigError);
}

TEST_CASE("decay scan with only n=2 has nothing to fit") {
  DecayScanConfig c;
  c.widths = {1, 2, 3};
  c.blocks = {2};
  c.samples = 30;
  const auto scan = run_decay_scan(c);
  CHECK(scan.cells.size() == 3);
  CHECK(scan.fits.empty());
  CHECK_FALSE(scan.scaling.has_value());
  for (const auto& cell : scan.cells) CHECK(cell.mean_log_norm == 0.0);
}

TEST_CASE("W=1 and W=2 decay rates match the complex Ginibre prediction") {
  DecayScanConfig c;
  c.widths = {1, 2};
  c.blocks = {4, 8, 16, 32, 64};  // W=2 fits on n >= 16
  c.samples = 400;
  c.seed = 7;
  const auto scan = run_decay_scan(c);
  REQUIRE(scan.fits.size() == 2);
  for (const auto& f : scan.fits) {
    CAPTURE(f.W);
    CHECK(std::abs(f.mu_hat() - complex_newman_decay_rate(f.W)) < 3.0 * f.mu_std_error());
    CHECK(f.mu_half_width() == doctest::Approx(3.0 * f.mu_std_error()));
    CHECK(f.log_mean_mu.has_value());
  }
  for (const auto& cell : scan.cells) {
    CHECK(cell.log_mean_norm >= cell.mean_log_norm);
    CHECK(cell.failure_fraction == 0.0);
  }
  CHECK(scan.fits[0].mu_hat() > scan.fits[1].mu_hat());
}

TEST_CASE("decay scan is reproducible and independent of grid composition") {
  DecayScanConfig c;
  c.widths = {1, 2};
  c.blocks = {4, 8, 16};
  c.samples = 50;
  c.seed = 3;
  c.workers = 1;
  const auto a = run_decay_scan(c);
  c.workers = 8;
  const auto b = run_decay_scan(c);
  std::ostringstream sa, sb;
  write_csv(decay_cells_table(a), sa);
  write_csv(decay_cells_table(b), sb);
  CHECK(sa.str() == sb.str());

  c.widths = {2};
  const auto only2 = run_decay_scan(c);
  CHECK(only2.cells[0].mean_log_norm == a.cells[3].mean_log_norm);
}

TEST_CASE("scan tables carry the documented columns") {
  DecayScanConfig c;
  c.widths = {1, 2, 4};
  c.blocks = {4, 8, 16, 32, 48, 64};
  c.samples = 40;
  const auto scan = run_decay_scan(c);
  CHECK(decay_cells_table(scan).columns ==
        std::vector<std::string>{"W", "n", "samples", "mean_log_norm", "std_error",
                                 "log_mean_norm", "failure_fraction", "used_in_fit"});
  CHECK(decay_cells_table(scan).rows.size() == 18);
  for (const auto& cell : scan.cells) CHECK(cell.used_in_fit == (cell.n >= 8 * cell.W));
  CHECK(decay_fits_table(scan).rows.size() == 3);
  REQUIRE(scan.scaling.has_value());
  CHECK(scaling_fit_table(*scan.scaling).rows.size() == 1);
}

TEST_CASE("fractional moment scan: resolvent bound far from the axis") {
  FractionalMomentScanConfig c;
  c.widths = {2, 3};
  c.blocks = {4, 7};
  c.energies = {10.0i};
  c.exponents = {0.3, 0.7};
  c.positions = {{1, 0}, {2, 3}};
  c.samples = 20;
  const auto scan = run_fractional_moment_scan(c);
  CHECK(scan.summary.rows.size() == 2 * 2 * 2 * 2);
  CHECK(scan.raw.rows.size() == 16 * 20);
  for (const auto& row : scan.summary.rows) {
    const double s = std::get<double>(row[6]);
    const double mean = std::get<double>(row[7]);
    CHECK(mean <= std::pow(0.1, s) + 1e-15);
  }
  for (const auto& row : scan.raw.rows) CHECK(std::get<std::int64_t>(row[7]) == 0);
}

TEST_CASE("fractional moment scan: chiral zero energy sits above the log-mean by Jensen") {
  FractionalMomentScanConfig c;
  c.widths = {2};
  c.blocks = {8};
  c.energies = {0.0};
  c.exponents = {0.5};
  c.samples = 200;
  c.kind = ModelKind::chiral;
  const auto scan = run_fractional_moment_scan(c);
  double mean_log = 0.0;
  for (const auto& row : scan.raw.rows) mean_log += std::get<double>(row[6]) / 200.0;
  const double moment = std::get<double>(scan.summary.rows[0][7]);
  MESSAGE("E||G||^s = " << moment << ", exp(s E log||G||) = " << std::exp(0.5 * mean_log));
  CHECK(moment >= std::exp(0.5 * mean_log));
}

TEST_CASE("fractional moment scan validation") {
  FractionalMomentScanConfig c;
  CHECK_THROWS_AS(run_fractional_moment_scan(c), ConfigError);  // no z
  c.energies = {1.0i};
  c.exponents = {1.0};
  CHECK_THROWS_AS(run_fractional_moment_scan(c), ConfigError);
  c.exponents = {0.5};
  c.blocks = {5};
  c.energies = {0.0};
  c.kind = ModelKind::chiral;
  CHECK_THROWS_AS(run_fractional_moment_scan(c), NotInvertible);
}

TEST_CASE("lyapunov table") {
  LyapunovEstimate e;
  e.W = 2;
  e.gamma = Eigen::Vector2d(-0.29, -0.98);
  e.std_error = Eigen::Vector2d(0.01, 0.02);
  const auto t = lyapunov_table(e);
  CHECK(t.columns[0] == "W");
  CHECK(t.columns[4] == "newman_value");
  CHECK(t.columns[5] == "z_score");
  REQUIRE(t.rows.size() == 2);
  CHECK(std::get<double>(t.rows[0][4]) == newman_exponent(2, 1));
  CHECK(std::get<double>(t.rows[0][5]) ==
        doctest::Approx((-0.29 - newman_exponent(2, 1)) / 0.01));
}

TEST_CASE("CSV and JSON table output") {
  Table t;
  t.columns = {"a", "b", "c"};
  t.add_row({std::int64_t(3), 0.1, std::string("x,y")});
  t.add_row({std::int64_t(-1), NAN, std::string("plain")});
  CHECK_THROWS_AS(t.add_row({std::int64_t(1)}), Error);
  std::ostringstream os;
  write_csv(t, os);
  CHECK(os.str() == "a,b,c\n3,0.10000000000000001,\"x,y\"\n-1,nan,plain\n");
  const auto j = columns_json(t);
  CHECK(j["a"][0] == 3);
  CHECK(j["b"][1].is_null());
  CHECK(j.begin().key() == "a");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}
