#include "chiralrbm/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <set>

#include "chiralrbm/errors.hpp"
#include "chiralrbm/newman.hpp"

namespace chiralrbm {

double newman_decay_rate(int W) { return -newman_exponent(W, 1) / kBlocksPerFactor; }

double complex_newman_decay_rate(int W) { return -complex_newman_exponent(W, 1) / kBlocksPerFactor; }

RngStream cell_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> coordinates) {
  std::uint64_t key = 0x243F6A8885A308D3ULL;
  for (std::uint64_t c : coordinates) key = mix64(key ^ mix64(c + 0x9E3779B97F4A7C15ULL));
  return RngStream(seed, key);
}

void validate(const DecayScanConfig& config) {
  if (config.widths.empty() || config.blocks.empty())
    throw ConfigError("decay scan needs non-empty W and n lists");
  for (int W : config.widths)
    if (W < 1) throw ConfigError("W values must be >= 1");
  for (int n : config.blocks) {
    if (n < 2) throw ConfigError("n values must be >= 2");
    if (n % 2 != 0) throw ConfigError("zero-energy chiral scans need even n, got " + std::to_string(n));
  }
  if (config.samples < 30) throw ConfigError("decay scan needs >= 30 samples per cell");
  if (config.kind == ModelKind::full) throw ConfigError("decay scan runs on zero-diagonal models");
  if (config.fit_min_blocks_per_width < 0) throw ConfigError("fit cutoff must be non-negative");
}

namespace {

DecayCell summarize_cell(int W, int n, const std::vector<std::optional<double>>& values) {
  DecayCell cell;
  cell.W = W;
  cell.n = n;
  std::vector<double> ok;
  ok.reserve(values.size());
  for (const auto& v : values)
    if (v && std::isfinite(*v)) ok.push_back(*v);
  cell.samples = static_cast<int>(ok.size());
  cell.failure_fraction = 1.0 - double(ok.size()) / double(values.size());
  if (ok.size() < 2) {
    cell.mean_log_norm = cell.std_error = cell.log_mean_norm = std::numeric_limits<double>::quiet_NaN();
    return cell;
  }
  double sum = 0.0;
  for (double v : ok) sum += v;
  cell.mean_log_norm = sum / double(ok.size());
  double sq = 0.0;
  for (double v : ok) sq += (v - cell.mean_log_norm) * (v - cell.mean_log_norm);
  cell.std_error = std::sqrt(sq / double(ok.size() - 1)) / std::sqrt(double(ok.size()));
  const double top = *std::max_element(ok.begin(), ok.end());
  double acc = 0.0;
  for (double v : ok) acc += std::exp(v - top);
  cell.log_mean_norm = top + std::log(acc / double(ok.size()));
  return cell;
}

}  // namespace

DecayScan run_decay_scan(const DecayScanConfig& config) {
  validate(config);
  DecayScan scan;
  scan.config = config;
  for (int W : config.widths)
    for (int n : config.blocks) {
      const RngStream stream = cell_stream(config.seed, {std::uint64_t(W), std::uint64_t(n)});
      const auto values = log_norm_corner(n, W, config.samples, stream, config.workers, config.kind);
      DecayCell cell = summarize_cell(W, n, values);
      if (cell.failure_fraction > 0.5)
        throw NumericalFailure("more than half of the samples failed at W=" + std::to_string(W) +
                               ", n=" + std::to_string(n));
      scan.cells.push_back(cell);
    }

  for (int W : config.widths) {
    std::vector<DecayPoint> primary, secondary;
    std::vector<DecayCell*> members;
    for (auto& c : scan.cells) {
      if (c.W != W || c.failure_fraction >= 0.01) continue;
      if (!(c.std_error > 0.0) || !std::isfinite(c.mean_log_norm)) continue;
      if (c.n < config.fit_min_blocks_per_width * W) continue;
      members.push_back(&c);
      primary.push_back({double(c.n), c.mean_log_norm, c.std_error});
      secondary.push_back({double(c.n), c.log_mean_norm, 1.0});
    }
    std::set<double> distinct;
    for (const auto& p : primary) distinct.insert(p.n);
    if (distinct.size() < 3) continue;
    for (auto* c : members) c->used_in_fit = true;
    DecayWidthFit f;
    f.W = W;
    f.cells_used = static_cast<int>(primary.size());
    f.fit = fit_exponential_decay(primary);
    f.log_mean_mu = fit_exponential_decay(secondary).slope;
    scan.fits.push_back(f);
  }

  std::vector<double> Ws, mus;
  for (const auto& f : scan.fits)
    if (f.mu_hat() > 0.0) {
      Ws.push_back(f.W);
      mus.push_back(f.mu_hat());
    }
  if (std::set<double>(Ws.begin(), Ws.end()).size() >= 3) scan.scaling = fit_power_law(Ws, mus);
  return scan;
}

Table decay_cells_table(const DecayScan& scan) {
  Table t;
  t.columns = {"W", "n", "samples", "mean_log_norm", "std_error", "log_mean_norm",
               "failure_fraction", "used_in_fit"};
  for (const auto& c : scan.cells)
    t.add_row({std::int64_t(c.W), std::int64_t(c.n), std::int64_t(c.samples), c.mean_log_norm,
               c.std_error, c.log_mean_norm, c.failure_fraction, std::int64_t(c.used_in_fit)});
  return t;
}

Table decay_fits_table(const DecayScan& scan) {
  Table t;
  t.columns = {"W",           "cells",        "mu_hat",       "mu_std_error",
               "mu_half_width", "reduced_chi2", "intercept",  "log_mean_mu",
               "newman_mu",   "complex_newman_mu"};
  for (const auto& f : scan.fits)
    t.add_row({std::int64_t(f.W), std::int64_t(f.cells_used), f.mu_hat(), f.mu_std_error(),
               f.mu_half_width(), f.fit.reduced_chi2(), f.fit.intercept,
               f.log_mean_mu.value_or(std::numeric_limits<double>::quiet_NaN()),
               newman_decay_rate(f.W), complex_newman_decay_rate(f.W)});
  return t;
}

Table scaling_fit_table(const ScalingFit& fit) {
  Table t;
  t.columns = {"points", "alpha", "alpha_std_error", "prefactor", "residual_sum_of_squares"};
  t.add_row({std::int64_t(fit.W.size()), fit.alpha, fit.alpha_std_error, fit.prefactor,
             fit.residual_sum_of_squares});
  return t;
}

void validate(const FractionalMomentScanConfig& config) {
  if (config.energies.empty()) throw ConfigError("fractional moment scan needs at least one z");
  if (config.exponents.empty()) throw ConfigError("fractional moment scan needs at least one s");
  for (double s : config.exponents)
    if (!(s > 0.0 && s < 1.0)) throw ConfigError("fractional exponents must lie in (0, 1)");
  if (config.widths.empty() || config.blocks.empty())
    throw ConfigError("fractional moment scan needs non-empty W and n lists");
  if (config.positions.empty()) throw ConfigError("fractional moment scan needs block positions");
  if (config.samples < 2) throw ConfigError("fractional moment scan needs >= 2 samples");
}

FractionalMomentScan run_fractional_moment_scan(const FractionalMomentScanConfig& config) {
  validate(config);
  FractionalMomentScan out;
  out.summary.columns = {"W", "n", "z_re", "z_im", "x", "y", "s", "mean", "std_error",
                         "samples", "failures", "failure_fraction"};
  out.raw.columns = {"sample_index", "n", "W", "z_re", "z_im", "s", "log_norm", "failed"};

  for (int W : config.widths)
    for (int n : config.blocks)
      for (const auto& z : config.energies)
        for (const auto& [x, y_in] : config.positions) {
          FractionalMomentConfig cell;
          cell.n = n;
          cell.W = W;
          cell.z = z;
          cell.x = x;
          cell.y = y_in;
          cell.samples = config.samples;
          cell.kind = config.kind;
          cell.resolvent = config.resolvent;
          const int y = y_in == 0 ? n : y_in;
          const RngStream stream =
              cell_stream(config.seed, {std::uint64_t(W), std::uint64_t(n),
                                        std::bit_cast<std::uint64_t>(z.real()),
                                        std::bit_cast<std::uint64_t>(z.imag()), std::uint64_t(x),
                                        std::uint64_t(y)});
          const auto log_norms = resolvent_log_norms(cell, stream, config.workers);
          for (double s : config.exponents) {
            const auto est = summarize_fractional_moment(log_norms, s);
            out.summary.add_row({std::int64_t(W), std::int64_t(n), z.real(), z.imag(),
                                 std::int64_t(x), std::int64_t(y), s, est.mean, est.std_error,
                                 std::int64_t(est.samples), std::int64_t(est.failures),
                                 est.failure_fraction});
            for (std::size_t i = 0; i < log_norms.size(); ++i)
              out.raw.add_row({std::int64_t(i), std::int64_t(n), std::int64_t(W), z.real(),
                               z.imag(), s, log_norms[i],
                               std::int64_t(std::isnan(log_norms[i]) ? 1 : 0)});
          }
        }
  return out;
}

Table lyapunov_table(const LyapunovEstimate& estimate) {
  Table t;
  t.columns = {"W",        "k",          "gamma_hat",           "std_error",
               "newman_value", "z_score", "complex_newman_value", "complex_z_score"};
  for (int k = 1; k <= estimate.W; ++k) {
    const double g = estimate.gamma(k - 1);
    const double se = estimate.std_error(k - 1);
    const double real_value = newman_exponent(estimate.W, k);
    const double complex_value = complex_newman_exponent(estimate.W, k);
    t.add_row({std::int64_t(estimate.W), std::int64_t(k), g, se, real_value,
               (g - real_value) / se, complex_value, (g - complex_value) / se});
  }
  return t;
}

}  // namespace chiralrbm
