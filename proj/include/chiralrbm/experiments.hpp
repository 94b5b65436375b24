#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "chiralrbm/fitting.hpp"
#include "chiralrbm/lyapunov.hpp"
#include "chiralrbm/model.hpp"
#include "chiralrbm/resolvent.hpp"
#include "chiralrbm/table.hpp"

namespace chiralrbm {

/// Lyapunov exponents count factors T_odd° T_even, i.e. pairs of blocks; decay
/// along the chain is measured per block. Every conversion goes through this.
inline constexpr double kBlocksPerFactor = 2.0;

/// Per-block rate -gamma_1 / 2 from the Newman formula.
double newman_decay_rate(int W);
/// Per-block rate -gamma_1 / 2 for complex Ginibre factors (the model's ensemble).
double complex_newman_decay_rate(int W);

/// Stream for one grid cell; depends only on the seed and the cell coordinates,
/// not on which other cells are in the grid.
RngStream cell_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> coordinates);

struct DecayScanConfig {
  std::vector<int> widths{1, 2, 4};
  std::vector<int> blocks{8, 16, 32, 48, 64, 96, 128};
  int samples = 200;
  std::uint64_t seed = 0;
  int workers = 0;
  ModelKind kind = ModelKind::chiral;
  /// Cells with n < fit_min_blocks_per_width * W stay out of the fit. E log sigma_1 of
  /// the corner product approaches its linear asymptote only after O(W) factors.
  int fit_min_blocks_per_width = 8;
};

void validate(const DecayScanConfig& config);

struct DecayCell {
  int W = 0;
  int n = 0;
  int samples = 0;             ///< successful samples
  double mean_log_norm = 0.0;  ///< E log ||(H^-1)_{1,n}||, the primary statistic
  double std_error = 0.0;
  double log_mean_norm = 0.0;  ///< log E ||(H^-1)_{1,n}||, >= mean_log_norm by Jensen
  double failure_fraction = 0.0;
  bool used_in_fit = false;
};

struct DecayWidthFit {
  int W = 0;
  int cells_used = 0;
  DecayFit fit;                ///< on mean_log_norm; fit.slope is mu_hat
  double mu_hat() const { return fit.slope; }
  double mu_std_error() const { return fit.slope_std_error; }
  double mu_half_width() const { return 3.0 * fit.slope_std_error; }
  std::optional<double> log_mean_mu;  ///< slope of the log E ||.|| column, unweighted errors
};

struct DecayScan {
  DecayScanConfig config;
  std::vector<DecayCell> cells;
  std::vector<DecayWidthFit> fits;       ///< one per W with >= 3 usable cells
  std::optional<ScalingFit> scaling;     ///< over fitted W with mu_hat > 0, if >= 3
};

/// Cells with failure fraction >= 1%, zero spread (n = 2) or n below the transient
/// cutoff are left out of the fits.
DecayScan run_decay_scan(const DecayScanConfig& config);

Table decay_cells_table(const DecayScan& scan);
Table decay_fits_table(const DecayScan& scan);
Table scaling_fit_table(const ScalingFit& fit);

struct FractionalMomentScanConfig {
  std::vector<int> widths{2};
  std::vector<int> blocks{8};
  std::vector<std::complex<double>> energies;
  std::vector<double> exponents{0.5};
  std::vector<std::pair<int, int>> positions{{1, 0}};  ///< y = 0 selects block n
  int samples = 100;
  ModelKind kind = ModelKind::full;
  ResolventOptions resolvent{};
  std::uint64_t seed = 0;
  int workers = 0;
};

void validate(const FractionalMomentScanConfig& config);

struct FractionalMomentScan {
  /// W, n, z_re, z_im, x, y, s, mean, std_error, samples, failures, failure_fraction
  Table summary;
  /// sample_index, n, W, z_re, z_im, s, log_norm, failed
  Table raw;
};

FractionalMomentScan run_fractional_moment_scan(const FractionalMomentScanConfig& config);

/// W, k, gamma_hat, std_error, newman_value, z_score, complex_newman_value, complex_z_score
Table lyapunov_table(const LyapunovEstimate& estimate);

}  // namespace chiralrbm
