#pragma once

#include <vector>

namespace chiralrbm {

struct DecayPoint {
  double n = 0.0;
  double mean_log_norm = 0.0;
  double std_error = 0.0;
};

/// Weighted least squares of mean_log_norm = intercept - slope * n with weights 1/se^2.
struct DecayFit {
  double slope = 0.0;
  double slope_std_error = 0.0;
  double intercept = 0.0;
  double intercept_std_error = 0.0;
  double chi2 = 0.0;
  int dof = 0;
  double reduced_chi2() const { return dof > 0 ? chi2 / dof : 0.0; }
};

/// Needs >= 3 points with >= 3 distinct n and finite, positive standard errors.
DecayFit fit_exponential_decay(const std::vector<DecayPoint>& points);

/// Ordinary least squares of log mu = log prefactor - alpha log W.
struct ScalingFit {
  std::vector<double> W;
  std::vector<double> mu;
  double alpha = 0.0;
  double alpha_std_error = 0.0;
  double prefactor = 0.0;
  double residual_sum_of_squares = 0.0;
};

/// Needs >= 3 distinct positive W and positive mu.
ScalingFit fit_power_law(const std::vector<double>& W, const std::vector<double>& mu);

}  // namespace chiralrbm
