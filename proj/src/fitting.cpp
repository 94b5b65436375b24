#include "chiralrbm/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "chiralrbm/errors.hpp"

namespace chiralrbm {

namespace {

struct LineFit {
  double a = 0.0;  // intercept
  double b = 0.0;  // slope
  double var_a = 0.0;
  double var_b = 0.0;
  double chi2 = 0.0;
};

/// Minimizes sum w_i (y_i - a - b x_i)^2; variances from the inverse normal matrix.
LineFit weighted_line(const std::vector<double>& x, const std::vector<double>& y,
                      const std::vector<double>& w) {
  double S = 0, Sx = 0, Sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    S += w[i];
    Sx += w[i] * x[i];
    Sy += w[i] * y[i];
  }
  // Centred sums keep the normal equations well conditioned.
  const double xm = Sx / S;
  const double ym = Sy / S;
  double Stt = 0, Sty = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = x[i] - xm;
    Stt += w[i] * t * t;
    Sty += w[i] * t * (y[i] - ym);
  }
  LineFit f;
  f.b = Sty / Stt;
  f.a = ym - f.b * xm;
  f.var_b = 1.0 / Stt;
  f.var_a = 1.0 / S + xm * xm / Stt;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.a - f.b * x[i];
    f.chi2 += w[i] * r * r;
  }
  return f;
}

}  // namespace

DecayFit fit_exponential_decay(const std::vector<DecayPoint>& points) {
  if (points.size() < 3) throw ConfigError("decay fit needs at least 3 points");
  std::set<double> distinct;
  std::vector<double> x, y, w;
  for (const auto& p : points) {
    if (!std::isfinite(p.n) || !std::isfinite(p.mean_log_norm))
      throw ConfigError("decay fit points must be finite");
    if (!std::isfinite(p.std_error) || p.std_error <= 0.0)
      throw ConfigError("decay fit needs finite, positive standard errors");
    distinct.insert(p.n);
    x.push_back(p.n);
    y.push_back(p.mean_log_norm);
    w.push_back(1.0 / (p.std_error * p.std_error));
  }
  if (distinct.size() < 3) throw ConfigError("decay fit needs at least 3 distinct n");
  const LineFit f = weighted_line(x, y, w);
  DecayFit out;
  out.slope = -f.b;
  out.slope_std_error = std::sqrt(f.var_b);
  out.intercept = f.a;
  out.intercept_std_error = std::sqrt(f.var_a);
  out.chi2 = f.chi2;
  out.dof = static_cast<int>(points.size()) - 2;
  return out;
}

ScalingFit fit_power_law(const std::vector<double>& W, const std::vector<double>& mu) {
  if (W.size() != mu.size()) throw ConfigError("W and mu lists differ in length");
  std::set<double> distinct;
  std::vector<double> x, y;
  for (std::size_t i = 0; i < W.size(); ++i) {
    if (!(W[i] > 0.0)) throw ConfigError("W values must be positive");
    if (!(mu[i] > 0.0) || !std::isfinite(mu[i]))
      throw ConfigError("decay rates must be positive for a power-law fit");
    distinct.insert(W[i]);
    x.push_back(std::log(W[i]));
    y.push_back(std::log(mu[i]));
  }
  if (distinct.size() < 3) throw ConfigError("power-law fit needs at least 3 distinct W");
  const LineFit f = weighted_line(x, y, std::vector<double>(x.size(), 1.0));
  ScalingFit out;
  out.W = W;
  out.mu = mu;
  out.alpha = -f.b;
  out.prefactor = std::exp(f.a);
  out.residual_sum_of_squares = f.chi2;
  const double dof = double(x.size()) - 2.0;
  out.alpha_std_error = dof > 0 ? std::sqrt(f.chi2 / dof * f.var_b) : 0.0;
  return out;
}

}  // namespace chiralrbm
