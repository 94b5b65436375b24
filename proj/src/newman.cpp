#include "chiralrbm/newman.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "chiralrbm/errors.hpp"

namespace chiralrbm {

namespace {

void require_index(int W, int k) {
  if (W < 1) throw InvalidDimension("W must be >= 1");
  if (k < 1 || k > W)
    throw IndexOutOfRange("exponent index k=" + std::to_string(k) + " outside 1.." +
                          std::to_string(W));
}

}  // namespace

double digamma_half_integer(long twice_x) {
  if (twice_x <= 0) throw Error("digamma has a pole at non-positive integers");
  const bool half = twice_x % 2 == 1;
  const long double base = half ? -static_cast<long double>(kEulerGamma) - 2.0L * std::numbers::ln2_v<long double>
                                : -static_cast<long double>(kEulerGamma);
  // Psi(x) = base + sum_{i=0}^{steps-1} 1/(x0 + i); summed smallest-first.
  const long double x0 = half ? 0.5L : 1.0L;
  const long steps = half ? (twice_x - 1) / 2 : twice_x / 2 - 1;
  long double sum = 0.0L;
  for (long i = steps - 1; i >= 0; --i) sum += 1.0L / (x0 + static_cast<long double>(i));
  return static_cast<double>(base + sum);
}

double newman_exponent(int W, int k) {
  require_index(W, k);
  return -0.5 * std::log(double(W)) + 0.5 * (std::numbers::ln2 + digamma_half_integer(W - k + 1));
}

double complex_newman_exponent(int W, int k) {
  require_index(W, k);
  return 0.5 * (digamma_half_integer(2L * (W - k + 1)) - std::log(double(W)));
}

double newman_asymptotic(int W, int k) {
  require_index(W, k);
  return -double(k) / (2.0 * W);
}

}  // namespace chiralrbm
