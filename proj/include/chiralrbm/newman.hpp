#pragma once

namespace chiralrbm {

/// Euler-Mascheroni constant, 20 significant digits.
inline constexpr double kEulerGamma = 0.57721566490153286061;

/// Psi(twice_x / 2) for a positive integer twice_x, by upward recurrence
/// Psi(x + 1) = Psi(x) + 1/x from Psi(1) = -gamma or Psi(1/2) = -gamma - 2 log 2.
double digamma_half_integer(long twice_x);

/// Newman's Lyapunov exponent
///   gamma_k = log(1/sqrt(W)) + (log 2 + Psi((W - k + 1)/2)) / 2,
/// the spectrum of products of W x W matrices with iid real N(0, 1/W) entries.
double newman_exponent(int W, int k);

/// Lyapunov exponent for products of complex Ginibre matrices with E|a|^2 = 1/W:
///   gamma_k = (Psi(W - k + 1) - log W) / 2.
double complex_newman_exponent(int W, int k);

/// Large-W form -k / (2W).
double newman_asymptotic(int W, int k);

}  // namespace chiralrbm
