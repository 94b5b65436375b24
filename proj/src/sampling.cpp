#include "chiralrbm/sampling.hpp"

#include <cmath>
#include <string>

#include "chiralrbm/errors.hpp"

namespace chiralrbm {

namespace {

void require_width(int W) {
  if (W < 1) throw InvalidDimension("block size W must be >= 1, got " + std::to_string(W));
}

}  // namespace

ComplexMatrix sample_ginibre(int W, RngStream& rng) {
  require_width(W);
  const double scale = std::sqrt(1.0 / (2.0 * W));
  ComplexMatrix a(W, W);
  for (int i = 0; i < W; ++i)
    for (int j = 0; j < W; ++j) a(i, j) = scale * rng.normal_pair();
  return a;
}

ComplexMatrix sample_gue(int W, RngStream& rng) {
  require_width(W);
  const double diag_scale = std::sqrt(1.0 / (2.0 * W));
  const double off_scale = std::sqrt(1.0 / (4.0 * W));
  ComplexMatrix a(W, W);
  for (int i = 0; i < W; ++i) {
    a(i, i) = diag_scale * rng.normal();
    for (int j = i + 1; j < W; ++j) {
      a(i, j) = off_scale * rng.normal_pair();
      a(j, i) = std::conj(a(i, j));
    }
  }
  return a;
}

ComplexMatrix sample_real_ginibre(int W, RngStream& rng) {
  require_width(W);
  const double scale = std::sqrt(1.0 / W);
  ComplexMatrix a(W, W);
  for (int i = 0; i < W; ++i)
    for (int j = 0; j < W; ++j) a(i, j) = scale * rng.normal();
  return a;
}

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const auto v = m.data()[i];
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

}  // namespace chiralrbm
