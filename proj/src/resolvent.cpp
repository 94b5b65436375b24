#include "chiralrbm/resolvent.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "chiralrbm/errors.hpp"
#include "chiralrbm/parallel.hpp"

namespace chiralrbm {

namespace {

/// Reciprocal-condition-checked inverse used for Schur pivots and dense solves.
template <class Error>
Eigen::PartialPivLU<ComplexMatrix> checked_lu(const ComplexMatrix& m, double condition_cap,
                                              const char* what) {
  Eigen::PartialPivLU<ComplexMatrix> lu(m);
  const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
  double rcond = pivots.minCoeff() == 0.0 ? 0.0 : lu.rcond();
  if (!std::isfinite(rcond)) rcond = 0.0;
  if (rcond * condition_cap < 1.0) {
    const double cond = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    throw Error(what, cond);
  }
  return lu;
}

ComplexMatrix checked_inverse(const ComplexMatrix& m, double condition_cap) {
  const double cond = condition_number(m);
  if (!(cond <= condition_cap)) throw SingularMatrix("odd hopping block is singular", cond);
  return m.partialPivLu().inverse();
}

void require_zero_energy_form(const BlockTridiagonalOperator& H) {
  if (H.blocks() % 2 != 0)
    throw NotInvertible("a zero-diagonal operator with an odd number of blocks is singular");
  if (!H.has_zero_diagonal())
    throw ConfigError("zero-energy corner formula needs every diagonal block to vanish");
}

ComplexMatrix dense_block(const BlockTridiagonalOperator& H, std::complex<double> z, int x, int y,
                          double condition_cap) {
  const int W = H.width();
  const int N = H.dimension();
  ComplexMatrix a = to_dense(H);
  a.diagonal().array() -= z;
  const auto lu = checked_lu<NearSpectrum>(a, condition_cap, "H - z is numerically singular");
  ComplexMatrix rhs = ComplexMatrix::Zero(N, W);
  rhs.block((y - 1) * W, 0, W, W).setIdentity();
  const ComplexMatrix column = lu.solve(rhs);
  return column.block((x - 1) * W, 0, W, W);
}

/// Block LU recursion on the tridiagonal block structure.
///
/// With D_j = V_j - z, lower blocks L_j = -T_j at (j+1, j) and upper blocks
/// U_j = -T_j^* at (j, j+1):
///   left pivots   gL_1 = D_1^-1,  gL_j = (D_j - L_{j-1} gL_{j-1} U_{j-1})^-1
///   right pivots  gR_n = D_n^-1,  gR_j = (D_j - U_j gR_{j+1} L_j)^-1
///   G_yy = (D_y - L_{y-1} gL_{y-1} U_{y-1} - U_y gR_{y+1} L_y)^-1
///   G_xy = -gL_x U_x G_{x+1,y}  (x < y),   G_xy = -gR_x L_{x-1} G_{x-1,y}  (x > y).
ComplexMatrix recursive_block(const BlockTridiagonalOperator& H, std::complex<double> z, int x,
                              int y, double condition_cap) {
  const int n = H.blocks();
  const int W = H.width();
  const ComplexMatrix shift = z * ComplexMatrix::Identity(W, W);
  auto D = [&](int j) -> ComplexMatrix { return H.V(j) - shift; };
  auto L = [&](int j) -> ComplexMatrix { return -H.T(j); };
  auto U = [&](int j) -> ComplexMatrix { return -H.T(j).adjoint(); };
  auto invert = [&](const ComplexMatrix& m) {
    return checked_lu<NearSpectrum>(m, condition_cap, "singular Schur pivot in block recursion")
        .inverse();
  };

  // G_yy needs gL_1..gL_{y-1} and gR_{y+1}..gR_n; the walks towards x reuse them.
  std::vector<ComplexMatrix> gL(n + 2), gR(n + 2);
  for (int j = 1; j <= y - 1; ++j) {
    ComplexMatrix pivot = D(j);
    if (j > 1) pivot -= L(j - 1) * gL[j - 1] * U(j - 1);
    gL[j] = invert(pivot);
  }
  for (int j = n; j >= y + 1; --j) {
    ComplexMatrix pivot = D(j);
    if (j < n) pivot -= U(j) * gR[j + 1] * L(j);
    gR[j] = invert(pivot);
  }

  ComplexMatrix center = D(y);
  if (y > 1) center -= L(y - 1) * gL[y - 1] * U(y - 1);
  if (y < n) center -= U(y) * gR[y + 1] * L(y);
  ComplexMatrix g = invert(center);
  if (x < y) {
    for (int r = y - 1; r >= x; --r) g = -gL[r] * U(r) * g;
  } else if (x > y) {
    for (int r = y + 1; r <= x; ++r) g = -gR[r] * L(r - 1) * g;
  }
  return g;
}

}  // namespace

double block_norm(const ComplexMatrix& m, BlockNorm norm) {
  if (m.size() == 0) return 0.0;
  if (norm == BlockNorm::frobenius) return m.norm();
  if (m.rows() == 1 && m.cols() == 1) return std::abs(m(0, 0));
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

double condition_number(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.size() == 0)
    throw InvalidDimension("condition number needs a non-empty square matrix");
  if (m.rows() == 1) {
    return std::abs(m(0, 0)) == 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  return smin == 0.0 ? std::numeric_limits<double>::infinity() : sv(0) / smin;
}

ComplexMatrix dagger_inverse(const ComplexMatrix& M, double condition_cap) {
  if (M.rows() != M.cols()) throw InvalidDimension("dagger_inverse needs a square matrix");
  const double cond = condition_number(M);
  if (!(cond <= condition_cap)) throw SingularMatrix("matrix is not numerically invertible", cond);
  return M.partialPivLu().inverse().adjoint();
}

ComplexMatrix zero_energy_corner_block(const BlockTridiagonalOperator& H) {
  require_zero_energy_form(H);
  const int n = H.blocks();
  const int W = H.width();
  ComplexMatrix product = ComplexMatrix::Identity(W, W);
  for (int j = 1; j <= n - 1; ++j) {
    const ComplexMatrix& t = H.T(j);
    if (j % 2 == 1) {
      if (!t.isIdentity(0.0)) product = product * checked_inverse(t, kConditionCap);
    } else {
      product = product * t.adjoint();
    }
  }
  if ((n / 2) % 2 == 1) product = -product;
  return product;
}

double zero_energy_corner_log_norm(const BlockTridiagonalOperator& H) {
  require_zero_energy_form(H);
  const int n = H.blocks();
  const int W = H.width();
  ComplexMatrix product = ComplexMatrix::Identity(W, W);
  double log_scale = 0.0;
  for (int j = 1; j <= n - 1; ++j) {
    const ComplexMatrix& t = H.T(j);
    if (j % 2 == 1) {
      if (t.isIdentity(0.0)) continue;
      product = product * checked_inverse(t, kConditionCap);
    } else {
      product = product * t.adjoint();
    }
    const double scale = product.cwiseAbs().maxCoeff();
    if (scale > 0.0 && std::isfinite(scale)) {
      product /= scale;
      log_scale += std::log(scale);
    }
  }
  return std::log(block_norm(product)) + log_scale;
}

ResolventBlock resolvent_block(const BlockTridiagonalOperator& H, std::complex<double> z, int x,
                               int y, const ResolventOptions& options) {
  const int n = H.blocks();
  if (x < 1 || x > n || y < 1 || y > n)
    throw IndexOutOfRange("block indices must lie in 1.." + std::to_string(n));

  ResolventBlock out;
  out.x = x;
  out.y = y;
  out.z = z;
  switch (options.method) {
    case ResolventMethod::dense:
      out.block = dense_block(H, z, x, y, options.condition_cap);
      break;
    case ResolventMethod::block_recursion:
      out.block = recursive_block(H, z, x, y, options.condition_cap);
      break;
    case ResolventMethod::automatic:
      if (H.dimension() <= options.dense_cap) {
        out.block = dense_block(H, z, x, y, options.condition_cap);
      } else if (z == std::complex<double>{} && H.has_zero_diagonal() && x == 1 && y == n) {
        out.block = zero_energy_corner_block(H);
      } else {
        out.block = recursive_block(H, z, x, y, options.condition_cap);
      }
      break;
  }
  if (!all_finite(out.block))
    throw NearSpectrum("resolvent block is not finite", std::numeric_limits<double>::infinity());
  out.norm = block_norm(out.block, options.norm);
  return out;
}

std::vector<double> resolvent_log_norms(const FractionalMomentConfig& config, const RngStream& rng,
                                        int workers) {
  const int n = config.n;
  if (n < 2 || config.W < 1) throw InvalidDimension("need n >= 2 and W >= 1");
  if (config.samples < 2) throw ConfigError("fractional moment estimate needs >= 2 samples");
  const int x = config.x;
  const int y = config.y == 0 ? n : config.y;
  if (x < 1 || x > n || y < 1 || y > n)
    throw IndexOutOfRange("block indices must lie in 1.." + std::to_string(n));
  if (config.kind != ModelKind::full && n % 2 == 1 && config.z == std::complex<double>{})
    throw NotInvertible("a zero-diagonal operator with an odd number of blocks is singular at z = 0");

  std::vector<double> out(static_cast<std::size_t>(config.samples));
  parallel_for(out.size(), workers, [&](std::size_t i) {
    RngStream stream = rng.child(i);
    const auto H = build_model(config.kind, n, config.W, stream);
    try {
      out[i] = std::log(resolvent_block(H, config.z, x, y, config.resolvent).norm);
    } catch (const NearSpectrum&) {
      out[i] = std::numeric_limits<double>::quiet_NaN();
    } catch (const SingularMatrix&) {
      out[i] = std::numeric_limits<double>::quiet_NaN();
    }
  });
  return out;
}

FractionalMomentEstimate summarize_fractional_moment(const std::vector<double>& log_norms, double s) {
  if (!(s > 0.0 && s <= 1.0)) throw ConfigError("fractional exponent s must lie in (0, 1]");
  FractionalMomentEstimate est;
  est.s = s;
  double sum = 0.0;
  for (double v : log_norms) {
    if (std::isnan(v)) {
      ++est.failures;
      continue;
    }
    sum += std::exp(s * v);
    ++est.samples;
  }
  const auto total = static_cast<double>(log_norms.size());
  est.failure_fraction = total > 0 ? est.failures / total : 0.0;
  if (est.failure_fraction > 0.5)
    throw NumericalFailure("more than half of the samples hit the spectrum");
  if (est.samples < 2) throw NumericalFailure("fewer than two successful samples");
  est.mean = sum / est.samples;
  double sq = 0.0;
  for (double v : log_norms) {
    if (std::isnan(v)) continue;
    const double d = std::exp(s * v) - est.mean;
    sq += d * d;
  }
  est.std_error = std::sqrt(sq / (est.samples - 1)) / std::sqrt(double(est.samples));
  return est;
}

FractionalMomentEstimate fractional_moment_estimate(const FractionalMomentConfig& config, double s,
                                                    const RngStream& rng, int workers) {
  if (!(s > 0.0 && s <= 1.0)) throw ConfigError("fractional exponent s must lie in (0, 1]");
  return summarize_fractional_moment(resolvent_log_norms(config, rng, workers), s);
}

std::vector<std::optional<double>> log_norm_corner(int n, int W, int samples, const RngStream& rng,
                                                   int workers, ModelKind kind) {
  if (n < 2 || W < 1) throw InvalidDimension("need n >= 2 and W >= 1");
  if (n % 2 == 1) throw NotInvertible("the corner block exists only for even n");
  if (kind == ModelKind::full) throw ConfigError("the corner formula applies to zero-diagonal models");
  if (samples < 1) throw ConfigError("need at least one sample");
  std::vector<std::optional<double>> out(static_cast<std::size_t>(samples));
  parallel_for(out.size(), workers, [&](std::size_t i) {
    RngStream stream = rng.child(i);
    const auto H = build_model(kind, n, W, stream);
    try {
      out[i] = zero_energy_corner_log_norm(H);
    } catch (const SingularMatrix&) {
      out[i] = std::nullopt;
    }
  });
  return out;
}

}  // namespace chiralrbm
