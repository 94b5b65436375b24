#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "chiralrbm/model.hpp"

namespace chiralrbm {

/// Blocks and factors with a 2-norm condition number above this are treated as singular.
inline constexpr double kConditionCap = 1e12;
/// Largest N = nW for which the dense solver is used.
inline constexpr int kDenseDimensionCap = 2048;

enum class BlockNorm { operator_norm, frobenius };
enum class ResolventMethod { automatic, dense, block_recursion };

double block_norm(const ComplexMatrix& m, BlockNorm norm = BlockNorm::operator_norm);
/// sigma_max / sigma_min (infinity for an exactly singular matrix).
double condition_number(const ComplexMatrix& m);

/// (M^-1)^* = (M^*)^-1. Throws SingularMatrix when cond(M) > condition_cap.
ComplexMatrix dagger_inverse(const ComplexMatrix& M, double condition_cap = kConditionCap);

/// Block (1, n) of H^-1 for a zero-diagonal operator with n even, as the O(n) product
///
///   (-1)^{n/2} T_1^-1 T_2^* T_3^-1 T_4^* ... T_{n-1}^-1.
///
/// Throws NotInvertible for odd n and SingularMatrix if an odd block is singular.
ComplexMatrix zero_energy_corner_block(const BlockTridiagonalOperator& H);

/// log of the operator norm of zero_energy_corner_block(H), accumulated with
/// rescaling so that long products neither overflow nor underflow.
double zero_energy_corner_log_norm(const BlockTridiagonalOperator& H);

struct ResolventBlock {
  int x = 0;
  int y = 0;
  std::complex<double> z;
  ComplexMatrix block;
  double norm = 0.0;
};

struct ResolventOptions {
  ResolventMethod method = ResolventMethod::automatic;
  BlockNorm norm = BlockNorm::operator_norm;
  int dense_cap = kDenseDimensionCap;
  double condition_cap = kConditionCap;
};

/// Block (x, y) (1-based) of (H - z)^-1.
ResolventBlock resolvent_block(const BlockTridiagonalOperator& H, std::complex<double> z, int x,
                               int y, const ResolventOptions& options = {});

struct FractionalMomentConfig {
  int n = 2;
  int W = 1;
  std::complex<double> z{0.0, 0.0};
  int x = 1;
  int y = 0;  ///< 0 selects the last block, n
  int samples = 100;
  ModelKind kind = ModelKind::full;
  ResolventOptions resolvent{};
};

struct FractionalMomentEstimate {
  double s = 1.0;
  double mean = 0.0;
  double std_error = 0.0;
  int samples = 0;   ///< successful samples
  int failures = 0;
  double failure_fraction = 0.0;
};

/// Per-sample log ||(H - z)^-1_{x,y}||, NaN for a sample that hit the spectrum.
/// Sample i draws its operator from rng.child(i).
std::vector<double> resolvent_log_norms(const FractionalMomentConfig& config, const RngStream& rng,
                                        int workers = 0);

/// Mean and standard error of exp(s * log_norm) over the finite entries.
/// Throws NumericalFailure when more than half the samples failed.
FractionalMomentEstimate summarize_fractional_moment(const std::vector<double>& log_norms, double s);

FractionalMomentEstimate fractional_moment_estimate(const FractionalMomentConfig& config, double s,
                                                    const RngStream& rng, int workers = 0);

/// Per-sample log ||(H^-1)_{1,n}|| for zero-diagonal models (chiral by default).
/// std::nullopt marks a sample whose odd blocks exceeded the condition cap.
std::vector<std::optional<double>> log_norm_corner(int n, int W, int samples, const RngStream& rng,
                                                   int workers = 0,
                                                   ModelKind kind = ModelKind::chiral);

}  // namespace chiralrbm
