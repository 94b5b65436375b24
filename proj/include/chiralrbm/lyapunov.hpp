#pragma once

#include <vector>

#include <Eigen/Dense>

#include "chiralrbm/sampling.hpp"

namespace chiralrbm {

struct QrStep {
  ComplexMatrix q;             ///< orthonormal factor with R's diagonal made positive
  Eigen::VectorXd log_diag;    ///< log R_kk
};

/// Factorizes M Q = Q_next R with R_kk > 0 and returns (Q_next, log R_kk).
/// Throws SingularMatrix if min R_kk <= rank_tolerance * max R_kk.
QrStep qr_step(const ComplexMatrix& Q, const ComplexMatrix& M, double rank_tolerance = 1e-12);

enum class FactorKind {
  ginibre,  ///< one Ginibre matrix per step
  pair,     ///< T_odd° T_even per step, T° = (T^-1)^*
};

enum class GinibreField { complex, real };
enum class OddFactor { ginibre, identity };

struct FactorSpec {
  FactorKind kind = FactorKind::ginibre;
  int W = 1;
  GinibreField field = GinibreField::complex;
  OddFactor odd = OddFactor::ginibre;  ///< only for kind == pair
  double odd_scale = 1.0;              ///< T_odd = odd_scale * G; only for kind == pair
};

/// Produces the iid step factors F_1, F_2, ... of the product F_1 F_2 ... F_j.
class FactorGenerator {
 public:
  FactorGenerator(FactorSpec spec, RngStream rng);
  const FactorSpec& spec() const noexcept { return spec_; }
  ComplexMatrix next();

 private:
  ComplexMatrix draw();
  FactorSpec spec_;
  RngStream rng_;
};

struct LyapunovEstimate {
  int W = 0;
  Eigen::VectorXd gamma;      ///< descending
  Eigen::VectorXd std_error;  ///< batch-means standard errors, aligned with gamma
  long steps = 0;
  long batch_size = 0;
  int order_violations = 0;   ///< adjacent pairs out of order before the final sort
  long factor_failures = 0;
};

/// Time-average of log R_kk along one QR trajectory of the product F_1 ... F_j.
///
/// The adjoint product F_j^* ... F_1^* is accumulated from the left, which has the
/// same singular values. Standard errors come from batch means with batch size
/// round(sqrt(steps)). Factors failing the condition cap are redrawn; more than
/// 1% failures aborts with NumericalFailure.
LyapunovEstimate estimate_lyapunov(FactorGenerator& gen, long steps, long burn_in = 100);

struct ReplicatedLyapunov {
  std::vector<LyapunovEstimate> replicas;
  /// Mean of the replica exponents; error sqrt(sum se^2) / replicas.
  LyapunovEstimate pooled;
};

/// Independent trajectories, replica r driven by rng.child(r).
ReplicatedLyapunov estimate_lyapunov_replicas(const FactorSpec& spec, long steps, long burn_in,
                                              int replicas, const RngStream& rng, int workers = 0);

/// log |det M|.
double log_abs_det(const ComplexMatrix& m);

}  // namespace chiralrbm
