#include "chiralrbm/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "chiralrbm/errors.hpp"
#include "chiralrbm/parallel.hpp"
#include "chiralrbm/resolvent.hpp"

namespace chiralrbm {

QrStep qr_step(const ComplexMatrix& Q, const ComplexMatrix& M, double rank_tolerance) {
  if (M.rows() != M.cols() || Q.rows() != M.cols())
    throw InvalidDimension("qr_step needs a square factor compatible with Q");
  const Eigen::HouseholderQR<ComplexMatrix> qr(M * Q);
  const auto& packed = qr.matrixQR();
  const Eigen::Index W = packed.cols();

  Eigen::VectorXd magnitude(W);
  for (Eigen::Index k = 0; k < W; ++k) magnitude(k) = std::abs(packed(k, k));
  const double largest = magnitude.maxCoeff();
  const double smallest = magnitude.minCoeff();
  if (!(smallest > rank_tolerance * largest))
    throw SingularMatrix("rank-deficient factor in QR step",
                         smallest > 0.0 ? largest / smallest : std::numeric_limits<double>::infinity());

  QrStep out;
  out.q = qr.householderQ() * ComplexMatrix::Identity(packed.rows(), W);
  out.log_diag.resize(W);
  for (Eigen::Index k = 0; k < W; ++k) {
    // Rotate the phase of R_kk into column k of Q so that R_kk > 0.
    out.q.col(k) *= packed(k, k) / magnitude(k);
    out.log_diag(k) = std::log(magnitude(k));
  }
  return out;
}

FactorGenerator::FactorGenerator(FactorSpec spec, RngStream rng) : spec_(spec), rng_(rng) {
  if (spec_.W < 1) throw InvalidDimension("W must be >= 1");
  if (!(spec_.odd_scale > 0.0)) throw ConfigError("odd factor scale must be positive");
}

ComplexMatrix FactorGenerator::draw() {
  return spec_.field == GinibreField::complex ? sample_ginibre(spec_.W, rng_)
                                              : sample_real_ginibre(spec_.W, rng_);
}

ComplexMatrix FactorGenerator::next() {
  if (spec_.kind == FactorKind::ginibre) return draw();
  ComplexMatrix odd = spec_.odd == OddFactor::identity
                          ? ComplexMatrix::Identity(spec_.W, spec_.W).eval()
                          : draw();
  odd *= spec_.odd_scale;
  const ComplexMatrix even = draw();
  return dagger_inverse(odd) * even;
}

LyapunovEstimate estimate_lyapunov(FactorGenerator& gen, long steps, long burn_in) {
  if (steps < 100) throw ConfigError("Lyapunov estimation needs >= 100 steps");
  if (burn_in < 0) throw ConfigError("burn-in must be non-negative");
  const int W = gen.spec().W;
  const long max_failures = (steps + burn_in) / 100;

  LyapunovEstimate est;
  est.W = W;
  est.steps = steps;
  est.batch_size = std::max<long>(1, std::lround(std::sqrt(double(steps))));
  const long batches = steps / est.batch_size;

  ComplexMatrix Q = ComplexMatrix::Identity(W, W);
  auto advance = [&]() -> Eigen::VectorXd {
    for (;;) {
      try {
        QrStep step = qr_step(Q, gen.next().adjoint());
        Q = std::move(step.q);
        return step.log_diag;
      } catch (const SingularMatrix&) {
        if (++est.factor_failures > max_failures)
          throw NumericalFailure("more than 1% of factors failed the condition cap");
      }
    }
  };

  for (long i = 0; i < burn_in; ++i) advance();

  Eigen::VectorXd total = Eigen::VectorXd::Zero(W);
  Eigen::VectorXd batch = Eigen::VectorXd::Zero(W);
  std::vector<Eigen::VectorXd> batch_means;
  batch_means.reserve(static_cast<std::size_t>(batches));
  for (long i = 0; i < steps; ++i) {
    const Eigen::VectorXd d = advance();
    total += d;
    batch += d;
    if ((i + 1) % est.batch_size == 0 && static_cast<long>(batch_means.size()) < batches) {
      batch_means.push_back(batch / double(est.batch_size));
      batch.setZero();
    }
  }

  Eigen::VectorXd gamma = total / double(steps);
  Eigen::VectorXd se(W);
  for (int k = 0; k < W; ++k) {
    double mean = 0.0;
    for (const auto& b : batch_means) mean += b(k);
    mean /= double(batches);
    double sq = 0.0;
    for (const auto& b : batch_means) sq += (b(k) - mean) * (b(k) - mean);
    se(k) = std::sqrt(sq / double(batches - 1)) / std::sqrt(double(batches));
  }

  for (int k = 0; k + 1 < W; ++k)
    if (gamma(k) < gamma(k + 1)) ++est.order_violations;
  std::vector<int> order(W);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return gamma(a) > gamma(b); });
  est.gamma.resize(W);
  est.std_error.resize(W);
  for (int k = 0; k < W; ++k) {
    est.gamma(k) = gamma(order[k]);
    est.std_error(k) = se(order[k]);
  }
  return est;
}

ReplicatedLyapunov estimate_lyapunov_replicas(const FactorSpec& spec, long steps, long burn_in,
                                              int replicas, const RngStream& rng, int workers) {
  if (replicas < 1) throw ConfigError("need at least one replica");
  ReplicatedLyapunov out;
  out.replicas.resize(static_cast<std::size_t>(replicas));
  parallel_for(out.replicas.size(), workers, [&](std::size_t r) {
    FactorGenerator gen(spec, rng.child(r));
    out.replicas[r] = estimate_lyapunov(gen, steps, burn_in);
  });

  LyapunovEstimate& pooled = out.pooled;
  pooled.W = spec.W;
  pooled.gamma = Eigen::VectorXd::Zero(spec.W);
  Eigen::VectorXd var = Eigen::VectorXd::Zero(spec.W);
  for (const auto& e : out.replicas) {
    pooled.gamma += e.gamma;
    var += e.std_error.cwiseAbs2();
    pooled.steps += e.steps;
    pooled.order_violations += e.order_violations;
    pooled.factor_failures += e.factor_failures;
    pooled.batch_size = e.batch_size;
  }
  pooled.gamma /= double(replicas);
  pooled.std_error = var.cwiseSqrt() / double(replicas);
  return out;
}

double log_abs_det(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw InvalidDimension("determinant needs a square matrix");
  const Eigen::PartialPivLU<ComplexMatrix> lu(m);
  double sum = 0.0;
  for (Eigen::Index k = 0; k < m.rows(); ++k) sum += std::log(std::abs(lu.matrixLU()(k, k)));
  return sum;
}

}  // namespace chiralrbm
