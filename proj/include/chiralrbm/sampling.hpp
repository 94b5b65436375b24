#pragma once

#include <Eigen/Dense>

#include "chiralrbm/rng.hpp"

namespace chiralrbm {

/// Dense complex matrix; the block type used throughout.
using ComplexMatrix = Eigen::MatrixXcd;

/// Ginibre(W): iid complex entries x + iy, x and y ~ N(0, 1/(2W)), so E|a|^2 = 1/W.
/// This is the density exp(-W ||A||_HS^2) over all W^2 complex entries.
ComplexMatrix sample_ginibre(int W, RngStream& rng);

/// GUE(W) with density exp(-W tr A^2): real diagonal of variance 1/(2W),
/// off-diagonal entries with E|a_ij|^2 = 1/(2W). Exactly Hermitian.
ComplexMatrix sample_gue(int W, RngStream& rng);

/// Real Gaussian matrix with iid N(0, 1/W) entries (stored as complex).
/// Newman's original setting for the Lyapunov spectrum of Gaussian products.
ComplexMatrix sample_real_ginibre(int W, RngStream& rng);

bool all_finite(const ComplexMatrix& m);

}  // namespace chiralrbm
