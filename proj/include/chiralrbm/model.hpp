#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "chiralrbm/sampling.hpp"

namespace chiralrbm {

enum class ModelKind { full, chiral, general_chiral };

ModelKind parse_model_kind(std::string_view name);
std::string to_string(ModelKind kind);

/// Block-tridiagonal Hermitian operator
///
///   [ V_1   -T_1^*                 ]
///   [ -T_1   V_2   -T_2^*          ]
///   [        -T_2   V_3    ...     ]
///   [                ...  -T_{n-1}  V_n ]
///
/// Only the blocks are stored. Blocks are indexed from 0 in code; block
/// position x in the operator corresponds to V[x-1].
class BlockTridiagonalOperator {
 public:
  BlockTridiagonalOperator(int n, int W, std::vector<ComplexMatrix> diagonal,
                           std::vector<ComplexMatrix> hopping);

  int blocks() const noexcept { return n_; }
  int width() const noexcept { return W_; }
  int dimension() const noexcept { return n_ * W_; }

  const std::vector<ComplexMatrix>& diagonal() const noexcept { return V_; }
  const std::vector<ComplexMatrix>& hopping() const noexcept { return T_; }
  const ComplexMatrix& V(int x) const { return V_.at(x - 1); }  ///< 1-based
  const ComplexMatrix& T(int j) const { return T_.at(j - 1); }  ///< 1-based

  /// True when every diagonal block is exactly zero.
  bool has_zero_diagonal() const;

 private:
  int n_;
  int W_;
  std::vector<ComplexMatrix> V_;
  std::vector<ComplexMatrix> T_;
};

/// V_j ~ GUE(W), T_j ~ Ginibre(W), all independent.
BlockTridiagonalOperator build_full_model(int n, int W, RngStream& rng);
/// V_j = 0, T_j = 1 for odd j, T_j ~ Ginibre(W) for even j.
BlockTridiagonalOperator build_chiral_model(int n, int W, RngStream& rng);
/// V_j = 0, every T_j ~ Ginibre(W).
BlockTridiagonalOperator build_general_chiral_model(int n, int W, RngStream& rng);
BlockTridiagonalOperator build_model(ModelKind kind, int n, int W, RngStream& rng);

ComplexMatrix to_dense(const BlockTridiagonalOperator& H);

/// Chiral grading Pi = (-1)^X (x) 1_W, with Pi_xx = (-1)^x for x = 1..n.
class ChiralOperator {
 public:
  ChiralOperator(int n, int W);
  int blocks() const noexcept { return n_; }
  int width() const noexcept { return W_; }
  /// Sign of block x (1-based).
  int sign(int x) const { return (x % 2 == 0) ? 1 : -1; }
  ComplexMatrix to_dense() const;

 private:
  int n_;
  int W_;
};

/// Frobenius norm of H Pi + Pi H. Zero iff every V_j vanishes; otherwise 2 ||diag(V)||_F.
double anticommutator_norm(const BlockTridiagonalOperator& H);

/// JSON container: {"format", "version", "n", "W", "V": [...], "T": [...]} where each
/// block is a flat row-major list [re00, im00, re01, im01, ...].
nlohmann::json to_json(const BlockTridiagonalOperator& H);
BlockTridiagonalOperator operator_from_json(const nlohmann::json& j);

}  // namespace chiralrbm
