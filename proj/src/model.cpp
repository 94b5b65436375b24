#include "chiralrbm/model.hpp"

#include <nlohmann/json.hpp>

#include "chiralrbm/errors.hpp"

namespace chiralrbm {

namespace {

constexpr const char* kFormatName = "chiralrbm.block_tridiagonal";
constexpr int kFormatVersion = 1;

void require_blocks(int n, int W) {
  if (n < 2) throw InvalidDimension("block count n must be >= 2, got " + std::to_string(n));
  if (W < 1) throw InvalidDimension("block size W must be >= 1, got " + std::to_string(W));
}

nlohmann::json block_to_json(const ComplexMatrix& m) {
  auto flat = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      flat.push_back(m(i, j).real());
      flat.push_back(m(i, j).imag());
    }
  return flat;
}

ComplexMatrix block_from_json(const nlohmann::json& flat, int W) {
  if (!flat.is_array() || flat.size() != static_cast<std::size_t>(2 * W * W))
    throw ConfigError("serialized block has wrong length");
  ComplexMatrix m(W, W);
  std::size_t k = 0;
  for (int i = 0; i < W; ++i)
    for (int j = 0; j < W; ++j, k += 2)
      m(i, j) = {flat[k].get<double>(), flat[k + 1].get<double>()};
  return m;
}

}  // namespace

ModelKind parse_model_kind(std::string_view name) {
  if (name == "full") return ModelKind::full;
  if (name == "chiral") return ModelKind::chiral;
  if (name == "general-chiral" || name == "general_chiral") return ModelKind::general_chiral;
  throw ConfigError("unknown model kind '" + std::string(name) + "'");
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::full: return "full";
    case ModelKind::chiral: return "chiral";
    case ModelKind::general_chiral: return "general-chiral";
  }
  return "unknown";
}

BlockTridiagonalOperator::BlockTridiagonalOperator(int n, int W, std::vector<ComplexMatrix> diagonal,
                                                   std::vector<ComplexMatrix> hopping)
    : n_(n), W_(W), V_(std::move(diagonal)), T_(std::move(hopping)) {
  require_blocks(n, W);
  if (V_.size() != static_cast<std::size_t>(n) || T_.size() != static_cast<std::size_t>(n - 1))
    throw InvalidDimension("expected n diagonal and n-1 hopping blocks");
  for (const auto& b : V_)
    if (b.rows() != W || b.cols() != W) throw InvalidDimension("diagonal block is not W x W");
  for (const auto& b : T_)
    if (b.rows() != W || b.cols() != W) throw InvalidDimension("hopping block is not W x W");
}

bool BlockTridiagonalOperator::has_zero_diagonal() const {
  for (const auto& v : V_)
    if (!v.isZero(0.0)) return false;
  return true;
}

BlockTridiagonalOperator build_full_model(int n, int W, RngStream& rng) {
  require_blocks(n, W);
  std::vector<ComplexMatrix> V, T;
  V.reserve(n);
  T.reserve(n - 1);
  for (int x = 0; x < n; ++x) V.push_back(sample_gue(W, rng));
  for (int j = 0; j < n - 1; ++j) T.push_back(sample_ginibre(W, rng));
  return {n, W, std::move(V), std::move(T)};
}

BlockTridiagonalOperator build_chiral_model(int n, int W, RngStream& rng) {
  require_blocks(n, W);
  std::vector<ComplexMatrix> V(n, ComplexMatrix::Zero(W, W));
  std::vector<ComplexMatrix> T;
  T.reserve(n - 1);
  for (int j = 1; j <= n - 1; ++j)
    T.push_back(j % 2 == 1 ? ComplexMatrix::Identity(W, W) : sample_ginibre(W, rng));
  return {n, W, std::move(V), std::move(T)};
}

BlockTridiagonalOperator build_general_chiral_model(int n, int W, RngStream& rng) {
  require_blocks(n, W);
  std::vector<ComplexMatrix> V(n, ComplexMatrix::Zero(W, W));
  std::vector<ComplexMatrix> T;
  T.reserve(n - 1);
  for (int j = 0; j < n - 1; ++j) T.push_back(sample_ginibre(W, rng));
  return {n, W, std::move(V), std::move(T)};
}

BlockTridiagonalOperator build_model(ModelKind kind, int n, int W, RngStream& rng) {
  switch (kind) {
    case ModelKind::full: return build_full_model(n, W, rng);
    case ModelKind::chiral: return build_chiral_model(n, W, rng);
    case ModelKind::general_chiral: return build_general_chiral_model(n, W, rng);
  }
  throw ConfigError("unknown model kind");
}

ComplexMatrix to_dense(const BlockTridiagonalOperator& H) {
  const int W = H.width();
  ComplexMatrix dense = ComplexMatrix::Zero(H.dimension(), H.dimension());
  for (int x = 0; x < H.blocks(); ++x) dense.block(x * W, x * W, W, W) = H.diagonal()[x];
  for (int j = 0; j < H.blocks() - 1; ++j) {
    const auto& t = H.hopping()[j];
    dense.block((j + 1) * W, j * W, W, W) = -t;
    dense.block(j * W, (j + 1) * W, W, W) = -t.adjoint();
  }
  return dense;
}

ChiralOperator::ChiralOperator(int n, int W) : n_(n), W_(W) {
  if (n < 1 || W < 1) throw InvalidDimension("chiral operator needs n >= 1 and W >= 1");
}

ComplexMatrix ChiralOperator::to_dense() const {
  ComplexMatrix pi = ComplexMatrix::Zero(n_ * W_, n_ * W_);
  for (int x = 1; x <= n_; ++x)
    pi.block((x - 1) * W_, (x - 1) * W_, W_, W_).diagonal().setConstant(double(sign(x)));
  return pi;
}

double anticommutator_norm(const BlockTridiagonalOperator& H) {
  // Block (x, y) of H Pi + Pi H is H_xy (pi_y + pi_x).
  const ChiralOperator pi(H.blocks(), H.width());
  double sq = 0.0;
  for (int x = 1; x <= H.blocks(); ++x) {
    const double f = pi.sign(x) + pi.sign(x);
    sq += f * f * H.V(x).squaredNorm();
  }
  for (int j = 1; j < H.blocks(); ++j) {
    const double f = pi.sign(j) + pi.sign(j + 1);
    // Both off-diagonal blocks -T_j and -T_j^* carry the same factor.
    sq += 2.0 * f * f * H.T(j).squaredNorm();
  }
  return std::sqrt(sq);
}

nlohmann::json to_json(const BlockTridiagonalOperator& H) {
  nlohmann::json j;
  j["format"] = kFormatName;
  j["version"] = kFormatVersion;
  j["n"] = H.blocks();
  j["W"] = H.width();
  j["V"] = nlohmann::json::array();
  j["T"] = nlohmann::json::array();
  for (const auto& v : H.diagonal()) j["V"].push_back(block_to_json(v));
  for (const auto& t : H.hopping()) j["T"].push_back(block_to_json(t));
  return j;
}

BlockTridiagonalOperator operator_from_json(const nlohmann::json& j) {
  if (j.value("format", std::string{}) != kFormatName)
    throw ConfigError("not a serialized block-tridiagonal operator");
  if (j.value("version", 0) != kFormatVersion) throw ConfigError("unsupported container version");
  const int n = j.at("n").get<int>();
  const int W = j.at("W").get<int>();
  require_blocks(n, W);
  std::vector<ComplexMatrix> V, T;
  for (const auto& b : j.at("V")) V.push_back(block_from_json(b, W));
  for (const auto& b : j.at("T")) T.push_back(block_from_json(b, W));
  return {n, W, std::move(V), std::move(T)};
}

}  // namespace chiralrbm
