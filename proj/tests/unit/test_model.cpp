#include <nlohmann/json.hpp>

#include "chiralrbm/errors.hpp"
#include "chiralrbm/model.hpp"
#include "doctest.h"

using namespace chiralrbm;

namespace {

double hermiticity_defect(const ComplexMatrix& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("builders validate dimensions") {
  RngStream rng(0, 0);
  CHECK_THROWS_AS(build_full_model(1, 2, rng), InvalidDimension);
  CHECK_THROWS_AS(build_chiral_model(0, 2, rng), InvalidDimension);
  CHECK_THROWS_AS(build_general_chiral_model(3, 0, rng), InvalidDimension);
  CHECK_THROWS_AS(BlockTridiagonalOperator(3, 2, {}, {}), InvalidDimension);
}

TEST_CASE("model kind names round-trip") {
  for (auto k : {ModelKind::full, ModelKind::chiral, ModelKind::general_chiral})
    CHECK(parse_model_kind(to_string(k)) == k);
  CHECK_THROWS_AS(parse_model_kind("banana"), ConfigError);
}

TEST_CASE("full model n=2, W=1 is [[v1, -conj t],[-t, v2]]") {
  RngStream rng(1, 0);
  const auto H = build_full_model(2, 1, rng);
  const auto d = to_dense(H);
  const auto t = H.T(1)(0, 0);
  CHECK(d(0, 0) == H.V(1)(0, 0));
  CHECK(d(1, 1) == H.V(2)(0, 0));
  CHECK(d(1, 0) == -t);
  CHECK(d(0, 1) == -std::conj(t));
}

TEST_CASE("full model n=4, W=3 is block tridiagonal and Hermitian") {
  RngStream rng(2, 0);
  const auto H = build_full_model(4, 3, rng);
  const auto d = to_dense(H);
  REQUIRE(d.rows() == 12);
  CHECK(hermiticity_defect(d) == 0.0);
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      if (std::abs(x - y) > 1) CHECK(d.block(3 * x, 3 * y, 3, 3).isZero(0.0));
  for (int x = 1; x <= 4; ++x) CHECK(hermiticity_defect(H.V(x)) == 0.0);
}

TEST_CASE("chiral builder: identity odd hops, zero diagonal") {
  RngStream rng(3, 0);
  const auto H2 = build_chiral_model(2, 2, rng);
  CHECK(H2.hopping().size() == 1);
  CHECK(H2.T(1).isIdentity(0.0));
  CHECK(H2.has_zero_diagonal());

  const auto H4 = build_chiral_model(4, 2, rng);
  CHECK(H4.T(1).isIdentity(0.0));
  CHECK_FALSE(H4.T(2).isIdentity(1e-3));
  CHECK(H4.T(3).isIdentity(0.0));
  CHECK(anticommutator_norm(H4) == 0.0);
}

TEST_CASE("chiral dense form for n=2, W=1 is [[0,-1],[-1,0]]") {
  RngStream rng(4, 0);
  const auto d = to_dense(build_chiral_model(2, 1, rng));
  CHECK(d(0, 0) == 0.0);
  CHECK(d(1, 1) == 0.0);
  CHECK(d(0, 1) == -1.0);
  CHECK(d(1, 0) == -1.0);
}

TEST_CASE("general chiral model has Ginibre hops everywhere") {
  RngStream rng(5, 0);
  const auto H = build_general_chiral_model(2, 1, rng);
  const auto d = to_dense(H);
  const auto t = H.T(1)(0, 0);
  CHECK(d(0, 0) == 0.0);
  CHECK(d(1, 0) == -t);
  CHECK(d(0, 1) == -std::conj(t));
  CHECK(anticommutator_norm(build_general_chiral_model(5, 3, rng)) == 0.0);
}

TEST_CASE("Pi squares to one and is self-adjoint, first block negative") {
  const ChiralOperator pi(5, 2);
  const auto p = pi.to_dense();
  CHECK((p * p).isIdentity(0.0));
  CHECK(p == p.adjoint());
  CHECK(p(0, 0) == -1.0);
  CHECK(p(2, 2) == 1.0);
}

TEST_CASE("anticommutator_norm matches the dense Frobenius norm of H Pi + Pi H") {
  RngStream rng(6, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const auto H = build_full_model(5, 3, rng);
    const auto h = to_dense(H);
    const auto p = ChiralOperator(5, 3).to_dense();
    const double dense = (h * p + p * h).norm();
    CHECK(anticommutator_norm(H) == doctest::Approx(dense).epsilon(1e-12));
    CHECK(anticommutator_norm(H) > 0.0);
    double diag = 0.0;
    for (int x = 1; x <= 5; ++x) diag += H.V(x).squaredNorm();
    CHECK(anticommutator_norm(H) == doctest::Approx(2.0 * std::sqrt(diag)).epsilon(1e-12));
  }
}

TEST_CASE("anticommutator of zero operator is zero; one nonzero V makes it positive") {
  std::vector<ComplexMatrix> V(3, ComplexMatrix::Zero(2, 2)), T(2, ComplexMatrix::Zero(2, 2));
  CHECK(anticommutator_norm(BlockTridiagonalOperator(3, 2, V, T)) == 0.0);
  V[1](0, 0) = 0.5;
  CHECK(anticommutator_norm(BlockTridiagonalOperator(3, 2, V, T)) == doctest::Approx(1.0));
}

TEST_CASE("every builder yields exactly Hermitian dense matrices") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RngStream rng(seed, 1);
    for (auto kind : {ModelKind::full, ModelKind::chiral, ModelKind::general_chiral}) {
      const auto H = build_model(kind, 2 + int(seed % 5), 1 + int(seed % 4), rng);
      CHECK(hermiticity_defect(to_dense(H)) == 0.0);
      CHECK(H.dimension() == H.blocks() * H.width());
    }
  }
}

TEST_CASE("JSON container round-trips bit-exactly") {
  RngStream rng(7, 0);
  for (auto kind : {ModelKind::full, ModelKind::chiral}) {
    const auto H = build_model(kind, 4, 3, rng);
    const auto text = to_json(H).dump();
    const auto back = operator_from_json(nlohmann::json::parse(text));
    CHECK(back.blocks() == 4);
    CHECK(back.width() == 3);
    CHECK(to_dense(back) == to_dense(H));
  }
  auto bad = to_json(build_chiral_model(2, 1, rng));
  bad["format"] = "other";
  CHECK_THROWS_AS(operator_from_json(bad), ConfigError);
}
