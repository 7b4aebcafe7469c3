#include "helpers.hpp"

#include "snvec/error.hpp"
#include "snvec/qudit.hpp"
#include "snvec/states.hpp"

#include <doctest.h>

#include <cmath>

using namespace snvec;

TEST_CASE("dims validation and offsets") {
  CHECK_THROWS_AS(Dims({3, 1}), InvalidDimension);
  CHECK_THROWS_AS(Dims(std::vector<int>{}), InvalidDimension);
  const Dims d{2, 3, 4};
  CHECK(d.total() == 24);
  CHECK(d.min() == 2);
  CHECK_FALSE(d.all_equal());
  const std::vector<int> p{2};
  CHECK(d.offsets(p) == std::vector<int>{0, 1, 2, 3});
  const std::vector<int> q{0};
  CHECK(d.offsets(q) == std::vector<int>{0, 12});
}

TEST_CASE("density matrix validation") {
  const Dims d{2};
  CMatrix m(2, 2);
  m << 0.5, 0.1, 0.2, 0.5;
  CHECK_THROWS_AS(DensityMatrix(d, m), ValidationError);
  m << 0.6, 0, 0, 0.6;
  CHECK_THROWS_AS(DensityMatrix(d, m), ValidationError);
  m << 1.2, 0, 0, -0.2;
  CHECK_THROWS_AS(DensityMatrix(d, m), ValidationError);
  const DensityMatrix repaired(d, m, true);
  CHECK(repaired.matrix()(0, 0).real() == doctest::Approx(1.0));
  CHECK(repaired.matrix()(1, 1).real() == doctest::Approx(0.0));
  CHECK_THROWS_AS(DensityMatrix(Dims{2, 2}, CMatrix::Identity(2, 2) / 2.0), ValidationError);
}

TEST_CASE("gellmann basis") {
  SUBCASE("qubit unit basis holds the normalized Pauli-X") {
    const auto b = gellmann_basis(2, Normalization::Unit);
    REQUIRE(b.elements.size() == 4);
    CHECK(std::abs(b.elements[1](0, 1) - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(b.elements[1](1, 0) - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(b.elements[1](0, 0)) < 1e-15);
  }
  SUBCASE("gram matrices") {
    const auto u = gellmann_basis(3, Normalization::Unit);
    CHECK(u.elements.size() == 9);
    CHECK((u.gram() - CMatrix::Identity(9, 9)).norm() < 1e-12);
    const auto s = gellmann_basis(3, Normalization::Scaled);
    CHECK((s.gram() - 3.0 * CMatrix::Identity(9, 9)).norm() < 1e-12);
  }
  SUBCASE("completeness on hermitian matrices") {
    std::mt19937_64 rng(11);
    for (int d = 2; d <= 5; ++d) {
      for (auto norm : {Normalization::Unit, Normalization::Scaled}) {
        const auto b = gellmann_basis(d, norm);
        const CMatrix g = test::random_matrix(d, d, rng);
        const CMatrix h = g + g.adjoint();
        CHECK((b.reconstruct(b.coefficients(h)) - h).norm() < 1e-10);
      }
    }
  }
  CHECK_THROWS_AS(gellmann_basis(1, Normalization::Unit), InvalidDimension);
}

TEST_CASE("partial trace") {
  const auto ghz = ghz_state(3, 3).projector();
  const std::vector<int> one{1};
  const auto r1 = partial_trace(ghz, one);
  CHECK((r1.matrix() - CMatrix::Identity(3, 3) / 3.0).norm() < 1e-12);

  CVector zero = CVector::Zero(27);
  zero[0] = 1;
  const auto prod = PureState(Dims{3, 3, 3}, zero).projector();
  const std::vector<int> two{2};
  CMatrix e0 = CMatrix::Zero(3, 3);
  e0(0, 0) = 1;
  CHECK((partial_trace(prod, two).matrix() - e0).norm() < 1e-12);

  std::mt19937_64 rng(5);
  const auto rho = test::random_density(Dims{2, 3, 4}, rng);
  const std::vector<int> k12{1, 2};
  const auto r12 = partial_trace(rho, k12);
  const std::vector<int> first{0};
  CHECK((partial_trace(r12, first).matrix() - partial_trace(rho, one).matrix()).norm() < 1e-12);
  CHECK(std::abs(r12.matrix().trace() - 1.0) < 1e-12);

  const std::vector<int> none{};
  const std::vector<int> all{0, 1, 2};
  CHECK_THROWS_AS(partial_trace(rho, none), InvalidPartition);
  CHECK_THROWS_AS(partial_trace(rho, all), InvalidPartition);
}

TEST_CASE("purity") {
  std::mt19937_64 rng(3);
  const Dims d{3, 3, 3};
  CHECK(std::abs(purity(random_pure_state(d, rng).projector()) - 1.0) < 1e-12);
  CHECK(std::abs(purity(DensityMatrix::maximally_mixed(d)) - 1.0 / 27) < 1e-15);
  const double p = 0.5;
  const auto rho = white_noise_mix(p, ghz_state(3, 3));
  CHECK(std::abs(purity(rho) - (p * p + 2 * p * (1 - p) / 27 + (1 - p) * (1 - p) / 27)) < 1e-12);
  // Pure states have equal marginal purities.
  for (int i = 0; i < 20; ++i) {
    const auto psi = random_pure_state(Dims{2, 3, 4}, rng).projector();
    const std::vector<int> a{1}, b{0, 2};
    CHECK(std::abs(purity(partial_trace(psi, a)) - purity(partial_trace(psi, b))) < 1e-9);
  }
}

TEST_CASE("single-particle covariance trace") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 100; ++i) {
    const int d = 2 + i % 4;
    const auto rho = test::random_density(Dims{d}, rng);
    const auto b = gellmann_basis(d, Normalization::Unit);
    double tr = 0;
    for (const auto& g : b.elements) {
      const double e = (rho.matrix() * g).trace().real();
      tr += (rho.matrix() * g * g).trace().real() - e * e;
    }
    CHECK(std::abs(tr - (d - purity(rho))) < 1e-9);
  }
}

TEST_CASE("trace norm") {
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 1;
  d(1, 1) = -2;
  CHECK(trace_norm(d) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(trace_norm(CMatrix(CMatrix::Zero(3, 5))) == 0.0);

  std::mt19937_64 rng(21);
  const CMatrix m = test::random_matrix(9, 81, rng);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m * m.adjoint());
  const double oracle = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  CHECK(std::abs(trace_norm(m) - oracle) < 1e-9);

  for (int i = 0; i < 100; ++i) {
    const CMatrix a = test::random_matrix(4, 6, rng);
    const CMatrix u = haar_unitary(4, rng), v = haar_unitary(6, rng);
    CHECK(std::abs(trace_norm(CMatrix(u * a * v)) - trace_norm(a)) < 1e-9);
  }
}

TEST_CASE("bipartition reshape") {
  const auto ghz = ghz_state(3, 3);
  const std::vector<int> one{1};
  const CMatrix m = bipartition_reshape(ghz, one);
  CHECK(m.rows() == 3);
  CHECK(m.cols() == 9);
  CHECK((m.array().abs() > 1e-12).count() == 3);
  const RVector s = Eigen::JacobiSVD<CMatrix>(m).singularValues();
  for (int i = 0; i < 3; ++i) CHECK(std::abs(s[i] - 1.0 / std::sqrt(3.0)) < 1e-12);

  const std::vector<cplx> half(4, 0.5);
  const std::vector<int> zero{0};
  const RVector s432 = Eigen::JacobiSVD<CMatrix>(bipartition_reshape(psi432_state(half), zero)).singularValues();
  CHECK(s432.size() == 2);
  CHECK(std::abs(s432[0] - 1.0 / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(s432[1] - 1.0 / std::sqrt(2.0)) < 1e-12);

  std::mt19937_64 rng(4);
  const auto prod = random_product_state(Dims{2, 3, 4}, rng);
  for (const auto& alpha : {std::vector<int>{0}, std::vector<int>{0, 1}, std::vector<int>{0, 2}})
    CHECK(test::numeric_rank(bipartition_reshape(prod, alpha)) == 1);
}

TEST_CASE("apply_local matches the kronecker product") {
  std::mt19937_64 rng(8);
  const Dims d{2, 3, 2};
  const auto rho = test::random_density(d, rng);
  const auto u = test::random_local_unitaries(d, rng);
  const CMatrix k = kron(u);
  CHECK((apply_local(rho.matrix(), d, u) - k * rho.matrix() * k.adjoint()).norm() < 1e-12);
  const CVector v = random_pure_state(d, rng).amplitudes();
  CHECK((apply_local(v, d, u) - k * v).norm() < 1e-12);
}

TEST_CASE("product expectations match direct traces") {
  std::mt19937_64 rng(12);
  const Dims d{2, 3};
  const auto rho = test::random_density(d, rng);
  const auto b = gellmann_bases(d, Normalization::Unit);
  const std::vector<int> counts{4, 9};
  const auto e = product_expectations(rho, b, counts);
  REQUIRE(e.size() == 36);
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 9; ++k) {
      const std::vector<CMatrix> f{b[0].elements[i], b[1].elements[k]};
      const cplx direct = (rho.matrix() * kron(f)).trace();
      CHECK(std::abs(e[i * 9 + k] - direct) < 1e-12);
    }
}
