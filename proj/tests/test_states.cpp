#include "helpers.hpp"

#include "snvec/error.hpp"
#include "snvec/fidelity.hpp"
#include "snvec/optimizer.hpp"
#include "snvec/states.hpp"

#include <doctest.h>

#include <cmath>

using namespace snvec;

TEST_CASE("ghz state") {
  const auto g = ghz_state(3, 3);
  const CVector& v = g.amplitudes();
  REQUIRE(v.size() == 27);
  for (int i = 0; i < 27; ++i) {
    const double want = (i == 0 || i == 13 || i == 26) ? 1.0 / std::sqrt(3.0) : 0.0;
    CHECK(std::abs(v[i] - want) < 1e-15);
  }
  const auto bell = ghz_state(2, 2).amplitudes();
  CHECK(std::abs(bell[0] - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(bell[3] - 1.0 / std::sqrt(2.0)) < 1e-15);
  const auto rho = g.projector();
  for (int n = 0; n < 3; ++n) {
    const std::vector<int> keep{n};
    CHECK((partial_trace(rho, keep).matrix() - CMatrix::Identity(3, 3) / 3.0).norm() < 1e-12);
  }
  CHECK_THROWS_AS(ghz_state(1, 3), InvalidDimension);
}

TEST_CASE("psi432 state") {
  const std::vector<cplx> half(4, 0.5);
  const auto psi = psi432_state(half);
  CHECK(psi.dims() == kPsi432Dims);
  CHECK(test::sorted_ranks(psi) == SNVector{4, 3, 2});
  const auto spectra = schmidt_spectra(psi);
  // Bipartition {0,2} | {1}: the dim-3 particle.
  const auto& l = spectra[2].lambdas;
  REQUIRE(l.size() >= 3);
  CHECK(std::abs(l[0] - 0.5) < 1e-12);
  CHECK(std::abs(l[1] - 0.25) < 1e-12);
  CHECK(std::abs(l[2] - 0.25) < 1e-12);

  const std::vector<cplx> e0{1, 0, 0, 0};
  CHECK(test::sorted_ranks(psi432_state(e0)) == SNVector{1, 1, 1});
  const std::vector<cplx> bad{1, 1, 0, 0};
  CHECK_THROWS_AS(psi432_state(bad), ValidationError);
}

TEST_CASE("one-uniform states") {
  const auto bases = canonical_ghz_bases(3, 3);
  const auto rho = one_uniform_state(Dims{3, 3, 3}, bases);
  CHECK((rho.matrix() - ghz_state(3, 3).projector().matrix()).norm() < 1e-10);

  std::mt19937_64 rng(2);
  std::vector<OperatorBasis> random;
  for (int n = 0; n < 3; ++n) random.push_back(gellmann_basis(3, Normalization::Unit, n).rotated(haar_unitary(3, rng)));
  random[1] = gellmann_basis(3, Normalization::Unit, 1);
  CHECK_THROWS_AS(one_uniform_state(Dims{3, 3, 3}, random), ValidationError);

  // Pauli/sqrt2 with the sign of sigma_y flipped on one side: the Bell state.
  auto b0 = gellmann_basis(2, Normalization::Unit, 0);
  auto b1 = gellmann_basis(2, Normalization::Unit, 1);
  b1.elements[2] = -b1.elements[2];
  const std::vector<OperatorBasis> pauli{b0, b1};
  const auto bell = one_uniform_state(Dims{2, 2}, pauli);
  CHECK((bell.matrix() - ghz_state(2, 2).projector().matrix()).norm() < 1e-12);
  const std::vector<OperatorBasis> plain{b0, gellmann_basis(2, Normalization::Unit, 1)};
  CHECK_THROWS_AS(one_uniform_state(Dims{2, 2}, plain), ValidationError);
}

TEST_CASE("haar random density") {
  const SamplerConfig cfg{SamplerMode::Lebesgue, 17, Dims{3, 3, 3}};
  const auto a = haar_random_density(cfg, 5);
  const auto b = haar_random_density(cfg, 5);
  CHECK(a.rho.matrix() == b.rho.matrix());
  CHECK_NOTHROW(DensityMatrix(a.rho.dims(), a.rho.matrix()));
  CHECK(haar_random_density(cfg, 6).rho.matrix() != a.rho.matrix());

  // Mean purity of U Lambda U^dag with Lambda flat-Dirichlet is 2/(D+1).
  const int n = 4000;
  double sum = 0, sum2 = 0;
  for (int i = 0; i < n; ++i) {
    const double p = purity(haar_random_density(cfg, static_cast<std::uint64_t>(i)).rho);
    sum += p;
    sum2 += p * p;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum2 / n - mean * mean) / n);
  CHECK(std::abs(mean - 2.0 / 28.0) < 3 * se);
}

TEST_CASE("haar invariance of the sampler") {
  const SamplerConfig cfg{SamplerMode::Lebesgue, 3, Dims{2, 3}};
  std::mt19937_64 rng(99);
  const CMatrix v = haar_unitary(6, rng);
  CVector target = CVector::Zero(6);
  target[0] = 1;
  const int n = 5000;
  double s0 = 0, s1 = 0, q0 = 0, q1 = 0;
  for (int i = 0; i < n; ++i) {
    const CMatrix r = haar_random_density(cfg, static_cast<std::uint64_t>(i)).rho.matrix();
    const double f0 = target.dot(r * target).real();
    const double f1 = target.dot(v * r * v.adjoint() * target).real();
    s0 += f0;
    s1 += f1;
    q0 += f0 * f0;
    q1 += f1 * f1;
  }
  const double m0 = s0 / n, m1 = s1 / n;
  const double se = std::sqrt((q0 / n - m0 * m0) / n + (q1 / n - m1 * m1) / n);
  CHECK(std::abs(m0 - m1) < 3 * se);
}

TEST_CASE("fixed-lambda1 density") {
  const SamplerConfig cfg{SamplerMode::FixedLambda1, 7, Dims{3, 3, 3}};
  const auto s = fixed_lambda1_density(cfg, 0);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(s.rho.matrix());
  CHECK(std::abs(es.eigenvalues().maxCoeff() - std::max(s.spectrum[0], s.spectrum.tail(26).maxCoeff())) < 1e-10);
  CHECK(std::abs(s.spectrum.sum() - 1.0) < 1e-12);

  const auto pure = fixed_lambda1_density(cfg, 3, 1.0);
  CHECK(std::abs(purity(pure.rho) - 1.0) < 1e-10);

  // Kolmogorov-Smirnov against U[0,1] at the 1% level.
  const int n = 10000;
  std::vector<double> x;
  for (int i = 0; i < n; ++i) x.push_back(fixed_lambda1_density(cfg, static_cast<std::uint64_t>(i)).spectrum[0]);
  std::sort(x.begin(), x.end());
  double ks = 0;
  for (int i = 0; i < n; ++i) ks = std::max({ks, std::abs((i + 1.0) / n - x[i]), std::abs(x[i] - double(i) / n)});
  CHECK(ks < 1.63 / std::sqrt(double(n)));
}

TEST_CASE("sampled states are valid") {
  for (const Dims& d : {Dims{3, 3, 3}, Dims{2, 3, 4}}) {
    for (auto mode : {SamplerMode::Lebesgue, SamplerMode::FixedLambda1}) {
      const SamplerConfig cfg{mode, 123, d};
      for (int i = 0; i < 10000; i += 4) {
        const auto s = sample_density(cfg, static_cast<std::uint64_t>(i));
        CHECK_NOTHROW(DensityMatrix(d, s.rho.matrix()));
      }
    }
  }
}

TEST_CASE("sample streams are order independent") {
  const SamplerConfig cfg{SamplerMode::Lebesgue, 42, Dims{2, 3, 4}};
  const auto late = haar_random_density(cfg, 9).rho.matrix();
  for (int i = 0; i < 9; ++i) haar_random_density(cfg, static_cast<std::uint64_t>(i));
  CHECK(haar_random_density(cfg, 9).rho.matrix() == late);
  auto r1 = sample_rng(1, 2), r2 = sample_rng(1, 2), r3 = sample_rng(2, 1);
  CHECK(r1() == r2());
  CHECK(r1() != r3());
}

TEST_CASE("haar unitary is unitary") {
  std::mt19937_64 rng(6);
  for (int d = 2; d <= 6; ++d) {
    const CMatrix u = haar_unitary(d, rng);
    CHECK((u * u.adjoint() - CMatrix::Identity(d, d)).norm() < 1e-12);
  }
  const RVector s = simplex_point(10, rng);
  CHECK(std::abs(s.sum() - 1.0) < 1e-12);
  CHECK(s.minCoeff() >= 0.0);
}

TEST_CASE("noise mixing") {
  std::mt19937_64 rng(1);
  const auto sig = test::random_density(Dims{2, 2}, rng);
  const auto noi = test::random_density(Dims{2, 2}, rng);
  CHECK(mix(1.0, sig, noi).matrix() == sig.matrix());
  CHECK(mix(0.0, sig, noi).matrix() == noi.matrix());
  CHECK_THROWS_AS(mix(1.5, sig, noi), ValidationError);
  CHECK_THROWS_AS(mix(-0.1, sig, noi), ValidationError);
  CHECK_THROWS_AS(mix(0.5, sig, DensityMatrix::maximally_mixed(Dims{4})), ValidationError);

  const auto c = random_unit_vector(4, rng);
  const std::vector<cplx> cv(c.data(), c.data() + 4);
  const auto psi = psi432_state(cv);
  CHECK(std::abs(fidelity(white_noise_mix(0.8, psi), psi) - (0.8 + 0.2 / 24)) < 1e-12);
}
