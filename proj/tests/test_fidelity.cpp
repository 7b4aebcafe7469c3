#include "helpers.hpp"

#include "snvec/error.hpp"
#include "snvec/fidelity.hpp"
#include "snvec/states.hpp"

#include <doctest.h>

#include <cmath>

using namespace snvec;

namespace {

const std::vector<cplx> kHalf(4, 0.5);

}  // namespace

TEST_CASE("schmidt spectra") {
  for (const auto& s : schmidt_spectra(ghz_state(3, 3))) {
    REQUIRE(s.lambdas.size() == 3);
    for (double l : s.lambdas) CHECK(std::abs(l - 1.0 / 3) < 1e-12);
  }
  const auto sp = schmidt_spectra(psi432_state(kHalf));
  // Canonical order: {0} (dim-2 particle), {0,1} (against the dim-4
  // particle), {0,2} (against the dim-3 particle).
  const std::vector<std::vector<double>> want{{0.5, 0.5}, {0.25, 0.25, 0.25, 0.25}, {0.5, 0.25, 0.25}};
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t i = 0; i < want[a].size(); ++i) CHECK(std::abs(sp[a].lambdas[i] - want[a][i]) < 1e-12);

  std::mt19937_64 rng(1);
  for (const auto& s : schmidt_spectra(random_product_state(Dims{2, 3, 4}, rng))) {
    CHECK(std::abs(s.lambdas[0] - 1.0) < 1e-12);
    for (std::size_t i = 1; i < s.lambdas.size(); ++i) CHECK(s.lambdas[i] < 1e-12);
  }
  const auto r = random_pure_state(Dims{3, 3, 3}, rng);
  for (const auto& s : schmidt_spectra(r)) {
    double sum = 0;
    for (std::size_t i = 0; i < s.lambdas.size(); ++i) {
      sum += s.lambdas[i];
      if (i) CHECK(s.lambdas[i] <= s.lambdas[i - 1]);
    }
    CHECK(std::abs(sum - 1.0) < 1e-10);
  }
}

TEST_CASE("fidelity values") {
  const auto g = ghz_state(3, 3);
  CHECK(std::abs(fidelity(g.projector(), g) - 1.0) < 1e-12);
  for (double p : {0.2, 0.7}) {
    CHECK(std::abs(fidelity(white_noise_mix(p, g), g) - (p + (1 - p) / 27)) < 1e-12);
    const auto psi = psi432_state(kHalf);
    CHECK(std::abs(fidelity(white_noise_mix(p, psi), psi) - (p + (1 - p) / 24)) < 1e-12);
  }
  CHECK_THROWS_AS(fidelity(DensityMatrix::maximally_mixed(Dims{2, 2}), g), ValidationError);
}

TEST_CASE("fidelity bounds") {
  for (int d = 2; d <= 4; ++d) {
    const auto g = ghz_state(d, 3);
    for (const auto& v : enumerate_candidates(Dims{d, d, d}))
      CHECK(std::abs(fidelity_bound(g, v) - double(v.back()) / d) < 1e-12);
  }
  CHECK(std::abs(fidelity_bound(ghz_state(3, 3), {3, 3, 2}) - 2.0 / 3) < 1e-12);
  const auto psi = psi432_state(kHalf);
  CHECK(std::abs(fidelity_bound(psi, {4, 2, 2}) - 0.75) < 1e-12);
  CHECK(std::abs(fidelity_bound(psi, {3, 3, 2}) - 0.75) < 1e-12);
  CHECK(std::abs(fidelity_bound(psi, {4, 3, 2}) - 1.0) < 1e-12);
}

TEST_CASE("fidelity bound monotonicity") {
  std::mt19937_64 rng(2);
  for (const Dims& d : {Dims{3, 3, 3}, Dims{2, 3, 4}}) {
    const CVector c = random_unit_vector(4, rng);
    const auto target = d.all_equal() ? ghz_state(3, 3) : psi432_state(std::vector<cplx>(c.data(), c.data() + 4));
    const auto cands = enumerate_candidates(d);
    const FidelityBoundTable table(target, cands);
    for (const auto& a : cands)
      for (const auto& b : cands)
        if (elementwise_leq(a, b)) CHECK(table.bound(a) <= table.bound(b) + 1e-15);
    CHECK(std::abs(table.bound(cands.back()) - 1.0) < 1e-12);
  }
}

TEST_CASE("fidelity bound soundness on pure states") {
  std::mt19937_64 rng(3);
  const CVector c = random_unit_vector(4, rng);
  const std::vector<cplx> cv(c.data(), c.data() + 4);
  const std::vector<PureState> targets{ghz_state(3, 3), psi432_state(kHalf), psi432_state(cv)};
  for (const auto& t : targets) {
    const Dims& d = t.dims();
    const auto spectra = schmidt_spectra(t);
    const auto caps = bipartition_caps(d);
    for (int i = 0; i < 500; ++i) {
      // Low-rank states with a component along the target make the check bite.
      CVector v = test::random_low_rank_state(d, rng).amplitudes();
      std::uniform_real_distribution<double> u;
      const double w = u(rng);
      // Project the target onto a random product-truncated subspace.
      CVector tr = t.amplitudes();
      const int keep = 1 + i % d.min();
      for (int k = 0; k < d.total(); ++k) {
        int x = k, hit = 0;
        for (int n = static_cast<int>(d.size()) - 1; n >= 0; --n) {
          hit |= (x % d[n]) >= keep;
          x /= d[n];
        }
        if (hit) tr[k] = 0;
      }
      if (tr.norm() > 1e-9) v = w * v + (1 - w) * tr / tr.norm();
      const auto phi = PureState::normalized(d, v);
      const double ov = std::norm(t.amplitudes().dot(phi.amplitudes()));
      CHECK(ov <= fidelity_bound(spectra, caps, test::sorted_ranks(phi)) + 1e-8);
    }
  }
}

TEST_CASE("fidelity exclusions") {
  const auto g = ghz_state(3, 3);
  const auto c333 = enumerate_candidates(Dims{3, 3, 3});
  const auto pure = exclusion_by_fidelity(g.projector(), g, c333);
  CHECK(pure.certified == SNVector{3, 3, 3});
  CHECK(pure.witness_values.at("fidelity") == doctest::Approx(1.0));
  const auto mixed = exclusion_by_fidelity(DensityMatrix::maximally_mixed(Dims{3, 3, 3}), g, c333);
  CHECK(mixed.excluded.empty());
  CHECK(mixed.certified == SNVector{1, 1, 1});

  // GHZ_3 + white noise: minimal element 3 certified just above p = 17/26.
  const double p0 = 17.0 / 26.0;
  CHECK(exclusion_by_fidelity(white_noise_mix(p0 + 1e-6, g), g, c333).certified.back() == 3);
  CHECK(exclusion_by_fidelity(white_noise_mix(p0 - 1e-6, g), g, c333).certified.back() == 2);

  // psi432(1/2): (422) and (332) excluded just above p = 17/23.
  const auto psi = psi432_state(kHalf);
  const auto c432 = enumerate_candidates(kPsi432Dims);
  const FidelityBoundTable table(psi, c432);
  const auto above = exclusion_by_fidelity(white_noise_mix(17.0 / 23 + 1e-6, psi), table);
  CHECK(above.is_excluded({4, 2, 2}));
  CHECK(above.is_excluded({3, 3, 2}));
  CHECK(above.certified == SNVector{4, 3, 2});
  const auto below = exclusion_by_fidelity(white_noise_mix(17.0 / 23 - 1e-6, psi), table);
  CHECK_FALSE(below.is_excluded({4, 2, 2}));
  CHECK_FALSE(below.is_excluded({3, 3, 2}));
}
