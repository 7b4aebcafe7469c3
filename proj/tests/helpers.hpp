#pragma once

#include "snvec/lattice.hpp"
#include "snvec/qudit.hpp"
#include "snvec/states.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <random>

namespace snvec::test {

/// Exhaustive search over R on a 1/16 grid. With f on a 1/8 grid every vertex
/// of the feasible polytope lies on the 1/16 grid (0/1 constraint matrices
/// of size 3 have determinant at most 2), so the search is exact.
inline bool grid_feasible(const std::vector<int>& f8, const SNVector& v) {
  const int total = 16 * (v[0] + v[1] + v[2]);
  const int s1 = 16 * v[0], s2 = 16 * (v[0] + v[1]);
  const int lo0 = 2 * f8[0], lo1 = 2 * f8[1], lo2 = 2 * f8[2];
  for (int r0 = lo0; r0 <= total; ++r0)
    for (int r1 = lo1;; ++r1) {
      const int r2 = total - r0 - r1;
      if (r2 < lo2) break;
      std::array<int, 3> r{r0, r1, r2};
      std::sort(r.rbegin(), r.rend());
      if (r[0] <= s1 && r[0] + r[1] <= s2) return true;
    }
  return false;
}

inline CMatrix random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) m(i, k) = cplx(g(rng), g(rng));
  return m;
}

/// Ginibre-induced mixed state of full rank.
inline DensityMatrix random_density(const Dims& dims, std::mt19937_64& rng) {
  const CMatrix g = random_matrix(dims.total(), dims.total(), rng);
  CMatrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix(dims, m);
}

inline std::vector<CMatrix> random_local_unitaries(const Dims& dims, std::mt19937_64& rng) {
  std::vector<CMatrix> u;
  for (std::size_t n = 0; n < dims.size(); ++n) u.push_back(haar_unitary(dims[n], rng));
  return u;
}

/// Numerical rank from singular values above `tol`.
inline int numeric_rank(const CMatrix& m, double tol = 1e-9) {
  const RVector s = Eigen::JacobiSVD<CMatrix>(m).singularValues();
  return static_cast<int>((s.array() > tol).count());
}

/// Schmidt ranks across the canonical bipartitions, sorted non-increasingly.
inline SNVector sorted_ranks(const PureState& psi) {
  SNVector r;
  for (const auto& b : enumerate_bipartitions(psi.dims().size()))
    r.push_back(numeric_rank(bipartition_reshape(psi, b.members)));
  std::sort(r.rbegin(), r.rend());
  return r;
}

/// Pure state with prescribed Schmidt-rank structure: a random vector
/// supported on a random number of random product terms.
inline PureState random_low_rank_state(const Dims& dims, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> terms(1, dims.min() + 1);
  const int t = terms(rng);
  CVector v = CVector::Zero(dims.total());
  std::normal_distribution<double> g;
  for (int i = 0; i < t; ++i)
    v += cplx(g(rng), g(rng)) * random_product_state(dims, rng).amplitudes();
  return PureState::normalized(dims, v);
}

/// Equal-weight superposition of computational kets, then random local
/// unitaries (which keep every Schmidt rank).
inline PureState rotated_kets(const Dims& dims, const std::vector<std::vector<int>>& kets, std::mt19937_64& rng) {
  CVector v = CVector::Zero(dims.total());
  for (const auto& k : kets) {
    int idx = 0;
    for (std::size_t n = 0; n < dims.size(); ++n) idx = idx * dims[n] + k[n];
    v[idx] = 1.0;
  }
  const auto u = random_local_unitaries(dims, rng);
  return PureState::normalized(dims, apply_local(v, dims, u));
}

}  // namespace snvec::test
