#include "snvec/cmc.hpp"

#include "snvec/error.hpp"

#include <algorithm>
#include <cmath>

namespace snvec {

CrossCovariance cross_covariance(const DensityMatrix& rho, const Bipartition& alpha,
                                 std::span<const OperatorBasis> bases) {
  const Dims& dims = rho.dims();
  if (bases.size() != dims.size()) throw ConfigError("cross_covariance: one basis per particle required");
  std::vector<int> counts;
  for (std::size_t n = 0; n < dims.size(); ++n) {
    if (bases[n].normalization != Normalization::Unit || bases[n].kind != BasisKind::Hermitian)
      throw ConfigError("cross_covariance: UNIT Hermitian bases required");
    counts.push_back(dims[n] * dims[n]);
  }
  const auto c = product_expectations(rho, bases, counts);
  // Basis multi-index offsets, row-major over the particles.
  const Dims sq(counts);
  const auto rest = alpha.complement(dims.size());
  const auto ok = sq.offsets(alpha.members);
  const auto ol = sq.offsets(rest);
  RMatrix m(static_cast<Eigen::Index>(ok.size()), static_cast<Eigen::Index>(ol.size()));
  for (std::size_t k = 0; k < ok.size(); ++k)
    for (std::size_t l = 0; l < ol.size(); ++l) m(k, l) = c[ok[k] + ol[l]].real();
  // <g_K x 1> = sqrt(D_rest) M_K0 and <1 x g_L> = sqrt(D_alpha) M_0L.
  const double sqrt_d = std::sqrt(double(dims.total()));
  RMatrix x = m - sqrt_d * m.col(0) * m.row(0);
  return {alpha, x};
}

double f_value(const DensityMatrix& rho, const Bipartition& alpha) {
  const Dims& dims = rho.dims();
  const auto rest = alpha.complement(dims.size());
  const auto oa = dims.offsets(alpha.members);
  const auto ob = dims.offsets(rest);
  const auto rho_a = partial_trace(rho, alpha.members);
  const auto rho_b = partial_trace(rho, rest);
  const auto da = static_cast<Eigen::Index>(oa.size()), db = static_cast<Eigen::Index>(ob.size());
  const CMatrix& m = rho.matrix();
  // Realignment R[(a,a'),(b,b')] = (rho - rho_a x rho_b)[(a b),(a' b')]; its
  // singular values are those of the cross-covariance in any orthonormal
  // product operator bases.
  CMatrix r(da * da, db * db);
  for (Eigen::Index a = 0; a < da; ++a)
    for (Eigen::Index a2 = 0; a2 < da; ++a2) {
      const cplx ra = rho_a.matrix()(a, a2);
      for (Eigen::Index b = 0; b < db; ++b)
        for (Eigen::Index b2 = 0; b2 < db; ++b2)
          r(a * da + a2, b * db + b2) = m(oa[a] + ob[b], oa[a2] + ob[b2]) - ra * rho_b.matrix()(b, b2);
    }
  const double pa = purity(rho_a), pb = purity(rho_b);
  return trace_norm(r) - std::sqrt(std::max(0.0, (1.0 - pa) * (1.0 - pb))) + 1.0;
}

std::vector<double> f_values(const DensityMatrix& rho) {
  std::vector<double> f;
  for (const auto& b : enumerate_bipartitions(rho.dims().size())) f.push_back(f_value(rho, b));
  return f;
}

CriterionReport exclusion_by_system(std::span<const double> f, const std::vector<SNVector>& candidates) {
  std::vector<bool> flags;
  for (const auto& v : candidates) flags.push_back(!majorization_feasible(f, v));
  auto r = make_report("cmc-system", candidates, flags);
  double fmax = -1e300;
  for (std::size_t k = 0; k < f.size(); ++k) {
    r.witness_values["f_" + std::to_string(k + 1)] = f[k];
    fmax = std::max(fmax, f[k]);
  }
  r.witness_values["sn1_lower"] = std::max(1.0, std::ceil(fmax - 1e-9));
  return r;
}

CriterionReport exclusion_by_system(const DensityMatrix& rho, const std::vector<SNVector>& candidates) {
  const auto f = f_values(rho);
  return exclusion_by_system(std::span<const double>(f), candidates);
}

double product_basis_witness(const DensityMatrix& rho, std::span<const OperatorBasis> bases) {
  const Dims& dims = rho.dims();
  if (bases.size() != dims.size()) throw ConfigError("product_basis_witness: one basis per particle required");
  const int d = dims.min();
  for (std::size_t n = 0; n < dims.size(); ++n)
    if (bases[n].dim != dims[n] || static_cast<int>(bases[n].elements.size()) < d * d)
      throw ConfigError("product_basis_witness: basis length mismatch for particle " + std::to_string(n));
  std::vector<CMatrix> factors(dims.size());
  CMatrix op = CMatrix::Zero(dims.total(), dims.total());
  for (int mu = 0; mu < d * d; ++mu) {
    for (std::size_t n = 0; n < dims.size(); ++n) factors[n] = bases[n].elements[mu];
    op += kron(factors);
  }
  // tr(rho op) = sum_ij rho_ij op_ji
  return (rho.matrix().cwiseProduct(op.transpose())).sum().real();
}

CriterionReport exclusion_by_product_witness(double w, const std::vector<SNVector>& candidates) {
  std::vector<bool> flags;
  for (const auto& v : candidates) flags.push_back(double(v.back()) < w - 1e-9);
  auto r = make_report("product-witness", candidates, flags);
  r.witness_values["W"] = w;
  return r;
}

}  // namespace snvec
