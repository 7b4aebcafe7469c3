#pragma once

#include "snvec/lattice.hpp"
#include "snvec/qudit.hpp"

#include <span>
#include <vector>

namespace snvec {

/// Covariances <g_K x g_L> - <g_K><g_L> between product UNIT bases of the two
/// blocks; rows and columns row-major over the members' basis indices.
struct CrossCovariance {
  Bipartition alpha;
  RMatrix matrix;
};

/// Throws ConfigError unless every basis is a UNIT Hermitian basis.
CrossCovariance cross_covariance(const DensityMatrix& rho, const Bipartition& alpha,
                                 std::span<const OperatorBasis> bases);

/// tr|X| - sqrt((1 - tr rho_a^2)(1 - tr rho_b^2)) + 1. Computed from the
/// realignment of rho - rho_a x rho_b, which has the singular values of X.
double f_value(const DensityMatrix& rho, const Bipartition& alpha);
/// f for every canonical bipartition.
std::vector<double> f_values(const DensityMatrix& rho);

/// Excludes v unless some R >= f is majorized by v; records f_<k> and
/// sn1_lower = ceil(max f).
CriterionReport exclusion_by_system(const DensityMatrix& rho, const std::vector<SNVector>& candidates);
CriterionReport exclusion_by_system(std::span<const double> f, const std::vector<SNVector>& candidates);

/// W = sum_{mu < d^2} <g_mu^(1) x ... x g_mu^(N)>, d the smallest local
/// dimension. Real part; the imaginary part vanishes for Hermitian bases and
/// for matrix-unit bases summed over all (i,j).
double product_basis_witness(const DensityMatrix& rho, std::span<const OperatorBasis> bases);

/// Excludes v with v_last < W - 1e-9.
CriterionReport exclusion_by_product_witness(double w, const std::vector<SNVector>& candidates);

}  // namespace snvec
