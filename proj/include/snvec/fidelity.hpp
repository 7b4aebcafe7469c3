#pragma once

#include "snvec/lattice.hpp"
#include "snvec/qudit.hpp"

#include <vector>

namespace snvec {

struct SchmidtSpectrum {
  Bipartition alpha;
  std::vector<double> lambdas;  ///< squared Schmidt coefficients, non-increasing
};

std::vector<SchmidtSpectrum> schmidt_spectra(const PureState& target);

/// <psi|rho|psi>.
double fidelity(const DensityMatrix& rho, const PureState& target);

/// max over per-bipartition ranks s (s_a <= cap_a, sorted(s) <=el v) of
/// min_a sum_{i < s_a} lambda_i^(a). An upper bound on the fidelity of the
/// target with any state whose decomposition has sorted ranks <=el v.
double fidelity_bound(const std::vector<SchmidtSpectrum>& spectra, const std::vector<int>& caps,
                      const SNVector& v);
double fidelity_bound(const PureState& target, const SNVector& v);

/// Per-candidate bounds of one target, computed once and shared.
struct FidelityBoundTable {
  PureState target;
  std::vector<SNVector> candidates;
  std::vector<double> bounds;

  FidelityBoundTable(PureState target, std::vector<SNVector> candidates);
  double bound(const SNVector& v) const;
};

/// Excludes v with F(rho, target) > Fhat(v) + 1e-9.
CriterionReport exclusion_by_fidelity(const DensityMatrix& rho, const FidelityBoundTable& table);
CriterionReport exclusion_by_fidelity(double fid, const FidelityBoundTable& table);
CriterionReport exclusion_by_fidelity(const DensityMatrix& rho, const PureState& target,
                                      const std::vector<SNVector>& candidates);

}  // namespace snvec
