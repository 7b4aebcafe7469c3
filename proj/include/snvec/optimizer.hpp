#pragma once

#include "snvec/baseline.hpp"
#include "snvec/qudit.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace snvec {

/// Per-particle unitaries; the frame maps reference basis elements g to
/// U g U^dag and computational kets |i> to U|i>.
struct LocalFrame {
  std::vector<CMatrix> unitaries;

  static LocalFrame identity(const Dims& dims);
  /// U_1 x ... x U_N applied to a vector.
  CVector apply(const Dims& dims, const CVector& psi) const;
  /// rho expressed in the frame's basis: U^dag rho U.
  DensityMatrix pull_back(const DensityMatrix& rho) const;
};

enum class Objective { ProductWitness, LinearEntropy };

struct OptimizerConfig {
  int max_evals = 2000;
  int restarts = 4;
  double step_tol = 1e-6;
  Objective objective = Objective::ProductWitness;
  std::uint64_t seed = 0;
};

/// UNIT bases with (1/d) sum_mu g_mu^(x N) = |GHZ_d><GHZ_d|. For N = 2 these
/// are Hermitian (Gell-Mann and its complex conjugate); for N >= 3 no
/// Hermitian family exists and matrix units |i><j| are used.
std::vector<OperatorBasis> canonical_ghz_bases(int d, int n_particles);

/// Matrix-unit bases (on the first d levels of each particle, d the smallest
/// local dimension) rotated by the frame. Their product witness equals
/// d <GHZ_d|U^dag rho U|GHZ_d>.
std::vector<OperatorBasis> frame_bases(const Dims& dims, const LocalFrame& frame);

/// Product witness of the frame bases, via the fidelity form.
double frame_witness(const DensityMatrix& rho, const LocalFrame& frame);

/// Alternating polar updates U_n <- polar(dW/dU_n^*), each an SVD of the
/// particle's block of the witness gradient; W never decreases.
LocalFrame ascend_witness(const DensityMatrix& rho, LocalFrame frame, int max_sweeps = 200, double tol = 1e-10);

/// Deterministic starting frame: the better of the identity and a frame read
/// off the dominant eigenvector (simultaneous diagonalization of its slices,
/// three particles with equal dims only), each polished by ascend_witness.
/// Degenerate inputs keep the identity.
LocalFrame svd_initial_frame(const DensityMatrix& rho);

/// Objective value of a frame.
double frame_objective(const DensityMatrix& rho, const LocalFrame& frame, const OptimizerConfig& config,
                       const IndexPairSet* pairs = nullptr);

/// Nelder-Mead over U_n = U_n^init exp(i H(theta_n)), d_n^2 angles per
/// particle, maximizing the configured objective. Restarts re-seed the simplex
/// around the best point. `history`, if given, receives the best value after
/// every evaluation (non-decreasing).
LocalFrame refine_frame(const DensityMatrix& rho, const LocalFrame& init, const OptimizerConfig& config,
                        const IndexPairSet* pairs = nullptr, std::vector<double>* history = nullptr);

/// Full pipeline used by the benches: svd_initial_frame, then
/// `config.restarts` random Haar starts polished by ascend_witness, then
/// refine_frame on the best.
LocalFrame optimize_frame(const DensityMatrix& rho, const OptimizerConfig& config, std::mt19937_64& rng);

/// Hermitian d x d matrix from d^2 real parameters (diagonal, then real and
/// imaginary parts of the upper triangle).
CMatrix hermitian_from_params(const double* theta, int d);
/// exp(i H) for Hermitian H.
CMatrix unitary_exp(const CMatrix& h);

}  // namespace snvec
