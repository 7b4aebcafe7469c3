#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace snvec {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Tolerances of the state invariants.
inline constexpr double kStateTol = 1e-10;
inline constexpr double kPureNormTol = 1e-12;

/// Local dimensions of an N-qudit register. Computational basis states are
/// enumerated row-major over the particle list (particle 0 is the most
/// significant digit).
class Dims {
public:
  Dims() = default;
  explicit Dims(std::vector<int> dims);
  Dims(std::initializer_list<int> dims) : Dims(std::vector<int>(dims)) {}

  std::size_t size() const { return dims_.size(); }
  int operator[](std::size_t n) const { return dims_[n]; }
  int total() const { return total_; }
  int min() const;
  bool all_equal() const;
  const std::vector<int>& values() const { return dims_; }

  /// Product of the dimensions of the listed particles.
  int subsystem_dim(std::span<const int> particles) const;
  /// Restriction to the listed particles, in the order given.
  Dims restrict(std::span<const int> particles) const;
  /// Offsets into the full register of every joint basis state of the listed
  /// particles (row-major over the list), all other digits zero. Full indices
  /// are sums of offsets of complementary subsets.
  std::vector<int> offsets(std::span<const int> particles) const;

  std::string to_string() const;

  friend bool operator==(const Dims&, const Dims&) = default;

private:
  std::vector<int> dims_;
  int total_ = 1;
};

/// Particles not in `members`, ascending.
std::vector<int> complement(std::span<const int> members, std::size_t n_particles);

/// Validated density matrix: Hermitian, unit trace, positive semidefinite.
class DensityMatrix {
public:
  /// Validates against kStateTol; throws ValidationError naming the failed
  /// invariant. With repair=true the matrix is symmetrized, negative
  /// eigenvalues are clipped and the trace renormalized first.
  DensityMatrix(Dims dims, CMatrix matrix, bool repair = false);

  /// Maximally mixed state on `dims`.
  static DensityMatrix maximally_mixed(const Dims& dims);

  const Dims& dims() const { return dims_; }
  const CMatrix& matrix() const { return m_; }
  int dim() const { return dims_.total(); }

private:
  struct Unchecked {};
  DensityMatrix(Dims dims, CMatrix matrix, Unchecked) : dims_(std::move(dims)), m_(std::move(matrix)) {}
  friend DensityMatrix trusted_density(Dims, CMatrix);

  Dims dims_;
  CMatrix m_;
};

/// Skips validation; for matrices that are states by construction (convex
/// combinations, unitary conjugations, partial traces of valid states).
DensityMatrix trusted_density(Dims dims, CMatrix matrix);

class PureState {
public:
  /// Throws ValidationError unless the vector has unit norm to kPureNormTol.
  PureState(Dims dims, CVector amplitudes);
  /// Normalizes the vector first; throws ValidationError on a zero vector.
  static PureState normalized(Dims dims, CVector amplitudes);

  const Dims& dims() const { return dims_; }
  const CVector& amplitudes() const { return psi_; }
  DensityMatrix projector() const;

private:
  Dims dims_;
  CVector psi_;
};

enum class Normalization {
  Unit,    ///< tr(g_mu^dag g_nu) = delta_{mu nu}
  Scaled,  ///< tr(g_mu^dag g_nu) = d delta_{mu nu}
};

enum class BasisKind {
  Hermitian,    ///< element 0 is the (normalized) identity, the rest traceless
  MatrixUnits,  ///< rotated matrix units |i><j|; orthonormal but not Hermitian
};

/// Orthonormal basis of the d x d operator space of one particle.
struct OperatorBasis {
  int particle = 0;
  int dim = 0;
  Normalization normalization = Normalization::Unit;
  BasisKind kind = BasisKind::Hermitian;
  std::vector<CMatrix> elements;

  /// Gram matrix tr(g_mu^dag g_nu).
  CMatrix gram() const;
  /// Coefficients x_mu with M = sum_mu x_mu g_mu (under the declared
  /// normalization).
  CVector coefficients(const CMatrix& m) const;
  CMatrix reconstruct(const CVector& coefficients) const;
  /// Basis rotated as g -> U g U^dag.
  OperatorBasis rotated(const CMatrix& u) const;
};

/// Identity plus the d^2 - 1 generalized Gell-Mann matrices in the order
/// identity, symmetric (j<k), antisymmetric (j<k), diagonal (l = 1..d-1).
OperatorBasis gellmann_basis(int d, Normalization normalization, int particle = 0);

/// One Gell-Mann basis per particle.
std::vector<OperatorBasis> gellmann_bases(const Dims& dims, Normalization normalization);

/// Reduced state on `keep` (a nonempty proper subset, ascending order kept).
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);

/// tr(rho^2).
double purity(const DensityMatrix& rho);

/// Sum of singular values.
double trace_norm(const CMatrix& m);
double trace_norm(const RMatrix& m);

/// Coefficient matrix of a pure state across (alpha | complement): rows
/// enumerate alpha's joint basis, columns the complement's, both row-major in
/// particle order.
CMatrix bipartition_reshape(const PureState& psi, std::span<const int> alpha);

/// Kronecker product of the list, first factor most significant.
CMatrix kron(std::span<const CMatrix> factors);

/// (U_1 x ... x U_N) rho (U_1 x ... x U_N)^dag without forming the full
/// Kronecker product.
CMatrix apply_local(const CMatrix& rho, const Dims& dims, std::span<const CMatrix> unitaries);
CVector apply_local(const CVector& psi, const Dims& dims, std::span<const CMatrix> unitaries);

/// Expectation values tr(rho (g_{mu_1} x ... x g_{mu_N})) for the first
/// `counts[n]` elements of each particle's basis, flattened row-major over
/// (mu_1, ..., mu_N).
std::vector<cplx> product_expectations(const DensityMatrix& rho, std::span<const OperatorBasis> bases,
                                       std::span<const int> counts);

}  // namespace snvec
