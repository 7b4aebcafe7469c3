#include "snvec/qudit.hpp"

#include "snvec/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

namespace snvec {

Dims::Dims(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw InvalidDimension("dims: at least one particle required");
  total_ = 1;
  for (int d : dims_) {
    if (d < 2) throw InvalidDimension("dims: local dimension " + std::to_string(d) + " < 2");
    total_ *= d;
  }
}

int Dims::min() const { return *std::min_element(dims_.begin(), dims_.end()); }

bool Dims::all_equal() const {
  return std::adjacent_find(dims_.begin(), dims_.end(), std::not_equal_to<>()) == dims_.end();
}

int Dims::subsystem_dim(std::span<const int> particles) const {
  int s = 1;
  for (int p : particles) s *= dims_.at(static_cast<std::size_t>(p));
  return s;
}

Dims Dims::restrict(std::span<const int> particles) const {
  std::vector<int> out;
  for (int p : particles) out.push_back(dims_.at(static_cast<std::size_t>(p)));
  return Dims(std::move(out));
}

std::vector<int> Dims::offsets(std::span<const int> particles) const {
  std::vector<int> stride(dims_.size(), 1);
  for (int n = static_cast<int>(dims_.size()) - 2; n >= 0; --n) stride[n] = stride[n + 1] * dims_[n + 1];
  std::vector<int> out{0};
  for (int p : particles) {
    std::vector<int> next;
    next.reserve(out.size() * dims_[p]);
    for (int base : out)
      for (int i = 0; i < dims_[p]; ++i) next.push_back(base + i * stride[p]);
    out = std::move(next);
  }
  return out;
}

std::string Dims::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < dims_.size(); ++i) os << (i ? "x" : "") << dims_[i];
  return os.str();
}

std::vector<int> complement(std::span<const int> members, std::size_t n_particles) {
  std::vector<int> out;
  for (int p = 0; p < static_cast<int>(n_particles); ++p)
    if (std::find(members.begin(), members.end(), p) == members.end()) out.push_back(p);
  return out;
}

namespace {

void check_square(const Dims& dims, const CMatrix& m) {
  if (m.rows() != dims.total() || m.cols() != dims.total())
    throw ValidationError("matrix shape " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                          " does not match total dimension " + std::to_string(dims.total()));
}

CMatrix repaired(const CMatrix& m) {
  CMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  RVector ev = es.eigenvalues().cwiseMax(0.0);
  double tr = ev.sum();
  if (!(tr > 0)) throw ValidationError("repair: no positive eigenvalues");
  ev /= tr;
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

DensityMatrix::DensityMatrix(Dims dims, CMatrix matrix, bool repair) : dims_(std::move(dims)), m_(std::move(matrix)) {
  check_square(dims_, m_);
  if (!m_.allFinite()) throw ValidationError("matrix has non-finite entries");
  if (repair) m_ = repaired(m_);
  double herm = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kStateTol) throw ValidationError("not Hermitian: max deviation " + std::to_string(herm));
  cplx tr = m_.trace();
  if (std::abs(tr - 1.0) > kStateTol) throw ValidationError("trace " + std::to_string(tr.real()) + " != 1");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m_ + m_.adjoint()), Eigen::EigenvaluesOnly);
  double lo = es.eigenvalues().minCoeff();
  if (lo < -kStateTol) throw ValidationError("not positive semidefinite: eigenvalue " + std::to_string(lo));
}

DensityMatrix DensityMatrix::maximally_mixed(const Dims& dims) {
  return DensityMatrix(dims, CMatrix::Identity(dims.total(), dims.total()) / double(dims.total()), Unchecked{});
}

DensityMatrix trusted_density(Dims dims, CMatrix matrix) {
  return DensityMatrix(std::move(dims), std::move(matrix), DensityMatrix::Unchecked{});
}

PureState::PureState(Dims dims, CVector amplitudes) : dims_(std::move(dims)), psi_(std::move(amplitudes)) {
  if (psi_.size() != dims_.total())
    throw ValidationError("vector length " + std::to_string(psi_.size()) + " does not match total dimension " +
                          std::to_string(dims_.total()));
  if (std::abs(psi_.norm() - 1.0) > kPureNormTol) throw ValidationError("vector norm != 1");
}

PureState PureState::normalized(Dims dims, CVector amplitudes) {
  double n = amplitudes.norm();
  if (!(n > 0)) throw ValidationError("zero vector cannot be normalized");
  return PureState(std::move(dims), amplitudes / n);
}

DensityMatrix PureState::projector() const { return trusted_density(dims_, psi_ * psi_.adjoint()); }

CMatrix OperatorBasis::gram() const {
  const auto n = static_cast<Eigen::Index>(elements.size());
  CMatrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = (elements[i].adjoint() * elements[j]).trace();
  return g;
}

CVector OperatorBasis::coefficients(const CMatrix& m) const {
  const double scale = normalization == Normalization::Unit ? 1.0 : double(dim);
  CVector x(static_cast<Eigen::Index>(elements.size()));
  for (std::size_t i = 0; i < elements.size(); ++i) x[i] = (elements[i].adjoint() * m).trace() / scale;
  return x;
}

CMatrix OperatorBasis::reconstruct(const CVector& coefficients) const {
  CMatrix m = CMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < elements.size(); ++i) m += coefficients[i] * elements[i];
  return m;
}

OperatorBasis OperatorBasis::rotated(const CMatrix& u) const {
  OperatorBasis b = *this;
  for (auto& g : b.elements) g = u * g * u.adjoint();
  return b;
}

OperatorBasis gellmann_basis(int d, Normalization normalization, int particle) {
  if (d < 2) throw InvalidDimension("gellmann_basis: d = " + std::to_string(d) + " < 2");
  OperatorBasis b;
  b.particle = particle;
  b.dim = d;
  b.normalization = normalization;
  b.kind = BasisKind::Hermitian;
  const double s = normalization == Normalization::Unit ? 1.0 : std::sqrt(double(d));
  const double r2 = 1.0 / std::sqrt(2.0);
  b.elements.push_back(CMatrix::Identity(d, d) * (s / std::sqrt(double(d))));
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      CMatrix g = CMatrix::Zero(d, d);
      g(j, k) = g(k, j) = s * r2;
      b.elements.push_back(g);
    }
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      CMatrix g = CMatrix::Zero(d, d);
      g(j, k) = cplx(0, -s * r2);
      g(k, j) = cplx(0, s * r2);
      b.elements.push_back(g);
    }
  for (int l = 1; l < d; ++l) {
    CMatrix g = CMatrix::Zero(d, d);
    const double c = s / std::sqrt(double(l) * (l + 1));
    for (int j = 0; j < l; ++j) g(j, j) = c;
    g(l, l) = -c * l;
    b.elements.push_back(g);
  }
  return b;
}

std::vector<OperatorBasis> gellmann_bases(const Dims& dims, Normalization normalization) {
  std::vector<OperatorBasis> out;
  for (std::size_t n = 0; n < dims.size(); ++n)
    out.push_back(gellmann_basis(dims[n], normalization, static_cast<int>(n)));
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  const Dims& dims = rho.dims();
  const std::size_t n = dims.size();
  if (keep.empty() || keep.size() >= n) throw InvalidPartition("partial_trace: keep must be a nonempty proper subset");
  std::vector<int> seen(keep.begin(), keep.end());
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end() || seen.front() < 0 ||
      seen.back() >= static_cast<int>(n))
    throw InvalidPartition("partial_trace: invalid particle list");
  const auto rest = complement(keep, n);
  const auto ok = dims.offsets(keep);
  const auto ot = dims.offsets(rest);
  const auto dk = static_cast<Eigen::Index>(ok.size());
  const CMatrix& m = rho.matrix();
  CMatrix out = CMatrix::Zero(dk, dk);
  for (Eigen::Index a = 0; a < dk; ++a)
    for (Eigen::Index b = 0; b < dk; ++b) {
      cplx s = 0;
      for (int t : ot) s += m(ok[a] + t, ok[b] + t);
      out(a, b) = s;
    }
  return trusted_density(dims.restrict(keep), std::move(out));
}

double purity(const DensityMatrix& rho) {
  // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
  return rho.matrix().squaredNorm();
}

double trace_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<CMatrix>(m).singularValues().sum();
}

double trace_norm(const RMatrix& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<RMatrix>(m).singularValues().sum();
}

CMatrix bipartition_reshape(const PureState& psi, std::span<const int> alpha) {
  const Dims& dims = psi.dims();
  if (alpha.empty() || alpha.size() >= dims.size()) throw InvalidPartition("bipartition_reshape: invalid alpha");
  const auto rest = complement(alpha, dims.size());
  const auto oa = dims.offsets(alpha);
  const auto ob = dims.offsets(rest);
  CMatrix m(static_cast<Eigen::Index>(oa.size()), static_cast<Eigen::Index>(ob.size()));
  for (std::size_t a = 0; a < oa.size(); ++a)
    for (std::size_t b = 0; b < ob.size(); ++b) m(a, b) = psi.amplitudes()[oa[a] + ob[b]];
  return m;
}

CMatrix kron(std::span<const CMatrix> factors) {
  CMatrix out = CMatrix::Ones(1, 1);
  for (const auto& f : factors) {
    CMatrix next(out.rows() * f.rows(), out.cols() * f.cols());
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      for (Eigen::Index j = 0; j < out.cols(); ++j)
        next.block(i * f.rows(), j * f.cols(), f.rows(), f.cols()) = out(i, j) * f;
    out = std::move(next);
  }
  return out;
}

namespace {

// Applies `u` to the mode of extent shape[n] of the row index of `m`
// (row index row-major over `shape`), for every column.
CMatrix mode_product(const CMatrix& m, const std::vector<int>& shape, std::size_t n, const CMatrix& u) {
  Eigen::Index left = 1, right = 1;
  for (std::size_t i = 0; i < n; ++i) left *= shape[i];
  for (std::size_t i = n + 1; i < shape.size(); ++i) right *= shape[i];
  const Eigen::Index din = shape[n], dout = u.rows();
  CMatrix out = CMatrix::Zero(left * dout * right, m.cols());
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index l = 0; l < left; ++l)
      for (Eigen::Index i = 0; i < dout; ++i)
        for (Eigen::Index j = 0; j < din; ++j) {
          const cplx uij = u(i, j);
          if (uij == cplx(0)) continue;
          const Eigen::Index src = (l * din + j) * right, dst = (l * dout + i) * right;
          for (Eigen::Index r = 0; r < right; ++r) out(dst + r, c) += uij * m(src + r, c);
        }
  return out;
}

CMatrix apply_rows(const CMatrix& m, const Dims& dims, std::span<const CMatrix> unitaries) {
  if (unitaries.size() != dims.size()) throw InvalidDimension("apply_local: one unitary per particle required");
  CMatrix out = m;
  for (std::size_t n = 0; n < dims.size(); ++n) {
    if (unitaries[n].rows() != dims[n] || unitaries[n].cols() != dims[n])
      throw InvalidDimension("apply_local: unitary shape mismatch");
    out = mode_product(out, dims.values(), n, unitaries[n]);
  }
  return out;
}

}  // namespace

CMatrix apply_local(const CMatrix& rho, const Dims& dims, std::span<const CMatrix> unitaries) {
  CMatrix x = apply_rows(rho, dims, unitaries);
  CMatrix y = apply_rows(x.adjoint(), dims, unitaries);
  return y.adjoint();
}

CVector apply_local(const CVector& psi, const Dims& dims, std::span<const CMatrix> unitaries) {
  return apply_rows(psi, dims, unitaries);
}

std::vector<cplx> product_expectations(const DensityMatrix& rho, std::span<const OperatorBasis> bases,
                                       std::span<const int> counts) {
  const Dims& dims = rho.dims();
  const std::size_t n = dims.size();
  if (bases.size() != n || counts.size() != n)
    throw InvalidDimension("product_expectations: one basis and count per particle required");
  // Regroup rho into a tensor with one combined index (a_n, b_n) per particle.
  std::vector<int> shape(n);
  for (std::size_t i = 0; i < n; ++i) shape[i] = dims[i] * dims[i];
  std::vector<int> stride(n, 1);
  for (int i = static_cast<int>(n) - 2; i >= 0; --i) stride[i] = stride[i + 1] * dims[i + 1];
  const int big = dims.total();
  CMatrix t(static_cast<Eigen::Index>(big) * big, 1);
  for (int a = 0; a < big; ++a)
    for (int b = 0; b < big; ++b) {
      Eigen::Index idx = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const int an = (a / stride[i]) % dims[i], bn = (b / stride[i]) % dims[i];
        idx = idx * shape[i] + an * dims[i] + bn;
      }
      t(idx, 0) = rho.matrix()(a, b);
    }
  for (std::size_t i = 0; i < n; ++i) {
    const int d = dims[i];
    if (bases[i].dim != d || counts[i] < 1 || counts[i] > static_cast<int>(bases[i].elements.size()))
      throw InvalidDimension("product_expectations: basis/count mismatch for particle " + std::to_string(i));
    // tr(rho_part g) = sum_{a,b} rho[a,b] g[b,a]
    CMatrix g(counts[i], d * d);
    for (int mu = 0; mu < counts[i]; ++mu)
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) g(mu, a * d + b) = bases[i].elements[mu](b, a);
    t = mode_product(t, shape, i, g);
    shape[i] = counts[i];
  }
  return std::vector<cplx>(t.data(), t.data() + t.size());
}

}  // namespace snvec
