#include "snvec/optimizer.hpp"

#include "snvec/error.hpp"
#include "snvec/states.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace snvec {

LocalFrame LocalFrame::identity(const Dims& dims) {
  LocalFrame f;
  for (std::size_t n = 0; n < dims.size(); ++n) f.unitaries.push_back(CMatrix::Identity(dims[n], dims[n]));
  return f;
}

CVector LocalFrame::apply(const Dims& dims, const CVector& psi) const { return apply_local(psi, dims, unitaries); }

DensityMatrix LocalFrame::pull_back(const DensityMatrix& rho) const {
  std::vector<CMatrix> adj;
  for (const auto& u : unitaries) adj.push_back(u.adjoint());
  return trusted_density(rho.dims(), apply_local(rho.matrix(), rho.dims(), adj));
}

std::vector<OperatorBasis> canonical_ghz_bases(int d, int n_particles) {
  if (d < 2 || n_particles < 2) throw InvalidDimension("canonical_ghz_bases: need d >= 2 and N >= 2");
  std::vector<OperatorBasis> out;
  if (n_particles == 2) {
    out.push_back(gellmann_basis(d, Normalization::Unit, 0));
    OperatorBasis b = gellmann_basis(d, Normalization::Unit, 1);
    for (auto& g : b.elements) g = g.conjugate().eval();
    out.push_back(std::move(b));
  } else {
    for (int n = 0; n < n_particles; ++n)
      out.push_back(frame_bases(Dims(std::vector<int>(1, d)), LocalFrame::identity(Dims(std::vector<int>(1, d))))[0]);
    for (int n = 0; n < n_particles; ++n) out[n].particle = n;
  }
  const Dims dims(std::vector<int>(static_cast<std::size_t>(n_particles), d));
  const auto rho = one_uniform_state(dims, out);  // throws if the construction fails
  const CVector g = ghz_state(d, n_particles).amplitudes();
  if ((rho.matrix() - g * g.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw Error("canonical_ghz_bases: reconstruction check failed");
  return out;
}

std::vector<OperatorBasis> frame_bases(const Dims& dims, const LocalFrame& frame) {
  const int d = dims.size() == 1 ? dims[0] : dims.min();
  std::vector<OperatorBasis> out;
  for (std::size_t n = 0; n < dims.size(); ++n) {
    const int dn = dims[n];
    OperatorBasis b;
    b.particle = static_cast<int>(n);
    b.dim = dn;
    b.normalization = Normalization::Unit;
    b.kind = BasisKind::MatrixUnits;
    auto push = [&](int i, int j) {
      CMatrix e = CMatrix::Zero(dn, dn);
      e(i, j) = 1.0;
      b.elements.push_back(frame.unitaries[n] * e * frame.unitaries[n].adjoint());
    };
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) push(i, j);
    for (int i = 0; i < dn; ++i)
      for (int j = 0; j < dn; ++j)
        if (i >= d || j >= d) push(i, j);
    out.push_back(std::move(b));
  }
  return out;
}

namespace {

// sum_{i<d} U_1[:,i] x ... x U_N[:,i]  (norm sqrt(d))
CVector frame_vector(const Dims& dims, const std::vector<CMatrix>& u, int d) {
  CVector psi = CVector::Zero(dims.total());
  for (int i = 0; i < d; ++i) {
    CVector t = CVector::Ones(1);
    for (std::size_t n = 0; n < dims.size(); ++n) {
      CVector next(t.size() * dims[n]);
      for (Eigen::Index a = 0; a < t.size(); ++a) next.segment(a * dims[n], dims[n]) = t[a] * u[n].col(i);
      t = std::move(next);
    }
    psi += t;
  }
  return psi;
}

// Unitary whose first columns are the orthonormal columns of v.
CMatrix complete_unitary(const CMatrix& v) {
  const Eigen::Index n = v.rows(), k = v.cols();
  if (k == n) return v;
  CMatrix m(n, n);
  m << v, CMatrix::Identity(n, n).leftCols(n - k);
  Eigen::HouseholderQR<CMatrix> qr(m);
  CMatrix q = qr.householderQ();
  // Restore the exact leading columns (QR may change their phases).
  q.leftCols(k) = v;
  // Re-orthonormalize the completion against v.
  for (Eigen::Index j = k; j < n; ++j) {
    CVector c = q.col(j);
    for (Eigen::Index i = 0; i < j; ++i) c -= q.col(i).dot(c) * q.col(i);
    q.col(j) = c / c.norm();
  }
  return q;
}

// Nearest isometry (polar factor) of a tall matrix.
CMatrix polar(const CMatrix& g) {
  Eigen::JacobiSVD<CMatrix> svd(g, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

double witness_of(const DensityMatrix& rho, const CVector& psi) { return psi.dot(rho.matrix() * psi).real(); }

}  // namespace

double frame_witness(const DensityMatrix& rho, const LocalFrame& frame) {
  return witness_of(rho, frame_vector(rho.dims(), frame.unitaries, rho.dims().min()));
}

LocalFrame ascend_witness(const DensityMatrix& rho, LocalFrame frame, int max_sweeps, double tol) {
  const Dims& dims = rho.dims();
  const int d = dims.min();
  const std::size_t n = dims.size();
  std::vector<std::vector<int>> off_self(n), off_rest(n);
  for (std::size_t m = 0; m < n; ++m) {
    const std::vector<int> self{static_cast<int>(m)};
    const auto rest = complement(self, n);
    off_self[m] = dims.offsets(self);
    off_rest[m] = dims.offsets(rest);
  }
  CVector psi = frame_vector(dims, frame.unitaries, d);
  double w = witness_of(rho, psi);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const double w_start = w;
    for (std::size_t m = 0; m < n; ++m) {
      const CVector chi = rho.matrix() * psi;
      // Column i: contraction of chi with the other particles' i-th columns.
      CMatrix g(dims[m], d);
      for (int i = 0; i < d; ++i) {
        CVector phi = CVector::Ones(1);
        for (std::size_t q = 0; q < n; ++q) {
          if (q == m) continue;
          CVector next(phi.size() * dims[q]);
          for (Eigen::Index a = 0; a < phi.size(); ++a) next.segment(a * dims[q], dims[q]) = phi[a] * frame.unitaries[q].col(i);
          phi = std::move(next);
        }
        for (int a = 0; a < dims[m]; ++a) {
          cplx s = 0;
          for (std::size_t r = 0; r < off_rest[m].size(); ++r) s += std::conj(phi[r]) * chi[off_self[m][a] + off_rest[m][r]];
          g(a, i) = s;
        }
      }
      if (g.norm() < 1e-14) continue;  // degenerate block: keep the prior basis
      CMatrix v = polar(g);
      CMatrix trial = complete_unitary(v);
      std::vector<CMatrix> u = frame.unitaries;
      u[m] = trial;
      CVector psi_new = frame_vector(dims, u, d);
      const double w_new = witness_of(rho, psi_new);
      if (w_new >= w) {
        frame.unitaries = std::move(u);
        psi = std::move(psi_new);
        w = w_new;
      }
    }
    if (w - w_start <= tol) break;
  }
  return frame;
}

namespace {

// Frame read off a rank-d CP fit of the dominant eigenvector (three particles,
// equal dims): simultaneous diagonalization of two slice contractions.
bool tensor_frame(const DensityMatrix& rho, LocalFrame& out) {
  const Dims& dims = rho.dims();
  if (dims.size() != 3 || !dims.all_equal()) return false;
  const int d = dims[0];
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix());
  const RVector& ev = es.eigenvalues();
  const Eigen::Index top = ev.size() - 1;
  if (ev[top] - ev[top - 1] < 1e-9) return false;
  const CVector v = es.eigenvectors().col(top);
  auto t = [&](int a, int b, int c) { return v[(a * d + b) * d + c]; };
  // Fixed, generic contraction weights keep the construction deterministic.
  CMatrix m1 = CMatrix::Zero(d, d), m2 = CMatrix::Zero(d, d);
  for (int c = 0; c < d; ++c) {
    const double w1 = std::cos(0.7 + 1.3 * c), w2 = std::sin(0.3 + 2.1 * c);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        m1(a, b) += w1 * t(a, b, c);
        m2(a, b) += w2 * t(a, b, c);
      }
  }
  Eigen::FullPivLU<CMatrix> lu(m2);
  if (!lu.isInvertible()) return false;
  Eigen::ComplexEigenSolver<CMatrix> ces(m1 * lu.inverse());
  if (ces.info() != Eigen::Success) return false;
  CMatrix a = ces.eigenvectors();
  Eigen::FullPivLU<CMatrix> alu(a);
  if (!alu.isInvertible()) return false;
  const CMatrix ainv = alu.inverse();
  CMatrix b(d, d), c(d, d);
  for (int i = 0; i < d; ++i) {
    CMatrix slice = CMatrix::Zero(d, d);  // sum_a ainv(i,a) T[a,:,:] = b_i c_i^T
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y)
        for (int z = 0; z < d; ++z) slice(y, z) += ainv(i, x) * t(x, y, z);
    Eigen::JacobiSVD<CMatrix> svd(slice, Eigen::ComputeFullU | Eigen::ComputeFullV);
    b.col(i) = svd.matrixU().col(0);
    c.col(i) = svd.matrixV().col(0).conjugate();
  }
  for (int i = 0; i < d; ++i) a.col(i).normalize();
  out.unitaries = {polar(a), polar(b), polar(c)};
  return true;
}

}  // namespace

LocalFrame svd_initial_frame(const DensityMatrix& rho) {
  LocalFrame best = ascend_witness(rho, LocalFrame::identity(rho.dims()));
  double wbest = frame_witness(rho, best);
  LocalFrame t;
  if (tensor_frame(rho, t)) {
    t = ascend_witness(rho, std::move(t));
    const double wt = frame_witness(rho, t);
    if (wt > wbest + 1e-12) {
      best = std::move(t);
      wbest = wt;
    }
  }
  return best;
}

CMatrix hermitian_from_params(const double* theta, int d) {
  CMatrix h = CMatrix::Zero(d, d);
  int p = 0;
  for (int i = 0; i < d; ++i) h(i, i) = theta[p++];
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const cplx z(theta[p], theta[p + 1]);
      p += 2;
      h(i, j) = z;
      h(j, i) = std::conj(z);
    }
  return h;
}

CMatrix unitary_exp(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  CVector phases(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i) phases[i] = std::exp(cplx(0, es.eigenvalues()[i]));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

double frame_objective(const DensityMatrix& rho, const LocalFrame& frame, const OptimizerConfig& config,
                       const IndexPairSet* pairs) {
  if (config.objective == Objective::ProductWitness) return frame_witness(rho, frame);
  if (!pairs) throw ConfigError("frame_objective: linear-entropy objective needs an index pair set");
  const int m = static_cast<int>((1u << (rho.dims().size() - 1)) - 1);
  return linear_entropy_bound(frame.pull_back(rho), m, *pairs);
}

LocalFrame refine_frame(const DensityMatrix& rho, const LocalFrame& init, const OptimizerConfig& config,
                        const IndexPairSet* pairs, std::vector<double>* history) {
  if (config.max_evals <= 0) return init;
  const Dims& dims = rho.dims();
  std::vector<int> start;
  int np = 0;
  for (std::size_t n = 0; n < dims.size(); ++n) {
    start.push_back(np);
    np += dims[n] * dims[n];
  }
  auto frame_at = [&](const Eigen::VectorXd& x) {
    LocalFrame f = init;
    for (std::size_t n = 0; n < dims.size(); ++n)
      f.unitaries[n] = init.unitaries[n] * unitary_exp(hermitian_from_params(x.data() + start[n], dims[n]));
    return f;
  };
  int evals = 0;
  double best_val = frame_objective(rho, init, config, pairs);
  Eigen::VectorXd best_x = Eigen::VectorXd::Zero(np);
  auto eval = [&](const Eigen::VectorXd& x) {
    const double v = frame_objective(rho, frame_at(x), config, pairs);
    ++evals;
    if (v > best_val) {
      best_val = v;
      best_x = x;
    }
    if (history) history->push_back(best_val);
    return -v;  // minimize
  };

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> sign(-1.0, 1.0);
  double step = 0.2;
  for (int round = 0; round <= std::max(0, config.restarts) && evals < config.max_evals; ++round) {
    // Simplex around the best point; restarts use randomly signed axes.
    std::vector<Eigen::VectorXd> x(np + 1, best_x);
    std::vector<double> fx(np + 1);
    fx[0] = -best_val;
    for (int i = 0; i < np && evals < config.max_evals; ++i) {
      x[i + 1][i] += round == 0 ? step : (sign(rng) < 0 ? -step : step);
      fx[i + 1] = eval(x[i + 1]);
    }
    if (evals >= config.max_evals) break;
    std::vector<int> idx(np + 1);
    while (evals < config.max_evals) {
      std::iota(idx.begin(), idx.end(), 0);
      std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fx[a] < fx[b]; });
      const int lo = idx.front(), hi = idx.back(), nh = idx[np - 1];
      double size = 0;
      for (int i = 0; i <= np; ++i) size = std::max(size, (x[i] - x[lo]).cwiseAbs().maxCoeff());
      if (size < config.step_tol) break;
      Eigen::VectorXd centroid = Eigen::VectorXd::Zero(np);
      for (int i = 0; i <= np; ++i)
        if (i != hi) centroid += x[i];
      centroid /= double(np);
      const Eigen::VectorXd xr = centroid + (centroid - x[hi]);
      const double fr = eval(xr);
      if (fr < fx[lo]) {
        const Eigen::VectorXd xe = centroid + 2.0 * (centroid - x[hi]);
        const double fe = evals < config.max_evals ? eval(xe) : fr + 1;
        if (fe < fr) {
          x[hi] = xe;
          fx[hi] = fe;
        } else {
          x[hi] = xr;
          fx[hi] = fr;
        }
      } else if (fr < fx[nh]) {
        x[hi] = xr;
        fx[hi] = fr;
      } else {
        const bool outside = fr < fx[hi];
        const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                                           : Eigen::VectorXd(centroid + 0.5 * (x[hi] - centroid));
        const double fc = eval(xc);
        if (fc < (outside ? fr : fx[hi])) {
          x[hi] = xc;
          fx[hi] = fc;
        } else {
          for (int i = 0; i <= np && evals < config.max_evals; ++i) {
            if (i == lo) continue;
            x[i] = x[lo] + 0.5 * (x[i] - x[lo]);
            fx[i] = eval(x[i]);
          }
        }
      }
    }
    step *= 0.5;
  }
  return best_val > frame_objective(rho, init, config, pairs) ? frame_at(best_x) : init;
}

LocalFrame optimize_frame(const DensityMatrix& rho, const OptimizerConfig& config, std::mt19937_64& rng) {
  LocalFrame best = svd_initial_frame(rho);
  double wbest = frame_witness(rho, best);
  for (int r = 0; r < config.restarts; ++r) {
    LocalFrame f;
    for (std::size_t n = 0; n < rho.dims().size(); ++n) f.unitaries.push_back(haar_unitary(rho.dims()[n], rng));
    f = ascend_witness(rho, std::move(f));
    const double w = frame_witness(rho, f);
    if (w > wbest + 1e-12) {
      best = std::move(f);
      wbest = w;
    }
  }
  if (config.objective == Objective::ProductWitness) best = refine_frame(rho, best, config);
  return best;
}

}  // namespace snvec
