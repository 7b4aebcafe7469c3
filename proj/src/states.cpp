#include "snvec/states.hpp"

#include "snvec/error.hpp"

#include <cmath>

namespace snvec {

std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(0x5e5eu)};
  return std::mt19937_64(seq);
}

PureState ghz_state(int d, int n_particles) {
  if (d < 2 || n_particles < 2) throw InvalidDimension("ghz_state: need d >= 2 and N >= 2");
  Dims dims(std::vector<int>(static_cast<std::size_t>(n_particles), d));
  CVector psi = CVector::Zero(dims.total());
  // |i...i> sits at i * (d^N - 1) / (d - 1)
  const int step = (dims.total() - 1) / (d - 1);
  for (int i = 0; i < d; ++i) psi[i * step] = 1.0 / std::sqrt(double(d));
  return PureState(dims, psi);
}

PureState psi432_state(std::span<const cplx> c) {
  if (c.size() != 4) throw ValidationError("psi432_state: four coefficients required");
  double norm2 = 0;
  for (auto x : c) norm2 += std::norm(x);
  if (std::abs(std::sqrt(norm2) - 1.0) > kPureNormTol) throw ValidationError("psi432_state: coefficients not a unit vector");
  const Dims& dims = kPsi432Dims;
  CVector psi = CVector::Zero(dims.total());
  auto at = [&](int a, int b, int cc) { return (a * 3 + b) * 4 + cc; };
  psi[at(0, 0, 0)] += c[0];
  psi[at(1, 1, 1)] += c[1];
  psi[at(0, 1, 2)] += c[2];
  psi[at(1, 2, 3)] += c[3];
  return PureState(dims, psi);
}

CVector random_unit_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CVector v(n);
  for (int i = 0; i < n; ++i) {
    const double re = g(rng);
    const double im = g(rng);
    v[i] = cplx(re, im);
  }
  return v / v.norm();
}

PureState random_pure_state(const Dims& dims, std::mt19937_64& rng) {
  return PureState::normalized(dims, random_unit_vector(dims.total(), rng));
}

PureState random_product_state(const Dims& dims, std::mt19937_64& rng) {
  CVector psi = CVector::Ones(1);
  for (std::size_t n = 0; n < dims.size(); ++n) {
    CVector f = random_unit_vector(dims[n], rng);
    CVector next(psi.size() * f.size());
    for (Eigen::Index i = 0; i < psi.size(); ++i) next.segment(i * f.size(), f.size()) = psi[i] * f;
    psi = std::move(next);
  }
  return PureState::normalized(dims, psi);
}

CMatrix haar_unitary(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix z(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) {
      const double re = g(rng);
      const double im = g(rng);
      z(i, j) = cplx(re, im);
    }
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const auto& r = qr.matrixQR();
  for (int j = 0; j < d; ++j) {
    const cplx rjj = r(j, j);
    const double a = std::abs(rjj);
    if (a > 0) q.col(j) *= rjj / a;
  }
  return q;
}

RVector simplex_point(int n, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  RVector x(n);
  for (int i = 0; i < n; ++i) x[i] = e(rng);
  return x / x.sum();
}

DensityMatrix one_uniform_state(const Dims& dims, std::span<const OperatorBasis> bases) {
  if (bases.size() != dims.size()) throw InvalidDimension("one_uniform_state: one basis per particle required");
  const int d = dims.min();
  for (std::size_t n = 0; n < dims.size(); ++n)
    if (bases[n].dim != dims[n] || static_cast<int>(bases[n].elements.size()) < d * d)
      throw InvalidDimension("one_uniform_state: basis of particle " + std::to_string(n) + " too small");
  CMatrix sum = CMatrix::Zero(dims.total(), dims.total());
  std::vector<CMatrix> factors(dims.size());
  for (int mu = 0; mu < d * d; ++mu) {
    for (std::size_t n = 0; n < dims.size(); ++n) factors[n] = bases[n].elements[mu];
    sum += kron(factors);
  }
  sum /= double(d);
  try {
    DensityMatrix rho(dims, sum);
    if (std::abs(purity(rho) - 1.0) > 1e-8) throw ValidationError("not rank 1 (purity " + std::to_string(purity(rho)) + ")");
    return rho;
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("one_uniform_state: not a state: ") + e.what());
  }
}

namespace {

SampledDensity assemble(const Dims& dims, RVector lambda, std::mt19937_64& rng) {
  CMatrix u = haar_unitary(dims.total(), rng);
  CMatrix m = u * lambda.cast<cplx>().asDiagonal() * u.adjoint();
  m = 0.5 * (m + m.adjoint());
  return {trusted_density(dims, std::move(m)), std::move(lambda)};
}

}  // namespace

SampledDensity haar_random_density(const SamplerConfig& config, std::uint64_t index) {
  auto rng = sample_rng(config.seed, index);
  RVector lambda = simplex_point(config.dims.total(), rng);
  return assemble(config.dims, std::move(lambda), rng);
}

SampledDensity fixed_lambda1_density(const SamplerConfig& config, std::uint64_t index, double force_lambda1) {
  auto rng = sample_rng(config.seed, index);
  const int n = config.dims.total();
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double l1 = u01(rng);
  if (force_lambda1 >= 0.0) {
    if (force_lambda1 > 1.0) throw ValidationError("fixed_lambda1_density: Lambda_1 > 1");
    l1 = force_lambda1;
  }
  RVector lambda(n);
  lambda[0] = l1;
  lambda.tail(n - 1) = simplex_point(n - 1, rng) * (1.0 - l1);
  return assemble(config.dims, std::move(lambda), rng);
}

SampledDensity sample_density(const SamplerConfig& config, std::uint64_t index) {
  return config.mode == SamplerMode::Lebesgue ? haar_random_density(config, index)
                                              : fixed_lambda1_density(config, index);
}

DensityMatrix mix(double p, const DensityMatrix& signal, const DensityMatrix& noise) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("mix: p = " + std::to_string(p) + " outside [0,1]");
  if (!(signal.dims() == noise.dims())) throw ValidationError("mix: dims mismatch");
  return trusted_density(signal.dims(), p * signal.matrix() + (1.0 - p) * noise.matrix());
}

DensityMatrix mix(const NoiseMix& m) { return mix(m.p, m.signal, m.noise); }

DensityMatrix white_noise_mix(double p, const PureState& psi) {
  return mix(p, psi.projector(), DensityMatrix::maximally_mixed(psi.dims()));
}

}  // namespace snvec
