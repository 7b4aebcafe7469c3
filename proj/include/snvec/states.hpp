#pragma once

#include "snvec/qudit.hpp"

#include <array>
#include <cstdint>
#include <random>
#include <span>

namespace snvec {

/// Engine for sample `index` of the stream `seed`; independent of the order in
/// which samples are drawn.
std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index);

/// (1/sqrt(d)) sum_i |i...i>.
PureState ghz_state(int d, int n_particles);

/// c1|000> + c2|111> + c3|012> + c4|123> on dims (2,3,4).
PureState psi432_state(std::span<const cplx> c);
inline const Dims kPsi432Dims{2, 3, 4};

/// Uniform on the complex unit sphere of C^n.
CVector random_unit_vector(int n, std::mt19937_64& rng);
/// Haar-random pure state.
PureState random_pure_state(const Dims& dims, std::mt19937_64& rng);
/// Random pure product state.
PureState random_product_state(const Dims& dims, std::mt19937_64& rng);

/// Haar-distributed unitary: QR of a Ginibre matrix, R's diagonal made positive.
CMatrix haar_unitary(int d, std::mt19937_64& rng);

/// Uniform point on the probability simplex (normalized exponentials).
RVector simplex_point(int n, std::mt19937_64& rng);

/// (1/d) sum_{mu < d^2} g_mu^(1) x ... x g_mu^(N) with d the smallest local
/// dimension; returned only if it is a rank-1 state, otherwise throws
/// ValidationError naming the failed check.
DensityMatrix one_uniform_state(const Dims& dims, std::span<const OperatorBasis> bases);

enum class SamplerMode { Lebesgue, FixedLambda1 };

struct SamplerConfig {
  SamplerMode mode = SamplerMode::Lebesgue;
  std::uint64_t seed = 0;
  Dims dims;
};

struct SampledDensity {
  DensityMatrix rho;
  RVector spectrum;  ///< Lambda as drawn; entry 0 is Lambda_1
};

/// rho = U Lambda U^dag, U Haar, Lambda uniform on the simplex.
SampledDensity haar_random_density(const SamplerConfig& config, std::uint64_t index);
/// Lambda_1 ~ U[0,1], the rest uniform on the simplex scaled to 1 - Lambda_1.
/// A non-negative `force_lambda1` replaces the drawn Lambda_1.
SampledDensity fixed_lambda1_density(const SamplerConfig& config, std::uint64_t index,
                                     double force_lambda1 = -1.0);
SampledDensity sample_density(const SamplerConfig& config, std::uint64_t index);

struct NoiseMix {
  double p = 1.0;
  DensityMatrix signal;
  DensityMatrix noise;
};

/// p signal + (1-p) noise; throws ValidationError for p outside [0,1] or
/// mismatched dims.
DensityMatrix mix(const NoiseMix& m);
DensityMatrix mix(double p, const DensityMatrix& signal, const DensityMatrix& noise);

/// p |psi><psi| + (1-p) 1/D.
DensityMatrix white_noise_mix(double p, const PureState& psi);

}  // namespace snvec
