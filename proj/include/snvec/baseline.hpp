#pragma once

#include "snvec/lattice.hpp"
#include "snvec/qudit.hpp"

#include <utility>
#include <vector>

namespace snvec {

/// C_K = sum over subsets of size >= K of ||T^(alpha)||_2^2, with T the
/// correlation tensor over SCALED su(d) generators. Requires equal local dims.
double correlation_tensor_norm(const DensityMatrix& rho, int k);

/// d^N + N - 1 - sum_n d / k_n.
double corrtensor_bound(int d, std::span<const int> ranks);

/// Single-particle rank vectors k with C_2 > bound(k) + 1e-9 are violated.
/// For three particles the single-particle cuts are all the bipartitions, so
/// a candidate v is excluded when its ranks are violated; for other N nothing
/// is excluded. witness_values carries C2 and k_1..k_N, the componentwise
/// minimum over non-violated rank vectors (sorted).
CriterionReport exclusion_by_corrtensor(const DensityMatrix& rho, const std::vector<SNVector>& candidates);

using MultiIndex = std::vector<int>;

/// Unordered pairs of computational-basis multi-indices.
struct IndexPairSet {
  int k = 1;  ///< vector component (1-based)
  std::vector<std::pair<MultiIndex, MultiIndex>> pairs;
};

/// Overall prefactor of the bound: the unordered-pair convention (2) that
/// reproduces the GHZ value, or the displayed formula (1).
enum class EntropyPrefactor { Two, One };

/// (c/sqrt|C|) [ sum_C |rho_{eta,eta'}| - min_{|R|=k} sum_C sum_{a in R}
///   sqrt(rho_{x,x} rho_{y,y}) ]  clamped at 0, where (x, y) swaps the digits
/// of eta and eta' on the particles of bipartition a. A lower bound on the
/// k-th largest bipartition linear entropy.
double linear_entropy_bound(const DensityMatrix& rho, int k, const IndexPairSet& c,
                            EntropyPrefactor prefactor = EntropyPrefactor::Two);

/// ceil(2 / (2 - B^2)) with B clamped to sqrt(2) - 1e-12.
int linear_entropy_rank(double b);

/// Default pair sets: the GHZ set for equal dims, the psi432 sets for (2,3,4).
/// Throws ConfigError for other dims.
std::vector<IndexPairSet> default_pair_sets(const Dims& dims);

/// Excludes v with v_k < linear_entropy_rank(B_k); records B_k and cgm_lower.
CriterionReport exclusion_by_linentropy(const DensityMatrix& rho, const std::vector<IndexPairSet>& pair_sets,
                                        const std::vector<SNVector>& candidates,
                                        EntropyPrefactor prefactor = EntropyPrefactor::Two);

/// Lower bound on the genuine multipartite concurrence: the bound for the
/// last component.
double gm_concurrence_lower_bound(const DensityMatrix& rho, const IndexPairSet& c,
                                  EntropyPrefactor prefactor = EntropyPrefactor::Two);

}  // namespace snvec
