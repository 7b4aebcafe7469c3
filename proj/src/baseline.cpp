#include "snvec/baseline.hpp"

#include "snvec/error.hpp"
#include "snvec/states.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace snvec {

double correlation_tensor_norm(const DensityMatrix& rho, int k) {
  const Dims& dims = rho.dims();
  if (!dims.all_equal()) throw InvalidDimension("correlation_tensor_norm: unequal local dimensions");
  const auto bases = gellmann_bases(dims, Normalization::Scaled);
  const int dd = dims[0] * dims[0];
  const std::vector<int> counts(dims.size(), dd);
  const auto c = product_expectations(rho, bases, counts);
  double total = 0;
  for (std::size_t idx = 0; idx < c.size(); ++idx) {
    int weight = 0;
    for (std::size_t rest = idx; rest; rest /= static_cast<std::size_t>(dd))
      if (rest % static_cast<std::size_t>(dd)) ++weight;
    if (weight >= k) total += c[idx].real() * c[idx].real();
  }
  return total;
}

double corrtensor_bound(int d, std::span<const int> ranks) {
  const double n = double(ranks.size());
  double s = std::pow(double(d), n) + n - 1.0;
  for (int k : ranks) s -= double(d) / double(k);
  return s;
}

CriterionReport exclusion_by_corrtensor(const DensityMatrix& rho, const std::vector<SNVector>& candidates) {
  const Dims& dims = rho.dims();
  const int d = dims[0];
  const double c2 = correlation_tensor_norm(rho, 2);
  auto violated = [&](std::span<const int> k) { return c2 > corrtensor_bound(d, k) + 1e-9; };

  std::vector<bool> flags;
  for (const auto& v : candidates) {
    bool ex = false;
    if (dims.size() == 3) {
      std::vector<int> k;
      for (int x : v) k.push_back(std::min(x, d));
      ex = violated(k);
    }
    flags.push_back(ex);
  }
  auto r = make_report("corrtensor", candidates, flags);
  r.rank_semantics = "single-particle-ranks";
  r.witness_values["C2"] = c2;

  // Componentwise minimum over non-violated single-particle rank vectors.
  const std::size_t n = dims.size();
  std::vector<int> k(n, 1), kmin(n, d);
  bool any = false;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == n) {
      if (violated(k)) return;
      any = true;
      for (std::size_t j = 0; j < n; ++j) kmin[j] = std::min(kmin[j], k[j]);
      return;
    }
    for (int x = 1; x <= d; ++x) {
      k[i] = x;
      rec(i + 1);
    }
  };
  rec(0);
  if (!any) throw Inconsistency("corrtensor: every rank vector violated");
  std::sort(kmin.rbegin(), kmin.rend());
  for (std::size_t j = 0; j < n; ++j) r.witness_values["k_" + std::to_string(j + 1)] = kmin[j];
  return r;
}

namespace {

int flat_index(const Dims& dims, const MultiIndex& eta) {
  if (eta.size() != dims.size()) throw ValidationError("multi-index length mismatch");
  int idx = 0;
  for (std::size_t n = 0; n < dims.size(); ++n) {
    if (eta[n] < 0 || eta[n] >= dims[n]) throw ValidationError("multi-index digit out of range");
    idx = idx * dims[n] + eta[n];
  }
  return idx;
}

}  // namespace

double linear_entropy_bound(const DensityMatrix& rho, int k, const IndexPairSet& c, EntropyPrefactor prefactor) {
  const Dims& dims = rho.dims();
  const auto bips = enumerate_bipartitions(dims.size());
  const int m = static_cast<int>(bips.size());
  if (k < 1 || k > m) throw ValidationError("linear_entropy_bound: component out of range");
  if (c.pairs.empty()) return 0.0;
  const CMatrix& r = rho.matrix();
  auto diag = [&](const MultiIndex& e) { return std::max(0.0, r(flat_index(dims, e), flat_index(dims, e)).real()); };

  double coherent = 0;
  std::vector<double> flipped(static_cast<std::size_t>(m), 0.0);
  for (const auto& [eta, etap] : c.pairs) {
    coherent += std::abs(r(flat_index(dims, eta), flat_index(dims, etap)));
    for (int a = 0; a < m; ++a) {
      MultiIndex x = eta, y = etap;
      for (int p : bips[a].members) std::swap(x[p], y[p]);
      flipped[a] += std::sqrt(diag(x) * diag(y));
    }
  }
  // The k bipartitions with the smallest accumulated flipped terms.
  std::sort(flipped.begin(), flipped.end());
  double sub = 0;
  for (int i = 0; i < k; ++i) sub += flipped[i];
  const double pre = prefactor == EntropyPrefactor::Two ? 2.0 : 1.0;
  return std::max(0.0, pre / std::sqrt(double(c.pairs.size())) * (coherent - sub));
}

int linear_entropy_rank(double b) {
  b = std::clamp(b, 0.0, std::sqrt(2.0) - 1e-12);
  return static_cast<int>(std::ceil(2.0 / (2.0 - b * b) - 1e-9));
}

std::vector<IndexPairSet> default_pair_sets(const Dims& dims) {
  const int m = static_cast<int>(enumerate_bipartitions(dims.size()).size());
  std::vector<IndexPairSet> out;
  if (dims.all_equal()) {
    const int d = dims[0];
    IndexPairSet c;
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j)
        c.pairs.push_back({MultiIndex(dims.size(), i), MultiIndex(dims.size(), j)});
    for (int k = 1; k <= m; ++k) {
      c.k = k;
      out.push_back(c);
    }
    return out;
  }
  if (dims == kPsi432Dims) {
    const MultiIndex e000{0, 0, 0}, e111{1, 1, 1}, e012{0, 1, 2}, e123{1, 2, 3};
    out.push_back({1, {{e000, e111}, {e000, e123}, {e012, e123}, {e000, e012}, {e111, e123}, {e111, e012}}});
    out.push_back({2, {{e000, e111}, {e000, e123}, {e012, e123}, {e000, e012}, {e111, e123}}});
    out.push_back({3, {{e000, e111}, {e000, e123}, {e012, e123}}});
    return out;
  }
  throw ConfigError("no default index pair sets for dims " + dims.to_string());
}

CriterionReport exclusion_by_linentropy(const DensityMatrix& rho, const std::vector<IndexPairSet>& pair_sets,
                                        const std::vector<SNVector>& candidates, EntropyPrefactor prefactor) {
  const std::size_t m = candidates.front().size();
  if (pair_sets.size() != m) throw ConfigError("linentropy: one index pair set per component required");
  std::vector<double> b(m);
  std::vector<int> lower(m);
  for (std::size_t k = 0; k < m; ++k) {
    b[k] = linear_entropy_bound(rho, static_cast<int>(k + 1), pair_sets[k], prefactor);
    lower[k] = linear_entropy_rank(b[k]);
  }
  std::vector<bool> flags;
  for (const auto& v : candidates) {
    bool ex = false;
    for (std::size_t k = 0; k < m; ++k) ex = ex || v[k] < lower[k];
    flags.push_back(ex);
  }
  auto r = make_report("linentropy", candidates, flags);
  for (std::size_t k = 0; k < m; ++k) r.witness_values["B_" + std::to_string(k + 1)] = b[k];
  r.witness_values["cgm_lower"] = b[m - 1];
  return r;
}

double gm_concurrence_lower_bound(const DensityMatrix& rho, const IndexPairSet& c, EntropyPrefactor prefactor) {
  const int m = static_cast<int>(enumerate_bipartitions(rho.dims().size()).size());
  return linear_entropy_bound(rho, m, c, prefactor);
}

}  // namespace snvec
