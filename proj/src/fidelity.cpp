#include "snvec/fidelity.hpp"

#include "snvec/error.hpp"

#include <algorithm>
#include <functional>

namespace snvec {

std::vector<SchmidtSpectrum> schmidt_spectra(const PureState& target) {
  std::vector<SchmidtSpectrum> out;
  for (const auto& b : enumerate_bipartitions(target.dims().size())) {
    CMatrix m = bipartition_reshape(target, b.members);
    RVector s = Eigen::JacobiSVD<CMatrix>(m).singularValues();
    std::vector<double> l(static_cast<std::size_t>(s.size()));
    for (Eigen::Index i = 0; i < s.size(); ++i) l[i] = s[i] * s[i];
    std::sort(l.rbegin(), l.rend());
    out.push_back({b, std::move(l)});
  }
  return out;
}

double fidelity(const DensityMatrix& rho, const PureState& target) {
  if (!(rho.dims() == target.dims())) throw ValidationError("fidelity: dims mismatch");
  const CVector& psi = target.amplitudes();
  return psi.dot(rho.matrix() * psi).real();
}

double fidelity_bound(const std::vector<SchmidtSpectrum>& spectra, const std::vector<int>& caps, const SNVector& v) {
  const std::size_t m = spectra.size();
  if (caps.size() != m || v.size() != m) throw Error("fidelity_bound: length mismatch");
  std::vector<std::vector<double>> partial(m);
  for (std::size_t a = 0; a < m; ++a) {
    double acc = 0;
    partial[a].push_back(0.0);
    for (int i = 0; i < caps[a]; ++i) {
      acc += i < static_cast<int>(spectra[a].lambdas.size()) ? spectra[a].lambdas[i] : 0.0;
      partial[a].push_back(std::min(acc, 1.0));
    }
  }
  double best = 0.0;
  std::vector<int> s(m, 1);
  std::function<void(std::size_t)> rec = [&](std::size_t a) {
    if (a == m) {
      std::vector<int> sorted = s;
      std::sort(sorted.rbegin(), sorted.rend());
      if (!elementwise_leq(sorted, v)) return;
      double worst = 1.0;
      for (std::size_t b = 0; b < m; ++b) worst = std::min(worst, partial[b][s[b]]);
      best = std::max(best, worst);
      return;
    }
    for (int x = 1; x <= caps[a]; ++x) {
      s[a] = x;
      rec(a + 1);
    }
  };
  rec(0);
  return best;
}

double fidelity_bound(const PureState& target, const SNVector& v) {
  return fidelity_bound(schmidt_spectra(target), bipartition_caps(target.dims()), v);
}

FidelityBoundTable::FidelityBoundTable(PureState t, std::vector<SNVector> c)
    : target(std::move(t)), candidates(std::move(c)) {
  const auto spectra = schmidt_spectra(target);
  const auto caps = bipartition_caps(target.dims());
  for (const auto& v : candidates) bounds.push_back(fidelity_bound(spectra, caps, v));
}

double FidelityBoundTable::bound(const SNVector& v) const {
  auto it = std::find(candidates.begin(), candidates.end(), v);
  if (it == candidates.end()) throw Error("FidelityBoundTable: unknown candidate " + to_string(v));
  return bounds[static_cast<std::size_t>(it - candidates.begin())];
}

CriterionReport exclusion_by_fidelity(double fid, const FidelityBoundTable& table) {
  std::vector<bool> flags;
  for (double b : table.bounds) flags.push_back(fid > b + 1e-9);
  auto r = make_report("fidelity", table.candidates, flags);
  r.witness_values["fidelity"] = fid;
  for (std::size_t i = 0; i < table.candidates.size(); ++i)
    r.witness_values["Fhat_" + to_string(table.candidates[i])] = table.bounds[i];
  return r;
}

CriterionReport exclusion_by_fidelity(const DensityMatrix& rho, const FidelityBoundTable& table) {
  return exclusion_by_fidelity(fidelity(rho, table.target), table);
}

CriterionReport exclusion_by_fidelity(const DensityMatrix& rho, const PureState& target,
                                      const std::vector<SNVector>& candidates) {
  return exclusion_by_fidelity(rho, FidelityBoundTable(target, candidates));
}

}  // namespace snvec
