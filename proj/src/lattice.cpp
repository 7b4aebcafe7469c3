#include "snvec/lattice.hpp"

#include "snvec/error.hpp"
#include "snvec/simplex.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace snvec {

std::vector<int> Bipartition::complement(std::size_t n_particles) const {
  return snvec::complement(members, n_particles);
}

std::string Bipartition::to_string() const {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < members.size(); ++i) os << (i ? "," : "") << members[i];
  os << "}";
  return os.str();
}

std::vector<Bipartition> enumerate_bipartitions(std::size_t n_particles) {
  if (n_particles < 2) throw InvalidPartition("enumerate_bipartitions: at least two particles required");
  const int n = static_cast<int>(n_particles);
  std::vector<std::vector<int>> sets;
  for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
    std::vector<int> s{0};
    for (int p = 1; p < n; ++p)
      if (mask & (1u << (p - 1))) s.push_back(p);
    if (static_cast<int>(s.size()) < n) sets.push_back(std::move(s));
  }
  std::sort(sets.begin(), sets.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  std::vector<Bipartition> out;
  for (std::size_t i = 0; i < sets.size(); ++i) out.push_back({sets[i], static_cast<int>(i)});
  return out;
}

std::string to_string(const SNVector& v) {
  std::ostringstream os;
  const bool wide = std::any_of(v.begin(), v.end(), [](int x) { return x > 9; });
  for (std::size_t i = 0; i < v.size(); ++i) os << (wide && i ? "," : "") << v[i];
  return os.str();
}

std::vector<int> bipartition_caps(const Dims& dims) {
  std::vector<int> caps;
  for (const auto& b : enumerate_bipartitions(dims.size())) {
    const auto rest = b.complement(dims.size());
    caps.push_back(std::min(dims.subsystem_dim(b.members), dims.subsystem_dim(rest)));
  }
  return caps;
}

std::vector<int> sorted_caps(const Dims& dims) {
  auto caps = bipartition_caps(dims);
  std::sort(caps.rbegin(), caps.rend());
  return caps;
}

std::vector<SNVector> enumerate_candidates(const Dims& dims) {
  const auto caps = sorted_caps(dims);
  std::vector<SNVector> out;
  SNVector v(caps.size());
  std::function<void(std::size_t, int)> rec = [&](std::size_t k, int upper) {
    if (k == caps.size()) {
      if (dims.size() == 3 && v[0] > v[1] * v[2]) return;
      out.push_back(v);
      return;
    }
    for (int x = 1; x <= std::min(upper, caps[k]); ++x) {
      v[k] = x;
      rec(k + 1, x);
    }
  };
  rec(0, caps.front());
  std::sort(out.begin(), out.end());
  return out;
}

bool elementwise_leq(const SNVector& a, const SNVector& b) {
  if (a.size() != b.size()) throw Error("elementwise_leq: length mismatch");
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] > b[k]) return false;
  return true;
}

namespace {

std::vector<double> prefix_sums(const SNVector& v) {
  SNVector s = v;
  std::sort(s.rbegin(), s.rend());
  std::vector<double> out(s.size());
  double acc = 0;
  for (std::size_t k = 0; k < s.size(); ++k) out[k] = acc += s[k];
  return out;
}

void check_lengths(std::span<const double> f, const SNVector& v) {
  if (f.size() != v.size() || v.empty()) throw Error("majorization: f and v lengths differ");
  if (v.size() > 20) throw Error("majorization: too many positions for subset constraints");
}

}  // namespace

bool majorization_closed_form(std::span<const double> f, const SNVector& v, double slack) {
  check_lengths(f, v);
  std::vector<double> g(f.begin(), f.end());
  std::sort(g.rbegin(), g.rend());
  const auto vs = prefix_sums(v);
  double acc = 0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    acc += g[k] - slack;
    if (acc > vs[k]) return false;
  }
  return true;
}

bool majorization_feasible(std::span<const double> f, const SNVector& v, double slack) {
  check_lengths(f, v);
  const int m = static_cast<int>(f.size());
  const auto vs = prefix_sums(v);
  // Variables s = R - f >= 0. For each nonempty subset S:
  //   sum_S s <= V_|S| - sum_S f;  and  sum s = V_m - sum f.
  const int subsets = (1 << m) - 1;
  LinearProgram lp;
  lp.a_le = Eigen::MatrixXd::Zero(subsets, m);
  lp.b_le = Eigen::VectorXd::Zero(subsets);
  for (int mask = 1; mask <= subsets; ++mask) {
    double fs = 0;
    int size = 0;
    for (int a = 0; a < m; ++a)
      if (mask & (1 << a)) {
        lp.a_le(mask - 1, a) = 1.0;
        fs += f[a] - slack;
        ++size;
      }
    lp.b_le[mask - 1] = vs[size - 1] - fs;
  }
  double ftot = 0;
  for (double x : f) ftot += x - slack;
  lp.a_eq = Eigen::MatrixXd::Ones(1, m);
  lp.b_eq = Eigen::VectorXd::Constant(1, vs.back() - ftot);
  return solve_lp(lp).status == LpResult::Status::Optimal;
}

bool CriterionReport::is_excluded(const SNVector& v) const {
  return std::find(excluded.begin(), excluded.end(), v) != excluded.end();
}

CriterionReport make_report(std::string criterion, const std::vector<SNVector>& candidates,
                            const std::vector<bool>& excluded_flags) {
  if (excluded_flags.size() != candidates.size()) throw Error("make_report: flag count mismatch");
  CriterionReport r;
  r.criterion = std::move(criterion);
  r.candidates = candidates;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (excluded_flags[i]) {
      r.excluded.push_back(candidates[i]);
      continue;
    }
    if (r.certified.empty()) {
      r.certified = candidates[i];
    } else {
      for (std::size_t k = 0; k < r.certified.size(); ++k)
        r.certified[k] = std::min(r.certified[k], candidates[i][k]);
    }
  }
  if (r.certified.empty())
    throw Inconsistency(r.criterion + ": every candidate excluded (invalid state or unsound criterion)");
  return r;
}

CriterionReport combine_reports(std::span<const CriterionReport> reports, std::string name) {
  if (reports.empty()) throw Error("combine_reports: no reports");
  const auto& cands = reports.front().candidates;
  std::vector<bool> flags(cands.size(), false);
  std::map<std::string, double> witnesses;
  for (const auto& r : reports) {
    if (r.candidates != cands) throw Error("combine_reports: reports over different candidate lists");
    for (std::size_t i = 0; i < cands.size(); ++i)
      if (r.is_excluded(cands[i])) flags[i] = true;
    for (const auto& [k, x] : r.witness_values) witnesses[r.criterion + "." + k] = x;
  }
  if (reports.size() == 1) name = reports.front().criterion;
  auto out = make_report(std::move(name), cands, flags);
  out.witness_values = reports.size() == 1 ? reports.front().witness_values : witnesses;
  if (reports.size() == 1) {
    out.rank_semantics = reports.front().rank_semantics;
    out.basis = reports.front().basis;
  }
  return out;
}

SNVector floor_to_candidate(const SNVector& certified, const std::vector<SNVector>& candidates) {
  const SNVector* best = nullptr;
  int best_sum = -1;
  for (const auto& c : candidates) {
    if (!elementwise_leq(c, certified)) continue;
    int s = std::accumulate(c.begin(), c.end(), 0);
    if (s > best_sum || (s == best_sum && c > *best)) {
      best = &c;
      best_sum = s;
    }
  }
  if (!best) throw Error("floor_to_candidate: no candidate below " + to_string(certified));
  return *best;
}

}  // namespace snvec
