#pragma once

#include "snvec/qudit.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace snvec {

/// Two-block split (members | complement). The canonical representative
/// contains particle 0.
struct Bipartition {
  std::vector<int> members;
  int index = 0;  ///< position in the canonical enumeration, 0-based

  std::vector<int> complement(std::size_t n_particles) const;
  std::string to_string() const;
};

/// All 2^(N-1)-1 bipartitions ordered by block size, then lexicographically.
std::vector<Bipartition> enumerate_bipartitions(std::size_t n_particles);

/// Non-increasing positive integer vector (v_1 >= ... >= v_M).
using SNVector = std::vector<int>;

std::string to_string(const SNVector& v);

/// Per-bipartition maxima min(D_alpha, D_complement), in canonical order.
std::vector<int> bipartition_caps(const Dims& dims);
/// Caps sorted non-increasingly.
std::vector<int> sorted_caps(const Dims& dims);

/// Every non-increasing vector under the sorted caps; for three particles
/// additionally v_1 <= v_2 v_3. Sorted lexicographically ascending.
std::vector<SNVector> enumerate_candidates(const Dims& dims);

/// a_k <= b_k for every k; throws on length mismatch.
bool elementwise_leq(const SNVector& a, const SNVector& b);

/// Exists R with R >= f, sum R = sum v and R majorized by v. Decided by a
/// linear program with one constraint per subset of positions. `slack` is
/// subtracted from every f entry first.
bool majorization_feasible(std::span<const double> f, const SNVector& v, double slack = 1e-9);

/// Sorted partial sums of f bounded by those of v, and sum f <= sum v.
bool majorization_closed_form(std::span<const double> f, const SNVector& v, double slack = 1e-9);

/// Outcome of one criterion on one state.
struct CriterionReport {
  std::string criterion;
  std::vector<SNVector> candidates;
  std::vector<SNVector> excluded;
  SNVector certified;
  std::map<std::string, double> witness_values;
  std::string rank_semantics = "sn-vector";
  std::string basis;  ///< how local bases were chosen, empty if not applicable

  bool is_excluded(const SNVector& v) const;
};

/// Fills `excluded` with the flagged candidates and computes `certified` as
/// the componentwise minimum of the rest. Throws Inconsistency if nothing is
/// left.
CriterionReport make_report(std::string criterion, const std::vector<SNVector>& candidates,
                            const std::vector<bool>& excluded_flags);

/// Union of exclusions over reports built on the same candidate list.
CriterionReport combine_reports(std::span<const CriterionReport> reports, std::string name = "combined");

/// The largest candidate elementwise below `certified` (ties broken towards
/// the lexicographically largest). Used to tabulate certified vectors that
/// are not candidates themselves.
SNVector floor_to_candidate(const SNVector& certified, const std::vector<SNVector>& candidates);

}  // namespace snvec
