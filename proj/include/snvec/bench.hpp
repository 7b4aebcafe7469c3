#pragma once

#include "snvec/baseline.hpp"
#include "snvec/lattice.hpp"
#include "snvec/optimizer.hpp"
#include "snvec/qudit.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace snvec {

enum class Experiment { Table1, Table2, Fig2, Certify, Gen };

/// Criterion names accepted on the command line.
inline const std::vector<std::string> kCriteria = {"cmc-system", "product-witness", "fidelity", "corrtensor",
                                                   "linentropy"};

struct ExperimentConfig {
  Experiment experiment = Experiment::Table1;
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  Dims dims{3, 3, 3};
  std::vector<std::string> criteria = kCriteria;
  OptimizerConfig optimizer;
  EntropyPrefactor prefactor = EntropyPrefactor::Two;
  unsigned threads = 0;  ///< 0: hardware concurrency
  std::optional<double> force_p;              ///< table2: fixed mixing weight
  std::optional<std::array<cplx, 4>> fixed_c;  ///< fig2: fixed psi432 coefficients

  /// Throws ConfigError on inconsistent settings.
  void validate() const;
};

/// The five table rows, in order.
inline const std::vector<std::string> kTableRows = {"corrtensor", "linentropy", "product-witness", "cmc-system",
                                                    "cmc-system+product-witness"};

struct TableRecord {
  std::uint64_t index = 0;
  double p = 1.0;         ///< table2 mixing weight (1 for table1)
  double lambda1 = 0.0;   ///< dominant drawn eigenvalue (table1) / of the noise (table2)
  std::vector<double> f;
  double w = 0.0;
  double c2 = 0.0;
  std::vector<double> b;
  double cgm = 0.0;
  std::vector<SNVector> certified;  ///< per row of kTableRows, as certified
  std::vector<SNVector> column;     ///< per row, the tabulated candidate
};

struct TableResult {
  std::string name;
  std::vector<SNVector> columns;  ///< candidates, (3,3,1) last
  std::vector<std::string> rows;
  std::vector<std::vector<std::size_t>> counts;  ///< [row][column]
  std::vector<TableRecord> records;

  double percent(std::size_t row, std::size_t col) const;
  double percent(const std::string& row, const SNVector& col) const;
  /// Samples whose tabulated vector exceeds (1,...,1).
  std::size_t nontrivial(const std::string& row) const;
};

TableResult run_table1(const ExperimentConfig& config);
TableResult run_table2(const ExperimentConfig& config);

/// One sample's table evaluation (exposed for tests).
TableRecord evaluate_table_sample(const DensityMatrix& rho, const std::vector<SNVector>& candidates,
                                  const ExperimentConfig& config, std::mt19937_64& rng);

struct Fig2Record {
  std::uint64_t index = 0;
  std::uint64_t seed = 0;
  double p = 1.0;  ///< evaluation point of the per-sample features
  std::array<cplx, 4> c{};
  std::vector<double> f;
  double w = 0.0;
  double fidelity = 0.0;
  std::vector<double> b;
  double cgm = 0.0;
  double cgm_pure = 0.0;
  SNVector cert_cmc, cert_fid, cert_combined;
  std::optional<double> p_star_cmc, p_star_fid;  ///< empty: undetectable
  std::string winner;  ///< cmc | fidelity | tie | none
};

struct Fig2Result {
  std::vector<Fig2Record> records;
  std::size_t cmc_wins = 0;
  std::size_t fid_wins = 0;
  std::size_t ties = 0;
  std::size_t undetectable_cmc = 0;
  std::size_t undetectable_fid = 0;
  std::size_t cgm_above = 0;  ///< pure-state C_GM bound > 0.8
  std::size_t cmc_wins_cgm_above = 0;

  double win_rate() const;
};

/// Smallest p (to `tol`) at which `detect` holds, assuming monotonicity;
/// empty if detect(1) fails.
std::optional<double> detection_threshold(const std::function<bool(double)>& detect, double tol = 1e-4);

Fig2Result run_fig2(const ExperimentConfig& config);
Fig2Record evaluate_fig2_sample(const std::array<cplx, 4>& c, std::uint64_t index, std::uint64_t seed,
                                const ExperimentConfig& config);

/// Runs the selected criteria on one state and combines them.
struct Certification {
  std::vector<CriterionReport> reports;
  CriterionReport combined;
};
Certification certify(const DensityMatrix& rho, const ExperimentConfig& config,
                      const PureState* fidelity_target = nullptr);

/// Output helpers (6 significant digits, LF line endings).
std::string format_number(double x);
void write_table_csv(std::ostream& os, const TableResult& t);
void write_table_summary(std::ostream& os, const TableResult& t);
void write_table_records_csv(std::ostream& os, const TableResult& t);
void write_fig2_csv(std::ostream& os, const Fig2Result& r, const ExperimentConfig& config);
void write_fig2_summary(std::ostream& os, const Fig2Result& r);

}  // namespace snvec
