#include "snvec/bench.hpp"

#include "snvec/cmc.hpp"
#include "snvec/error.hpp"
#include "snvec/fidelity.hpp"
#include "snvec/states.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

namespace snvec {

namespace {

constexpr std::uint64_t kOptimizerSalt = 0x6f70745f73616c74ull;
constexpr std::uint64_t kMixSalt = 0x6d69785f73616c74ull;

// Evaluates fn(i) for i < n on a worker pool; results land at index i, so the
// outcome does not depend on scheduling.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, unsigned threads, Fn fn) {
  std::vector<std::optional<T>> out(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        out[i].emplace(fn(i));
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!err) err = std::current_exception();
        next = n;
      }
    }
  };
  unsigned k = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  k = static_cast<unsigned>(std::min<std::size_t>(k, std::max<std::size_t>(n, 1)));
  if (k <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < k; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (err) std::rethrow_exception(err);
  std::vector<T> res;
  res.reserve(n);
  for (auto& o : out) res.push_back(std::move(*o));
  return res;
}

bool known_criterion(const std::string& c) { return std::find(kCriteria.begin(), kCriteria.end(), c) != kCriteria.end(); }

}  // namespace

void ExperimentConfig::validate() const {
  if (samples < 1) throw ConfigError("samples must be >= 1");
  if (criteria.empty() && (experiment == Experiment::Certify)) throw ConfigError("criteria must be nonempty");
  for (const auto& c : criteria)
    if (!known_criterion(c)) throw ConfigError("unknown criterion '" + c + "'");
  if (optimizer.max_evals < 0 || optimizer.restarts < 0 || !(optimizer.step_tol > 0))
    throw ConfigError("optimizer settings must be non-negative");
  if ((experiment == Experiment::Table1 || experiment == Experiment::Table2) && !(dims == Dims{3, 3, 3}))
    throw ConfigError("tables require dims 3,3,3");
  if (experiment == Experiment::Fig2 && !(dims == kPsi432Dims)) throw ConfigError("fig2 requires dims 2,3,4");
  if (force_p && !(*force_p >= 0.0 && *force_p <= 1.0)) throw ConfigError("forced p outside [0,1]");
  if (fixed_c) {
    double n2 = 0;
    for (auto x : *fixed_c) n2 += std::norm(x);
    if (std::abs(n2 - 1.0) > 1e-9) throw ConfigError("fixed c is not a unit vector");
  }
}

double TableResult::percent(std::size_t row, std::size_t col) const {
  std::size_t total = 0;
  for (auto c : counts[row]) total += c;
  return total ? 100.0 * double(counts[row][col]) / double(total) : 0.0;
}

double TableResult::percent(const std::string& row, const SNVector& col) const {
  auto r = std::find(rows.begin(), rows.end(), row);
  auto c = std::find(columns.begin(), columns.end(), col);
  if (r == rows.end() || c == columns.end()) throw Error("TableResult: unknown cell " + row + "/" + to_string(col));
  return percent(static_cast<std::size_t>(r - rows.begin()), static_cast<std::size_t>(c - columns.begin()));
}

std::size_t TableResult::nontrivial(const std::string& row) const {
  auto r = std::find(rows.begin(), rows.end(), row);
  if (r == rows.end()) throw Error("TableResult: unknown row " + row);
  const auto ri = static_cast<std::size_t>(r - rows.begin());
  std::size_t n = 0;
  for (std::size_t c = 0; c < columns.size(); ++c)
    if (std::any_of(columns[c].begin(), columns[c].end(), [](int x) { return x > 1; })) n += counts[ri][c];
  return n;
}

TableRecord evaluate_table_sample(const DensityMatrix& rho, const std::vector<SNVector>& candidates,
                                  const ExperimentConfig& config, std::mt19937_64& rng) {
  TableRecord rec;
  rec.f = f_values(rho);
  const auto cmc = exclusion_by_system(std::span<const double>(rec.f), candidates);

  OptimizerConfig oc = config.optimizer;
  oc.objective = Objective::ProductWitness;
  const LocalFrame frame = optimize_frame(rho, oc, rng);
  rec.w = frame_witness(rho, frame);
  const auto pw = exclusion_by_product_witness(rec.w, candidates);

  const auto ct = exclusion_by_corrtensor(rho, candidates);
  rec.c2 = ct.witness_values.at("C2");

  const auto sets = default_pair_sets(rho.dims());
  const auto le = exclusion_by_linentropy(frame.pull_back(rho), sets, candidates, config.prefactor);
  for (std::size_t k = 0; k < sets.size(); ++k) rec.b.push_back(le.witness_values.at("B_" + std::to_string(k + 1)));
  rec.cgm = le.witness_values.at("cgm_lower");

  const std::vector<CriterionReport> pair{cmc, pw};
  const auto both = combine_reports(pair, "cmc-system+product-witness");
  for (const auto* r : {&ct, &le, &pw, &cmc, &both}) {
    rec.certified.push_back(r->certified);
    rec.column.push_back(floor_to_candidate(r->certified, candidates));
  }
  return rec;
}

namespace {

TableResult tabulate(std::string name, const std::vector<SNVector>& candidates, std::vector<TableRecord> records) {
  TableResult t;
  t.name = std::move(name);
  const SNVector never{3, 3, 1};
  for (const auto& c : candidates)
    if (c != never) t.columns.push_back(c);
  if (std::find(candidates.begin(), candidates.end(), never) != candidates.end()) t.columns.push_back(never);
  t.rows = kTableRows;
  t.counts.assign(t.rows.size(), std::vector<std::size_t>(t.columns.size(), 0));
  for (const auto& r : records)
    for (std::size_t row = 0; row < t.rows.size(); ++row) {
      auto it = std::find(t.columns.begin(), t.columns.end(), r.column[row]);
      ++t.counts[row][static_cast<std::size_t>(it - t.columns.begin())];
    }
  t.records = std::move(records);
  return t;
}

}  // namespace

TableResult run_table1(const ExperimentConfig& config) {
  ExperimentConfig cfg = config;
  cfg.experiment = Experiment::Table1;
  cfg.validate();
  const auto candidates = enumerate_candidates(cfg.dims);
  const SamplerConfig sc{SamplerMode::FixedLambda1, cfg.seed, cfg.dims};
  auto records = parallel_map<TableRecord>(cfg.samples, cfg.threads, [&](std::size_t i) {
    const auto s = fixed_lambda1_density(sc, i);
    auto rng = sample_rng(cfg.seed ^ kOptimizerSalt, i);
    auto rec = evaluate_table_sample(s.rho, candidates, cfg, rng);
    rec.index = i;
    rec.lambda1 = s.spectrum[0];
    return rec;
  });
  return tabulate("table1", candidates, std::move(records));
}

TableResult run_table2(const ExperimentConfig& config) {
  ExperimentConfig cfg = config;
  cfg.experiment = Experiment::Table2;
  cfg.validate();
  const auto candidates = enumerate_candidates(cfg.dims);
  const SamplerConfig sc{SamplerMode::Lebesgue, cfg.seed, cfg.dims};
  const auto ghz = ghz_state(3, 3).projector();
  auto records = parallel_map<TableRecord>(cfg.samples, cfg.threads, [&](std::size_t i) {
    const auto noise = haar_random_density(sc, i);
    auto prng = sample_rng(cfg.seed ^ kMixSalt, i);
    const double p = cfg.force_p ? *cfg.force_p : std::uniform_real_distribution<double>(0.0, 1.0)(prng);
    const auto rho = mix(p, ghz, noise.rho);
    auto rng = sample_rng(cfg.seed ^ kOptimizerSalt, i);
    auto rec = evaluate_table_sample(rho, candidates, cfg, rng);
    rec.index = i;
    rec.p = p;
    rec.lambda1 = noise.spectrum[0];
    return rec;
  });
  return tabulate("table2", candidates, std::move(records));
}

std::optional<double> detection_threshold(const std::function<bool(double)>& detect, double tol) {
  if (!detect(1.0)) return std::nullopt;
  if (detect(0.0)) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (detect(mid) ? hi : lo) = mid;
  }
  return hi;
}

double Fig2Result::win_rate() const {
  return records.empty() ? 0.0 : double(cmc_wins) / double(records.size());
}

Fig2Record evaluate_fig2_sample(const std::array<cplx, 4>& c, std::uint64_t index, std::uint64_t seed,
                                const ExperimentConfig& config) {
  const PureState psi = psi432_state(c);
  const auto candidates = enumerate_candidates(psi.dims());
  const FidelityBoundTable table(psi, candidates);
  const SNVector v422{4, 2, 2}, v332{3, 3, 2};
  const double fhat = std::max(table.bound(v422), table.bound(v332));

  auto detect_cmc = [&](double p) {
    const auto f = f_values(white_noise_mix(p, psi));
    return !majorization_feasible(f, v422) && !majorization_feasible(f, v332);
  };
  auto detect_fid = [&](double p) { return fidelity(white_noise_mix(p, psi), psi) > fhat + 1e-9; };

  Fig2Record rec;
  rec.index = index;
  rec.seed = seed;
  rec.c = c;
  rec.p_star_cmc = detection_threshold(detect_cmc);
  rec.p_star_fid = detection_threshold(detect_fid);
  if (rec.p_star_cmc && rec.p_star_fid) {
    rec.winner = *rec.p_star_cmc < *rec.p_star_fid ? "cmc" : *rec.p_star_cmc > *rec.p_star_fid ? "fidelity" : "tie";
  } else {
    rec.winner = rec.p_star_cmc ? "cmc" : rec.p_star_fid ? "fidelity" : "none";
  }

  // Features at the fidelity threshold (the pure state if undetectable).
  rec.p = rec.p_star_fid.value_or(1.0);
  const auto rho = white_noise_mix(rec.p, psi);
  rec.f = f_values(rho);
  rec.w = frame_witness(rho, svd_initial_frame(rho));
  rec.fidelity = fidelity(rho, psi);
  const auto sets = default_pair_sets(psi.dims());
  const auto le = exclusion_by_linentropy(rho, sets, candidates, config.prefactor);
  for (std::size_t k = 0; k < sets.size(); ++k) rec.b.push_back(le.witness_values.at("B_" + std::to_string(k + 1)));
  rec.cgm = le.witness_values.at("cgm_lower");
  rec.cgm_pure = gm_concurrence_lower_bound(psi.projector(), sets.back(), config.prefactor);
  const auto cmc = exclusion_by_system(std::span<const double>(rec.f), candidates);
  const auto fid = exclusion_by_fidelity(rec.fidelity, table);
  const std::vector<CriterionReport> both{cmc, fid};
  rec.cert_cmc = cmc.certified;
  rec.cert_fid = fid.certified;
  rec.cert_combined = combine_reports(both).certified;
  return rec;
}

Fig2Result run_fig2(const ExperimentConfig& config) {
  ExperimentConfig cfg = config;
  cfg.experiment = Experiment::Fig2;
  cfg.validate();
  Fig2Result res;
  res.records = parallel_map<Fig2Record>(cfg.samples, cfg.threads, [&](std::size_t i) {
    std::array<cplx, 4> c{};
    if (cfg.fixed_c) {
      c = *cfg.fixed_c;
    } else {
      auto rng = sample_rng(cfg.seed, i);
      const CVector v = random_unit_vector(4, rng);
      for (int k = 0; k < 4; ++k) c[k] = v[k];
    }
    return evaluate_fig2_sample(c, i, cfg.seed, cfg);
  });
  for (const auto& r : res.records) {
    res.cmc_wins += r.winner == "cmc";
    res.fid_wins += r.winner == "fidelity";
    res.ties += r.winner == "tie";
    res.undetectable_cmc += !r.p_star_cmc;
    res.undetectable_fid += !r.p_star_fid;
    if (r.cgm_pure > 0.8) {
      ++res.cgm_above;
      res.cmc_wins_cgm_above += r.winner == "cmc";
    }
  }
  return res;
}

Certification certify(const DensityMatrix& rho, const ExperimentConfig& config, const PureState* fidelity_target) {
  if (config.criteria.empty()) throw ConfigError("criteria must be nonempty");
  for (const auto& c : config.criteria)
    if (!known_criterion(c)) throw ConfigError("unknown criterion '" + c + "'");
  const Dims& dims = rho.dims();
  if (dims.size() < 2) throw ConfigError("certification needs at least two particles");
  const auto candidates = enumerate_candidates(dims);
  auto has = [&](const char* c) {
    return std::find(config.criteria.begin(), config.criteria.end(), c) != config.criteria.end();
  };
  Certification out;
  std::optional<LocalFrame> frame;
  auto get_frame = [&]() -> const LocalFrame& {
    if (!frame) {
      auto rng = sample_rng(config.seed ^ kOptimizerSalt, 0);
      OptimizerConfig oc = config.optimizer;
      oc.objective = Objective::ProductWitness;
      frame = optimize_frame(rho, oc, rng);
    }
    return *frame;
  };
  if (has("cmc-system")) out.reports.push_back(exclusion_by_system(rho, candidates));
  if (has("product-witness")) {
    const double w = product_basis_witness(rho, frame_bases(dims, get_frame()));
    auto r = exclusion_by_product_witness(w, candidates);
    r.basis = "optimized local frame (GHZ-aligned matrix units, canonical start)";
    out.reports.push_back(std::move(r));
  }
  if (has("fidelity")) {
    std::optional<PureState> target;
    if (fidelity_target) {
      target = *fidelity_target;
    } else if (dims.all_equal()) {
      target = ghz_state(dims[0], static_cast<int>(dims.size()));
    } else if (dims == kPsi432Dims) {
      const std::array<cplx, 4> half{0.5, 0.5, 0.5, 0.5};
      target = psi432_state(half);
    } else {
      throw ConfigError("fidelity: no default target for dims " + dims.to_string() + "; pass one explicitly");
    }
    if (!(target->dims() == dims)) throw ConfigError("fidelity: target dims differ from the state's");
    out.reports.push_back(exclusion_by_fidelity(rho, *target, candidates));
  }
  if (has("corrtensor")) {
    if (!dims.all_equal()) throw ConfigError("corrtensor: requires equal local dimensions");
    out.reports.push_back(exclusion_by_corrtensor(rho, candidates));
  }
  if (has("linentropy")) {
    const auto sets = default_pair_sets(dims);
    CriterionReport r = dims.all_equal()
                            ? exclusion_by_linentropy(get_frame().pull_back(rho), sets, candidates, config.prefactor)
                            : exclusion_by_linentropy(rho, sets, candidates, config.prefactor);
    r.basis = dims.all_equal() ? "optimized local frame" : "computational";
    out.reports.push_back(std::move(r));
  }
  out.combined = combine_reports(out.reports);
  return out;
}

std::string format_number(double x) {
  if (!std::isfinite(x)) return "";
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

void write_table_csv(std::ostream& os, const TableResult& t) {
  os << "row";
  for (const auto& c : t.columns) os << ",(" << to_string(c) << ")";
  os << '\n';
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    os << t.rows[r];
    for (std::size_t c = 0; c < t.columns.size(); ++c) os << ',' << format_number(t.percent(r, c));
    os << '\n';
  }
}

void write_table_summary(std::ostream& os, const TableResult& t) {
  os << t.name << ": percentage of " << t.records.size() << " samples per certified vector\n";
  os << std::left << std::setw(28) << "row";
  for (const auto& c : t.columns) os << std::right << std::setw(9) << ("(" + to_string(c) + ")");
  os << '\n';
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    os << std::left << std::setw(28) << t.rows[r];
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      std::ostringstream cell;
      cell << std::fixed << std::setprecision(1) << t.percent(r, c);
      os << std::right << std::setw(9) << cell.str();
    }
    os << '\n';
  }
}

void write_table_records_csv(std::ostream& os, const TableResult& t) {
  os << "idx,p,lambda1,f1,f2,f3,W,C2,B1,B2,B3,cgm";
  for (const auto& r : t.rows) os << ",cert_" << r;
  os << '\n';
  for (const auto& r : t.records) {
    os << r.index << ',' << format_number(r.p) << ',' << format_number(r.lambda1);
    for (double x : r.f) os << ',' << format_number(x);
    os << ',' << format_number(r.w) << ',' << format_number(r.c2);
    for (double x : r.b) os << ',' << format_number(x);
    os << ',' << format_number(r.cgm);
    for (const auto& v : r.certified) os << ',' << to_string(v);
    os << '\n';
  }
}

void write_fig2_csv(std::ostream& os, const Fig2Result& r, const ExperimentConfig& config) {
  os << "# fig2: rho(p,c) = p |psi432(c)><psi432(c)| + (1-p) 1/24, c uniform on the complex unit sphere\n"
     << "# target: exclude both (4,2,2) and (3,3,2); p_star = smallest p certifying it, found by bisection on\n"
     << "#   [0,1] to 1e-4 assuming monotone detectability; empty p_star = not certified even at p = 1\n"
     << "# winner: criterion with the smaller p_star (tolerates more white noise); tie if equal\n"
     << "# features are evaluated at p = p_star_fid (p = 1 if the fidelity witness never certifies)\n"
     << "# seed=" << config.seed << " samples=" << r.records.size() << "\n";
  os << "idx,seed,p,lambda1,c_re0,c_re1,c_re2,c_re3,c_im0,c_im1,c_im2,c_im3,f1,f2,f3,W,fidelity,C2,B1,B2,B3,cgm,"
        "cert_cmc,cert_fid,cert_combined,winner,p_star_cmc,p_star_fid,cgm_pure\n";
  auto opt = [](const std::optional<double>& x) { return x ? format_number(*x) : std::string(); };
  for (const auto& s : r.records) {
    os << s.index << ',' << s.seed << ',' << format_number(s.p) << ',';
    for (const auto& c : s.c) os << ',' << format_number(c.real());
    for (const auto& c : s.c) os << ',' << format_number(c.imag());
    for (double x : s.f) os << ',' << format_number(x);
    os << ',' << format_number(s.w) << ',' << format_number(s.fidelity) << ',';
    for (double x : s.b) os << ',' << format_number(x);
    os << ',' << format_number(s.cgm) << ',' << to_string(s.cert_cmc) << ',' << to_string(s.cert_fid) << ','
       << to_string(s.cert_combined) << ',' << s.winner << ',' << opt(s.p_star_cmc) << ',' << opt(s.p_star_fid) << ','
       << format_number(s.cgm_pure) << '\n';
  }
}

void write_fig2_summary(std::ostream& os, const Fig2Result& r) {
  const double n = double(std::max<std::size_t>(r.records.size(), 1));
  os << "fig2: " << r.records.size() << " samples\n"
     << "  cmc-system tolerates more noise: " << r.cmc_wins << " (" << format_number(100.0 * r.cmc_wins / n) << "%)\n"
     << "  fidelity tolerates more noise:   " << r.fid_wins << " (" << format_number(100.0 * r.fid_wins / n) << "%)\n"
     << "  ties: " << r.ties << ", undetectable by cmc-system: " << r.undetectable_cmc
     << ", undetectable by fidelity: " << r.undetectable_fid << '\n'
     << "  samples with C_GM lower bound > 0.8 (pure state): " << r.cgm_above << ", of which cmc wins "
     << r.cmc_wins_cgm_above << '\n';
}

}  // namespace snvec
