// snvec: certify Schmidt-number vectors of qudit states and run the
// random-state benchmarks.

#include "snvec/bench.hpp"
#include "snvec/error.hpp"
#include "snvec/state_io.hpp"
#include "snvec/states.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace snvec;
using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

Dims parse_dims(const std::string& s) {
  std::vector<int> d;
  for (const auto& x : split(s)) {
    try {
      d.push_back(std::stoi(x));
    } catch (const std::exception&) {
      throw ConfigError("--dims: '" + x + "' is not an integer");
    }
  }
  try {
    return Dims(d);
  } catch (const InvalidDimension& e) {
    throw ConfigError(std::string("--dims: ") + e.what());
  }
}

std::array<cplx, 4> parse_c(const std::string& s) {
  // four entries, each "re" or "re:im"
  const auto parts = split(s);
  if (parts.size() != 4) throw ConfigError("--c: four comma-separated coefficients required");
  std::array<cplx, 4> c{};
  for (int k = 0; k < 4; ++k) {
    const auto colon = parts[k].find(':');
    try {
      c[k] = colon == std::string::npos ? cplx(std::stod(parts[k]), 0.0)
                                        : cplx(std::stod(parts[k].substr(0, colon)), std::stod(parts[k].substr(colon + 1)));
    } catch (const std::exception&) {
      throw ConfigError("--c: cannot parse '" + parts[k] + "'");
    }
  }
  return c;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + path);
  return os;
}

void write_json(const std::string& path, const json& j) {
  auto os = open_out(path);
  os << j.dump(2) << '\n';
}

json table_json(const TableResult& t) {
  json j;
  j["experiment"] = t.name;
  j["samples"] = t.records.size();
  json cols = json::array();
  for (const auto& c : t.columns) cols.push_back(to_string(c));
  j["columns"] = cols;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < t.columns.size(); ++c) row.push_back(std::stod(format_number(t.percent(r, c))));
    j["percent"][t.rows[r]] = row;
  }
  json recs = json::array();
  for (const auto& r : t.records) {
    json x{{"idx", r.index}, {"p", r.p}, {"lambda1", r.lambda1}, {"f", r.f}, {"W", r.w}, {"C2", r.c2}, {"B", r.b},
           {"cgm", r.cgm}};
    for (std::size_t k = 0; k < t.rows.size(); ++k) x["certified"][t.rows[k]] = r.certified[k];
    recs.push_back(x);
  }
  j["records"] = recs;
  return j;
}

json fig2_json(const Fig2Result& r) {
  json j;
  j["experiment"] = "fig2";
  j["samples"] = r.records.size();
  j["cmc_wins"] = r.cmc_wins;
  j["fidelity_wins"] = r.fid_wins;
  j["ties"] = r.ties;
  j["win_rate"] = r.win_rate();
  j["undetectable_cmc"] = r.undetectable_cmc;
  j["undetectable_fidelity"] = r.undetectable_fid;
  json recs = json::array();
  for (const auto& s : r.records) {
    json c = json::array();
    for (auto x : s.c) c.push_back({x.real(), x.imag()});
    json x{{"idx", s.index}, {"p", s.p}, {"c", c}, {"f", s.f}, {"W", s.w}, {"fidelity", s.fidelity},
           {"B", s.b}, {"cgm", s.cgm}, {"cgm_pure", s.cgm_pure}, {"cert_cmc", s.cert_cmc},
           {"cert_fid", s.cert_fid}, {"cert_combined", s.cert_combined}, {"winner", s.winner}};
    x["p_star_cmc"] = s.p_star_cmc ? json(*s.p_star_cmc) : json(nullptr);
    x["p_star_fid"] = s.p_star_fid ? json(*s.p_star_fid) : json(nullptr);
    recs.push_back(x);
  }
  j["records"] = recs;
  return j;
}

struct Common {
  std::string dims;
  std::optional<std::size_t> samples;
  std::uint64_t seed = 1;
  std::string criteria;
  std::string out;
  std::string format = "csv";
  int opt_evals = 2000;
  int opt_restarts = 4;
  std::uint64_t opt_seed = 0;
  bool repair = false;
  unsigned threads = 0;
  std::string prefactor = "two";
};

void apply_common(const Common& o, ExperimentConfig& cfg) {
  cfg.seed = o.seed;
  if (o.samples) cfg.samples = *o.samples;
  if (!o.dims.empty()) cfg.dims = parse_dims(o.dims);
  if (!o.criteria.empty()) cfg.criteria = split(o.criteria);
  cfg.optimizer.max_evals = o.opt_evals;
  cfg.optimizer.restarts = o.opt_restarts;
  cfg.optimizer.seed = o.opt_seed;
  cfg.threads = o.threads;
  if (o.prefactor == "two") cfg.prefactor = EntropyPrefactor::Two;
  else if (o.prefactor == "one") cfg.prefactor = EntropyPrefactor::One;
  else throw ConfigError("--le-prefactor must be 'one' or 'two'");
  if (o.format != "csv" && o.format != "json") throw ConfigError("--format must be csv or json");
}

int run_gen(const Common& o, const std::string& kind, double p, const std::string& c_text, std::uint64_t first) {
  ExperimentConfig cfg;
  cfg.dims = Dims{3, 3, 3};
  apply_common(o, cfg);
  const std::size_t n = o.samples ? *o.samples : 1;
  if (n < 1) throw ConfigError("gen: --samples must be >= 1");
  if (o.out.empty()) throw ConfigError("gen: --out is required");
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("gen: --p outside [0,1]");
  for (std::size_t k = 0; k < n; ++k) {
    const std::uint64_t idx = first + k;
    json meta{{"seed", cfg.seed}, {"index", idx}, {"mode", kind}, {"dims", cfg.dims.values()}};
    json state;
    if (kind == "ghz") {
      if (!cfg.dims.all_equal()) throw ConfigError("gen ghz: equal dims required");
      state = state_to_json(white_noise_mix(p, ghz_state(cfg.dims[0], static_cast<int>(cfg.dims.size()))));
      meta["p"] = p;
    } else if (kind == "psi432") {
      std::array<cplx, 4> c{};
      if (c_text.empty()) {
        auto rng = sample_rng(cfg.seed, idx);
        const CVector v = random_unit_vector(4, rng);
        for (int i = 0; i < 4; ++i) c[i] = v[i];
      } else {
        c = parse_c(c_text);
      }
      state = state_to_json(white_noise_mix(p, psi432_state(c)));
      meta["p"] = p;
      json cj = json::array();
      for (auto x : c) cj.push_back({x.real(), x.imag()});
      meta["c"] = cj;
    } else if (kind == "lebesgue" || kind == "lambda1") {
      const SamplerConfig sc{kind == "lebesgue" ? SamplerMode::Lebesgue : SamplerMode::FixedLambda1, cfg.seed, cfg.dims};
      const auto s = sample_density(sc, idx);
      state = state_to_json(s.rho);
      meta["lambda1"] = s.spectrum[0];
    } else if (kind == "ghz-random") {
      if (!(cfg.dims == Dims{3, 3, 3})) throw ConfigError("gen ghz-random: dims 3,3,3 required");
      const SamplerConfig sc{SamplerMode::Lebesgue, cfg.seed, cfg.dims};
      const auto s = haar_random_density(sc, idx);
      state = state_to_json(mix(p, ghz_state(3, 3).projector(), s.rho));
      meta["p"] = p;
      meta["lambda1"] = s.spectrum[0];
    } else if (kind == "pure") {
      auto rng = sample_rng(cfg.seed, idx);
      state = state_to_json(random_pure_state(cfg.dims, rng));
    } else if (kind == "product") {
      auto rng = sample_rng(cfg.seed, idx);
      state = state_to_json(random_product_state(cfg.dims, rng));
    } else if (kind == "mixed") {
      state = state_to_json(DensityMatrix::maximally_mixed(cfg.dims));
    } else {
      throw ConfigError("gen: unknown --kind '" + kind + "'");
    }
    const std::string path = n == 1 ? o.out : o.out + "." + std::to_string(idx) + ".json";
    write_json(path, state);
    write_json(path + ".meta.json", meta);
  }
  return 0;
}

int run_certify(const Common& o, const std::string& file, const std::string& target_file) {
  const DensityMatrix rho = read_state_file(file, o.repair);
  ExperimentConfig cfg;
  cfg.experiment = Experiment::Certify;
  apply_common(o, cfg);
  if (o.criteria.empty()) {
    // Every criterion that applies to the state's dims.
    cfg.criteria = {"cmc-system", "product-witness"};
    const bool eq = rho.dims().all_equal();
    if (eq || rho.dims() == kPsi432Dims) cfg.criteria.push_back("fidelity");
    if (eq) cfg.criteria.push_back("corrtensor");
    if (eq || rho.dims() == kPsi432Dims) cfg.criteria.push_back("linentropy");
  }
  std::optional<PureState> target;
  if (!target_file.empty()) {
    std::ifstream in(target_file);
    if (!in) throw ParseError(target_file + ": cannot open");
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ParseError(target_file + ": " + e.what());
    }
    if (!j.contains("vector")) throw ParseError(target_file + ": target must be a pure state (\"vector\")");
    const DensityMatrix t = state_from_json(j);
    CVector v(t.dim());
    for (int i = 0; i < t.dim(); ++i) v[i] = cplx(j["vector"][i][0].get<double>(), j["vector"][i][1].get<double>());
    target.emplace(t.dims(), v);
  }
  const auto cert = certify(rho, cfg, target ? &*target : nullptr);
  json j;
  j["dims"] = rho.dims().values();
  j["certified"] = cert.combined.certified;
  j["combined"] = report_to_json(cert.combined);
  j["reports"] = json::array();
  for (const auto& r : cert.reports) j["reports"].push_back(report_to_json(r));
  if (o.format == "csv") {
    std::ostringstream os;
    os << "criterion,certified,excluded\n";
    auto row = [&](const std::string& name, const CriterionReport& r) {
      os << name << ',' << to_string(r.certified) << ',';
      for (std::size_t i = 0; i < r.excluded.size(); ++i) os << (i ? " " : "") << to_string(r.excluded[i]);
      os << '\n';
    };
    for (const auto& r : cert.reports) row(r.criterion, r);
    row("combined", cert.combined);
    std::cout << os.str();
    if (!o.out.empty()) open_out(o.out) << os.str();
  } else {
    std::cout << j.dump(2) << '\n';
    if (!o.out.empty()) write_json(o.out, j);
  }
  return 0;
}

int run_bench(const Common& o, const std::string& which, double force_p, const std::string& c_text) {
  ExperimentConfig cfg;
  if (which == "table1") cfg.experiment = Experiment::Table1;
  else if (which == "table2") cfg.experiment = Experiment::Table2;
  else if (which == "fig2") cfg.experiment = Experiment::Fig2, cfg.dims = kPsi432Dims;
  else throw ConfigError("bench: unknown experiment '" + which + "' (table1|table2|fig2)");
  apply_common(o, cfg);
  if (force_p >= 0) cfg.force_p = force_p;
  if (!c_text.empty()) cfg.fixed_c = parse_c(c_text);
  cfg.validate();
  if (cfg.experiment == Experiment::Fig2) {
    const auto r = run_fig2(cfg);
    write_fig2_summary(std::cout, r);
    if (!o.out.empty()) {
      if (o.format == "json") {
        write_json(o.out, fig2_json(r));
      } else {
        auto os = open_out(o.out);
        write_fig2_csv(os, r, cfg);
        auto ss = open_out(o.out + ".summary.csv");
        ss << "samples,cmc_wins,fidelity_wins,ties,win_rate,undetectable_cmc,undetectable_fidelity,cgm_above_0.8,"
              "cmc_wins_cgm_above_0.8\n"
           << r.records.size() << ',' << r.cmc_wins << ',' << r.fid_wins << ',' << r.ties << ','
           << format_number(r.win_rate()) << ',' << r.undetectable_cmc << ',' << r.undetectable_fid << ','
           << r.cgm_above << ',' << r.cmc_wins_cgm_above << '\n';
      }
    }
    return 0;
  }
  const auto t = cfg.experiment == Experiment::Table1 ? run_table1(cfg) : run_table2(cfg);
  write_table_summary(std::cout, t);
  if (!o.out.empty()) {
    if (o.format == "json") {
      write_json(o.out, table_json(t));
    } else {
      auto os = open_out(o.out);
      write_table_records_csv(os, t);
      auto ss = open_out(o.out + ".summary.csv");
      write_table_csv(ss, t);
    }
  }
  return 0;
}

void add_common(CLI::App* app, Common& o, bool optimizer) {
  app->add_option("--dims", o.dims, "local dimensions, e.g. 3,3,3");
  app->add_option("--samples", o.samples, "number of samples");
  app->add_option("--seed", o.seed, "64-bit stream seed");
  app->add_option("--out", o.out, "output path");
  app->add_option("--format", o.format, "csv or json");
  app->add_option("--threads", o.threads, "worker threads (0 = all cores)");
  if (optimizer) {
    app->add_option("--criteria", o.criteria, "comma-separated subset of cmc-system,product-witness,fidelity,"
                                              "corrtensor,linentropy");
    app->add_option("--opt-evals", o.opt_evals, "Nelder-Mead evaluation budget per state");
    app->add_option("--opt-restarts", o.opt_restarts, "random restarts of the basis search");
    app->add_option("--opt-seed", o.opt_seed, "seed of the simplex restarts");
    app->add_option("--le-prefactor", o.prefactor, "linear-entropy bound prefactor: two (default) or one");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified lower bounds on Schmidt-number vectors of multi-qudit states"};
  app.require_subcommand(1);
  Common o;

  auto* gen = app.add_subcommand("gen", "write state files");
  std::string kind = "lambda1", c_text;
  double p = 1.0;
  std::uint64_t first = 0;
  add_common(gen, o, false);
  gen->add_option("--kind", kind, "ghz|psi432|lebesgue|lambda1|ghz-random|pure|product|mixed");
  gen->add_option("--p", p, "signal weight for mixtures");
  gen->add_option("--c", c_text, "psi432 coefficients: four entries re or re:im");
  gen->add_option("--index", first, "first sample index");

  auto* cert = app.add_subcommand("certify", "certify one state file");
  std::string file, target_file;
  add_common(cert, o, true);
  cert->add_option("state", file, "state JSON file")->required();
  cert->add_option("--target", target_file, "pure target state for the fidelity criterion");
  cert->add_flag("--repair", o.repair, "symmetrize, clip negative eigenvalues and renormalize first");

  auto* bench = app.add_subcommand("bench", "run a benchmark experiment");
  std::string which;
  double force_p = -1.0;
  std::string bench_c;
  add_common(bench, o, true);
  bench->add_option("experiment", which, "table1|table2|fig2")->required();
  bench->add_option("--force-p", force_p, "table2: fix the GHZ weight instead of sampling it");
  bench->add_option("--c", bench_c, "fig2: fix the psi432 coefficients");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }

  try {
    if (*gen) return run_gen(o, kind, p, c_text, first);
    if (*cert) return run_certify(o, file, target_file);
    if (*bench) return run_bench(o, which, force_p, bench_c);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 3;
  } catch (const InvalidDimension& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
