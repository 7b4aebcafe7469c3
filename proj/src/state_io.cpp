#include "snvec/state_io.hpp"

#include "snvec/error.hpp"

#include <fstream>
#include <sstream>

namespace snvec {

using nlohmann::json;

namespace {

cplx parse_entry(const json& e, const std::string& field, std::size_t i) {
  const std::string where = field + "[" + std::to_string(i) + "]";
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
    throw ParseError(where + ": expected [re, im]");
  return {e[0].get<double>(), e[1].get<double>()};
}

json entries(const cplx* data, std::size_t n) {
  json a = json::array();
  for (std::size_t i = 0; i < n; ++i) a.push_back({data[i].real(), data[i].imag()});
  return a;
}

}  // namespace

DensityMatrix state_from_json(const json& j, bool repair) {
  if (!j.is_object()) throw ParseError("state: expected a JSON object");
  if (!j.contains("dims") || !j["dims"].is_array()) throw ParseError("dims: missing or not an array");
  std::vector<int> d;
  for (std::size_t i = 0; i < j["dims"].size(); ++i) {
    if (!j["dims"][i].is_number_integer()) throw ParseError("dims[" + std::to_string(i) + "]: expected an integer");
    d.push_back(j["dims"][i].get<int>());
  }
  Dims dims(d);
  const std::size_t total = static_cast<std::size_t>(dims.total());
  const bool has_m = j.contains("matrix"), has_v = j.contains("vector");
  if (has_m == has_v) throw ParseError("state: exactly one of \"matrix\" or \"vector\" required");
  const std::string field = has_m ? "matrix" : "vector";
  const json& arr = j[field];
  if (!arr.is_array()) throw ParseError(field + ": expected an array");
  const std::size_t want = has_m ? total * total : total;
  if (arr.size() != want)
    throw ParseError(field + ": expected " + std::to_string(want) + " entries, got " + std::to_string(arr.size()));
  if (has_v) {
    CVector v(static_cast<Eigen::Index>(total));
    for (std::size_t i = 0; i < total; ++i) v[i] = parse_entry(arr[i], field, i);
    if (repair) return PureState::normalized(dims, v).projector();
    return PureState(dims, v).projector();
  }
  CMatrix m(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(total));
  for (std::size_t i = 0; i < want; ++i) m(i / total, i % total) = parse_entry(arr[i], field, i);
  return DensityMatrix(dims, std::move(m), repair);
}

DensityMatrix read_state_file(const std::string& path, bool repair) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return state_from_json(j, repair);
}

json state_to_json(const DensityMatrix& rho) {
  const CMatrix& m = rho.matrix();
  std::vector<cplx> flat;
  flat.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index k = 0; k < m.cols(); ++k) flat.push_back(m(i, k));
  return {{"dims", rho.dims().values()}, {"matrix", entries(flat.data(), flat.size())}};
}

json state_to_json(const PureState& psi) {
  const CVector& v = psi.amplitudes();
  return {{"dims", psi.dims().values()}, {"vector", entries(v.data(), static_cast<std::size_t>(v.size()))}};
}

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<cplx> r;
    for (Eigen::Index k = 0; k < m.cols(); ++k) r.push_back(m(i, k));
    rows.push_back(entries(r.data(), r.size()));
  }
  return rows;
}

json report_to_json(const CriterionReport& r) {
  json j;
  j["criterion"] = r.criterion;
  j["excluded"] = r.excluded;
  j["certified"] = r.certified;
  j["witness_values"] = r.witness_values;
  j["rank_semantics"] = r.rank_semantics;
  if (!r.basis.empty()) j["basis"] = r.basis;
  return j;
}

json frame_to_json(const std::vector<CMatrix>& unitaries) {
  json a = json::array();
  for (const auto& u : unitaries) a.push_back(matrix_to_json(u));
  return a;
}

}  // namespace snvec
