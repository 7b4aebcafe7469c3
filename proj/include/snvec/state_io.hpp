#pragma once

#include "snvec/error.hpp"
#include "snvec/lattice.hpp"
#include "snvec/qudit.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace snvec {

/// Errors in state files; the message names the offending field.
class ParseError : public Error {
public:
  using Error::Error;
};

/// Reads { "dims": [...], "matrix": [[re,im],...] } or
/// { "dims": [...], "vector": [[re,im],...] } (pure state). Throws ParseError
/// for malformed content and ValidationError for invariant failures.
DensityMatrix state_from_json(const nlohmann::json& j, bool repair = false);
DensityMatrix read_state_file(const std::string& path, bool repair = false);

nlohmann::json state_to_json(const DensityMatrix& rho);
nlohmann::json state_to_json(const PureState& psi);

nlohmann::json matrix_to_json(const CMatrix& m);
nlohmann::json report_to_json(const CriterionReport& r);

/// One JSON array of per-particle unitaries.
nlohmann::json frame_to_json(const std::vector<CMatrix>& unitaries);

}  // namespace snvec
