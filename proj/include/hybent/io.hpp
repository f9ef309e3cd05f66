#ifndef HYBENT_IO_HPP
#define HYBENT_IO_HPP

#include <string>
#include <variant>

#include <json.hpp>

#include "hybent/fock.hpp"
#include "hybent/oracles.hpp"
#include "hybent/witness.hpp"

namespace hybent {

// Malformed or unreadable input files. Surfaces as CLI exit code 2.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Pure-state schema: {"n_max": int, "leakage": real,
//   "amplitudes": [[n_AH, n_AV, n_BH, n_BV, re, im], ...]}.
// Amplitude order is unspecified; consumers must not rely on it.
nlohmann::json state_to_json(const PureState& state);
PureState state_from_json(const nlohmann::json& j);

// Ensembles wrap pure states: {"n_max": int, "pruned_weight": real,
//   "branches": [{"weight": w, "state": {...}}, ...]}.
nlohmann::json ensemble_to_json(const StateEnsemble& ensemble);
StateEnsemble ensemble_from_json(const nlohmann::json& j);

using LoadedState = std::variant<PureState, StateEnsemble>;
LoadedState load_state_file(const std::string& path);
void save_state_file(const std::string& path, const nlohmann::json& j);

nlohmann::json report_to_json(const WitnessReport& report);
nlohmann::json oracle_to_json(const OracleResult& result);

// Floats printed with 12 significant digits for diff-stable output.
std::string format_g12(double value);

}  // namespace hybent

#endif
