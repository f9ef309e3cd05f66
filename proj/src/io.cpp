#include "hybent/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace hybent {

std::string format_g12(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

nlohmann::json state_to_json(const PureState& state) {
  nlohmann::json amps = nlohmann::json::array();
  for (const auto& [q, z] : state.amplitudes()) {
    amps.push_back({q.n[0], q.n[1], q.n[2], q.n[3], z.real(), z.imag()});
  }
  return {{"n_max", state.n_max()},
          {"leakage", state.leakage()},
          {"amplitudes", std::move(amps)}};
}

namespace {

int require_int(const nlohmann::json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw IoError(std::string("state file: ") + what + " must be a non-negative integer");
  }
  return j.get<int>();
}

double require_number(const nlohmann::json& j, const char* what) {
  if (!j.is_number()) {
    throw IoError(std::string("state file: ") + what + " must be a number");
  }
  const double v = j.get<double>();
  if (!std::isfinite(v)) {
    throw IoError(std::string("state file: ") + what + " must be finite");
  }
  return v;
}

}  // namespace

PureState state_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n_max") || !j.contains("amplitudes")) {
    throw IoError("state file: expected object with n_max and amplitudes");
  }
  const int n_max = require_int(j.at("n_max"), "n_max");
  PureState state(n_max);
  if (j.contains("leakage")) {
    const double leakage = require_number(j.at("leakage"), "leakage");
    if (leakage < 0.0) throw IoError("state file: leakage must be >= 0");
    state.set_leakage(leakage);
  }
  const auto& amps = j.at("amplitudes");
  if (!amps.is_array()) throw IoError("state file: amplitudes must be an array");
  for (const auto& rec : amps) {
    if (!rec.is_array() || rec.size() != 6) {
      throw IoError("state file: each amplitude record needs 6 entries");
    }
    OccupationQuad q(require_int(rec[0], "occupation"), require_int(rec[1], "occupation"),
                     require_int(rec[2], "occupation"), require_int(rec[3], "occupation"));
    for (int c : q.n) {
      if (c > n_max) throw IoError("state file: occupation exceeds n_max");
    }
    state.accumulate(q, Complex(require_number(rec[4], "amplitude"),
                                require_number(rec[5], "amplitude")));
  }
  return state;
}

nlohmann::json ensemble_to_json(const StateEnsemble& ensemble) {
  nlohmann::json branches = nlohmann::json::array();
  for (const auto& branch : ensemble.branches()) {
    branches.push_back({{"weight", branch.weight},
                        {"state", state_to_json(branch.state)}});
  }
  return {{"n_max", ensemble.n_max()},
          {"pruned_weight", ensemble.pruned_weight()},
          {"branches", std::move(branches)}};
}

StateEnsemble ensemble_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n_max") || !j.contains("branches")) {
    throw IoError("state file: expected object with n_max and branches");
  }
  StateEnsemble ensemble(require_int(j.at("n_max"), "n_max"));
  if (j.contains("pruned_weight")) {
    ensemble.add_pruned_weight(require_number(j.at("pruned_weight"), "pruned_weight"));
  }
  const auto& branches = j.at("branches");
  if (!branches.is_array() || branches.empty()) {
    throw IoError("state file: branches must be a non-empty array");
  }
  for (const auto& b : branches) {
    if (!b.is_object() || !b.contains("weight") || !b.contains("state")) {
      throw IoError("state file: each branch needs weight and state");
    }
    const double weight = require_number(b.at("weight"), "weight");
    if (weight <= 0.0) throw IoError("state file: branch weight must be positive");
    PureState state = state_from_json(b.at("state"));
    if (state.n_max() != ensemble.n_max()) {
      throw IoError("state file: branch cutoff differs from ensemble cutoff");
    }
    ensemble.add_branch(weight, std::move(state));
  }
  return ensemble;
}

LoadedState load_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open state file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("cannot parse state file " + path + ": " + e.what());
  }
  if (j.is_object() && j.contains("branches")) return ensemble_from_json(j);
  return state_from_json(j);
}

void save_state_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file: " + path);
  out << j.dump(2) << "\n";
}

nlohmann::json report_to_json(const WitnessReport& report) {
  return {{"r", report.r},
          {"subspace", report.subspace},
          {"fidelity", report.fidelity},
          {"bound_number", report.bound_number},
          {"bound_polarization", report.bound_polarization},
          {"threshold", report.threshold},
          {"witness_value", report.witness_value},
          {"conditioning_probability", report.conditioning_probability},
          {"tail_weight", report.tail_weight},
          {"verdict", report.verdict}};
}

nlohmann::json oracle_to_json(const OracleResult& result) {
  return {{"achieved", result.achieved},
          {"bound", result.bound},
          {"gap", result.gap},
          {"restarts", result.restarts},
          {"converged_restarts", result.converged_restarts},
          {"residual", result.residual},
          {"seed", result.seed}};
}

}  // namespace hybent
