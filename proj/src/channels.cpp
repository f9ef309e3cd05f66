#include "hybent/channels.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hybent/states.hpp"
#include "hybent/witness.hpp"

namespace hybent {

namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

void check_unit_interval(double value, const char* what) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
  }
}

}  // namespace

void NoiseSpec::validate() const {
  check_unit_interval(loss_eta, "NoiseSpec.loss_eta");
  check_unit_interval(visibility, "NoiseSpec.visibility");
  check_unit_interval(dephase_strength, "NoiseSpec.dephase_strength");
  for (double eta : per_mode_eta) check_unit_interval(eta, "NoiseSpec.per_mode_eta");
}

//-------------------------------------------------------------------------
// Photon loss
//-------------------------------------------------------------------------

namespace {

// Kraus branch for losing k photons from |n>: amplitude factor
// sqrt(C(n,k) eta^(n-k) (1-eta)^k), occupation n -> n-k.
double loss_factor(int n, int k, double eta) {
  return std::sqrt(binomial(n, k) * std::pow(eta, n - k) * std::pow(1.0 - eta, k));
}

void apply_loss_branches(const PureState& unit_state, double weight_scale,
                         const std::array<double, 4>& eta, double prune,
                         StateEnsemble& out) {
  std::array<int, 4> max_n{0, 0, 0, 0};
  for (const auto& [q, z] : unit_state.amplitudes()) {
    for (int m = 0; m < 4; ++m) max_n[m] = std::max(max_n[m], q.n[m]);
  }

  std::array<int, 4> k{0, 0, 0, 0};
  while (true) {
    PureState branch(unit_state.n_max());
    for (const auto& [q, z] : unit_state.amplitudes()) {
      double factor = 1.0;
      OccupationQuad lost = q;
      bool alive = true;
      for (int m = 0; m < 4; ++m) {
        if (q.n[m] < k[m]) {
          alive = false;
          break;
        }
        factor *= loss_factor(q.n[m], k[m], eta[m]);
        lost.n[m] = q.n[m] - k[m];
      }
      if (!alive || factor == 0.0) continue;
      branch.accumulate(lost, z * factor);
    }
    const double w = branch.norm_squared();
    if (w >= prune) {
      out.add_branch(weight_scale * w, scaled(branch, 1.0 / std::sqrt(w)));
    } else if (w > 0.0) {
      out.add_pruned_weight(weight_scale * w);
    }

    // Advance the lost-photon tuple.
    int m = 0;
    while (m < 4) {
      if (++k[m] <= max_n[m]) break;
      k[m] = 0;
      ++m;
    }
    if (m == 4) break;
  }
}

}  // namespace

StateEnsemble photon_loss(const PureState& state, const std::array<double, 4>& eta,
                          double prune) {
  for (double e : eta) check_unit_interval(e, "photon_loss: eta");
  StateEnsemble out(state.n_max());
  apply_loss_branches(normalized(state), 1.0, eta, prune, out);
  return out;
}

StateEnsemble photon_loss(const PureState& state, double eta, double prune) {
  return photon_loss(state, std::array<double, 4>{eta, eta, eta, eta}, prune);
}

StateEnsemble photon_loss(const StateEnsemble& state, double eta, double prune) {
  check_unit_interval(eta, "photon_loss: eta");
  const std::array<double, 4> etas{eta, eta, eta, eta};
  StateEnsemble out(state.n_max());
  out.add_pruned_weight(state.pruned_weight());
  for (const auto& branch : state.branches()) {
    apply_loss_branches(normalized(branch.state), branch.weight, etas, prune, out);
  }
  return out;
}

//-------------------------------------------------------------------------
// White noise
//-------------------------------------------------------------------------

StateEnsemble white_noise_mix(const PureState& state, double visibility,
                              const SectorSet& subspace) {
  check_unit_interval(visibility, "white_noise_mix: visibility");
  if (subspace.empty()) {
    throw std::invalid_argument("white_noise_mix: empty sector set");
  }
  const std::vector<int> sectors = subspace.members_up_to(state.n_max());
  if (sectors.empty()) {
    throw EmptySubspaceError("white_noise_mix: no representable sectors");
  }
  int dimension = 0;
  for (int s : sectors) dimension += s + 1;

  StateEnsemble out(state.n_max());
  if (visibility > 0.0) out.add_branch(visibility, normalized(state));
  if (visibility < 1.0) {
    const double w = (1.0 - visibility) / dimension;
    for (int s : sectors) {
      for (int n = 0; n <= s; ++n) {
        out.add_branch(w, PureState::basis_state(
                              OccupationQuad(n, s - n, s - n, n), state.n_max()));
      }
    }
  }
  return out;
}

//-------------------------------------------------------------------------
// Cross-sector dephasing
//-------------------------------------------------------------------------

namespace {

void add_dephased_branches(const PureState& unit_state, double weight_scale,
                           double strength, StateEnsemble& out) {
  if (strength < 1.0) {
    out.add_branch(weight_scale * (1.0 - strength), unit_state);
  }
  if (strength == 0.0) return;

  std::map<std::pair<int, int>, PureState> blocks;
  for (const auto& [q, z] : unit_state.amplitudes()) {
    const std::pair<int, int> label{q.alice_total(), q.bob_total()};
    auto [it, inserted] = blocks.try_emplace(label, unit_state.n_max());
    it->second.accumulate(q, z);
  }
  for (auto& [label, block] : blocks) {
    const double w = block.norm_squared();
    if (w <= 0.0) continue;
    out.add_branch(weight_scale * strength * w, scaled(block, 1.0 / std::sqrt(w)));
  }
}

}  // namespace

StateEnsemble dephase_sectors(const PureState& state, double strength) {
  check_unit_interval(strength, "dephase_sectors: strength");
  StateEnsemble out(state.n_max());
  add_dephased_branches(normalized(state), 1.0, strength, out);
  return out;
}

StateEnsemble dephase_sectors(const StateEnsemble& state, double strength) {
  check_unit_interval(strength, "dephase_sectors: strength");
  StateEnsemble out(state.n_max());
  out.add_pruned_weight(state.pruned_weight());
  for (const auto& branch : state.branches()) {
    add_dephased_branches(normalized(branch.state), branch.weight, strength, out);
  }
  return out;
}

//-------------------------------------------------------------------------
// Robustness bisection
//-------------------------------------------------------------------------

double robustness_threshold(NoiseParameter parameter, double r,
                            const SectorSet& subspace, int n_max,
                            double bisection_tol) {
  if (bisection_tol <= 0.0) {
    throw std::invalid_argument("robustness_threshold: tolerance must be positive");
  }
  const PureState clean = mbs_singlet({r, 0.0}, n_max);
  // Loss hits the raw state before any conditioning; the white-noise
  // admixture models imperfection within the accessible subspace, so it
  // acts on the conditioned singlet and the fidelity stays affine in v.
  const PureState conditioned = parameter == NoiseParameter::Visibility
                                    ? project_subspace(clean, subspace).state
                                    : clean;

  auto report_at = [&](double value) -> WitnessReport {
    if (parameter == NoiseParameter::Loss) {
      return evaluate_witness(photon_loss(clean, value), r, subspace);
    }
    return evaluate_witness(white_noise_mix(conditioned, value, subspace), r,
                            subspace);
  };

  const WitnessReport at_clean = report_at(1.0);
  // A value within rounding of zero (a state sitting on the hyperplane)
  // does not count as a violation worth bisecting.
  if (at_clean.witness_value >= -1e-12) {
    throw std::runtime_error("robustness_threshold: witness not violated at the clean endpoint");
  }

  // Scan towards stronger noise; assert fidelity is monotone on the grid
  // and find a sign-change bracket.
  constexpr int kGridPoints = 11;
  double lo = -1.0, hi = -1.0;
  double prev_fidelity = at_clean.fidelity;
  double prev_value = 1.0;
  bool bracket_found = false;
  for (int i = 1; i < kGridPoints; ++i) {
    const double value = 1.0 - static_cast<double>(i) / (kGridPoints - 1);
    WitnessReport rep;
    try {
      rep = report_at(value);
    } catch (const std::runtime_error&) {
      break;  // state lost all weight in the subspace; bracket ends here
    }
    if (rep.fidelity > prev_fidelity + 1e-9) {
      throw std::runtime_error("robustness_threshold: fidelity not monotone in the noise parameter");
    }
    if (!bracket_found && rep.witness_value >= 0.0) {
      lo = value;
      hi = prev_value;
      bracket_found = true;
    }
    prev_fidelity = rep.fidelity;
    prev_value = value;
  }
  if (!bracket_found) {
    throw std::runtime_error("robustness_threshold: no sign change in [0, 1]");
  }

  while (hi - lo > bisection_tol) {
    const double mid = 0.5 * (lo + hi);
    if (report_at(mid).witness_value < 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace hybent
