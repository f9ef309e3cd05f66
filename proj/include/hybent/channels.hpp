#ifndef HYBENT_CHANNELS_HPP
#define HYBENT_CHANNELS_HPP

#include <array>

#include "hybent/fock.hpp"

// Noise channels connecting the ideal states to laboratory conditions:
// per-mode photon loss in Kraus form, white-noise admixture on the
// sector-correlated support, cross-sector dephasing, and the bisection
// that locates where a witness violation disappears.

namespace hybent {

struct NoiseSpec {
  double loss_eta = 1.0;        // per-mode transmissivity, 1 = lossless
  double visibility = 1.0;      // white-noise mixing weight of the signal
  double dephase_strength = 0.0;  // 1 = full cross-sector decoherence
  // Per-mode transmissivities for asymmetric loss; defaults follow loss_eta.
  std::array<double, 4> per_mode_eta{1.0, 1.0, 1.0, 1.0};

  void validate() const;
};

inline constexpr double kBranchPrune = 1e-10;

// Binomial loss applied independently to all four modes. One branch per
// lost-photon tuple; branches below `prune` are dropped and accounted in
// the ensemble's pruned weight. Input is normalized first.
StateEnsemble photon_loss(const PureState& state, double eta,
                          double prune = kBranchPrune);
StateEnsemble photon_loss(const PureState& state, const std::array<double, 4>& eta,
                          double prune = kBranchPrune);
StateEnsemble photon_loss(const StateEnsemble& state, double eta,
                          double prune = kBranchPrune);

// v * rho + (1-v) * (maximally mixed state on the sector-correlated basis
// |n, N-n, N-n, n> with N in the subspace, within the cutoff).
StateEnsemble white_noise_mix(const PureState& state, double visibility,
                              const SectorSet& subspace);

// Interpolates between the state (s = 0) and its block-diagonal projection
// onto fixed local-photon-number sectors (s = 1). Blocks are labelled by
// the pair (N_A, N_B), so at s = 1 no cross-sector coherence survives.
StateEnsemble dephase_sectors(const PureState& state, double strength);
StateEnsemble dephase_sectors(const StateEnsemble& state, double strength);

enum class NoiseParameter { Loss, Visibility };

// Critical noise value where the witness value crosses zero for the
// macroscopic singlet at squeezing r, found by bisection after a grid
// scan that checks the fidelity is monotone in the parameter. Throws when
// the clean endpoint shows no violation or no sign change exists.
double robustness_threshold(NoiseParameter parameter, double r,
                            const SectorSet& subspace, int n_max,
                            double bisection_tol = 1e-4);

}  // namespace hybent

#endif
