#ifndef HYBENT_STATES_HPP
#define HYBENT_STATES_HPP

#include <map>
#include <vector>

#include "hybent/fock.hpp"

// Constructors for the macroscopic Bell singlet, its per-sector singlets,
// two-mode squeezed vacuum, sector-mixture states and the exemplar
// superposition states, plus beam-splitter interference and squeezing
// estimation.

namespace hybent {

struct SqueezingParams {
  double r = 0.0;      // squeezing magnitude, >= 0
  double theta = 0.0;  // squeezing phase in [0, 2*pi)

  void validate() const;
};

//-------------------------------------------------------------------------
// Sector occupation statistics of the macroscopic singlet
//-------------------------------------------------------------------------

// Occupation probability of the N-local-photon sector,
//   p_N = tanh(r)^(2N) (N+1) / cosh(r)^4.
double sector_occupation(int sector, double r);

// Series sums over a sector set, evaluated term by term until the
// geometric remainder is negligible. `max_sector` (if >= 0) restricts the
// sum to representable sectors.
double sector_weight_sum(const SectorSet& sectors, double r, int max_sector = -1);
// Same but with each term divided by (N+1).
double sector_overlap_sum(const SectorSet& sectors, double r, int max_sector = -1);

struct SectorWeights {
  double r;
  std::map<int, double> weights;  // N -> p_N, or renormalized p~_N
  SectorSet subspace;
  bool renormalized;
};

// Weights for every sector of the set, up to where the remaining tail is
// below 1e-13 (unbounded sets) or over the listed members (finite sets).
// With renormalize, weights are divided by the total subspace weight; the
// r -> 0 limit concentrates on the lowest sector and is guarded.
SectorWeights sector_probabilities(const SqueezingParams& params,
                                   const SectorSet& subspace, bool renormalize);

//-------------------------------------------------------------------------
// State constructors
//-------------------------------------------------------------------------

// Macroscopic singlet sum_{n,m} (-1)^m tanh(r)^(n+m)/cosh(r)^2 |n,m,m,n>,
// restricted to the complete sectors n+m <= n_max so that every retained
// sector keeps its exact singlet structure; the analytic remainder goes to
// leakage. Only theta = 0 is supported.
PureState mbs_singlet(const SqueezingParams& params, int n_max);

// |psi_N^-> = (N+1)^(-1/2) sum_n (-1)^(N-n) |n, N-n, N-n, n>.
PureState sector_singlet(int sector, int n_max);

// Two-mode squeezed vacuum sum_n sign^n tanh(r)^n/cosh(r) |n>_a |n>_b on a
// pair of modes spanning both parties, vacuum elsewhere.
PureState tmsv(const SqueezingParams& params, Mode alice_mode, Mode bob_mode,
               int sign, int n_max);

// Classical mixture sum_N w_N |psi_N^-><psi_N^-|.
StateEnsemble blind_mixture(const std::map<int, double>& weights, int n_max);

enum class ExemplarKind { CrossLayer, BeamSplitter };

// CrossLayer: alpha|2002> + beta|0110>. BeamSplitter: alpha|2001> + beta|0120>.
PureState exemplar_state(ExemplarKind kind, Complex alpha, Complex beta, int n_max);

// Splits a source spatial mode (held in Alice's slots, Bob's as vacuum
// ancilla) on a beam splitter acting identically on both polarizations:
//   out_A = sqrt(t) in_src + sqrt(1-t) in_anc,
//   out_B = sqrt(1-t) in_src - sqrt(t) in_anc.
PureState beam_splitter_interfere(const PureState& input, double transmissivity);

struct Postselection {
  PureState state;
  double probability;
};

// Keeps only the listed quads, renormalizes, and reports the kept weight.
Postselection postselect_pair(const PureState& state,
                              const std::vector<OccupationQuad>& kept);

// Inverts the per-mode TMSV mean photon number: r = asinh(sqrt(n_mean)).
double estimate_squeezing(double mean_photons_per_mode);

}  // namespace hybent

#endif
