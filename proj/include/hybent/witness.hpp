#ifndef HYBENT_WITNESS_HPP
#define HYBENT_WITNESS_HPP

#include <string>

#include "hybent/fock.hpp"
#include "hybent/states.hpp"

// The hybrid witness W = F*1 - |Psi^-><Psi^-|. A state passes the test
// (verdict "hybrid-entangled") when its fidelity to the macroscopic
// singlet exceeds both separability thresholds:
//   F_sup^N <= max_N p~_N   (block-diagonal states),
//   F_sup^P <= sum_N p~_N/(N+1)   (sector-wise product states),
// with weights renormalized to the evaluation subspace.

namespace hybent {

struct WitnessReport {
  double r;
  std::string subspace;
  double fidelity;
  double bound_number;
  double bound_polarization;
  double threshold;      // max of the two bounds
  double witness_value;  // threshold - fidelity; negative certifies
  double conditioning_probability;
  double tail_weight;
  std::string verdict;  // "hybrid-entangled" | "inconclusive"
};

struct BoundDetail {
  double value;
  int argmax_sector;
};

// Number-separability bound max_{N in subspace} p~_N, summed analytically
// over the full set (including unbounded tails). At r = 0 the renormalized
// limit concentrates on the lowest sector.
double bound_number(double r, const SectorSet& subspace);
BoundDetail bound_number_detail(double r, const SectorSet& subspace);

// Polarization-separability bound sum_{N in subspace} p~_N/(N+1).
double bound_polarization(double r, const SectorSet& subspace);

// Conditions the state and the MBS reference on the subspace, evaluates
// the fidelity and both bounds, and renders the verdict. State, reference
// and bounds all use the same in-cutoff renormalization so that states
// built from the separable sets can never be flagged. tail_weight reports
// the reference's truncation leakage.
WitnessReport evaluate_witness(const PureState& state, double r,
                               const SectorSet& subspace);
WitnessReport evaluate_witness(const StateEnsemble& state, double r,
                               const SectorSet& subspace);

struct WitnessEvaluation {
  WitnessReport report;
  int argmax_sector;
};

WitnessEvaluation evaluate_witness_detail(const PureState& state, double r,
                                          const SectorSet& subspace);
WitnessEvaluation evaluate_witness_detail(const StateEnsemble& state, double r,
                                          const SectorSet& subspace);

// Squeezing at which the argmax sector of the number bound changes,
// located by a grid scan over [r_lo, r_hi] and bisection of the sector
// tie. Throws when the subspace has fewer than two sectors or no
// crossover occurs in range.
double crossover_squeezing(const SectorSet& subspace, double r_lo = 0.0,
                           double r_hi = 3.0);

}  // namespace hybent

#endif
