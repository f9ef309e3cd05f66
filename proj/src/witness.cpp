#include "hybent/witness.hpp"

#include <algorithm>
#include <cmath>

namespace hybent {

namespace {

constexpr double kTieTolerance = 1e-12;

// Largest p_N over the subspace members up to max_sector (or the analytic
// argmax for unbounded tails), without renormalization.
BoundDetail peak_occupation(double r, const SectorSet& subspace, int max_sector) {
  double best = -1.0;
  int best_sector = -1;
  for (int s : subspace.finite_sectors()) {
    if (max_sector >= 0 && s > max_sector) continue;
    const double p = sector_occupation(s, r);
    if (p > best) {
      best = p;
      best_sector = s;
    }
  }
  if (subspace.tail_from()) {
    const double x = std::tanh(r) * std::tanh(r);
    const int k = *subspace.tail_from();
    double term = sector_occupation(k, r);
    for (int n = k;; ++n) {
      if (max_sector >= 0 && n > max_sector) break;
      if (term > best) {
        best = term;
        best_sector = n;
      }
      const double ratio = x * (n + 2.0) / (n + 1.0);
      if (ratio < 1.0) break;  // p_N decreasing from here on
      term *= ratio;
    }
  }
  if (best_sector < 0) {
    throw std::runtime_error("bound_number: no representable sector in subspace");
  }
  return {best, best_sector};
}

BoundDetail bound_number_detail_at(double r, const SectorSet& subspace,
                                   int max_sector) {
  if (subspace.empty()) throw std::invalid_argument("bound_number: empty sector set");
  if (r < 0.0) throw std::invalid_argument("bound_number: negative r");
  if (std::tanh(r) == 0.0) {
    // r -> 0 limit of the renormalized weights: all mass on the lowest sector.
    return {1.0, subspace.min_sector()};
  }
  const double total = sector_weight_sum(subspace, r, max_sector);
  if (total < 1e-300) {
    throw EmptySubspaceError("bound_number: subspace weight underflows at this r");
  }
  const BoundDetail peak = peak_occupation(r, subspace, max_sector);
  return {peak.value / total, peak.argmax_sector};
}

double bound_polarization_at(double r, const SectorSet& subspace, int max_sector) {
  if (subspace.empty()) {
    throw std::invalid_argument("bound_polarization: empty sector set");
  }
  if (r < 0.0) throw std::invalid_argument("bound_polarization: negative r");
  if (std::tanh(r) == 0.0) {
    return 1.0 / (subspace.min_sector() + 1.0);
  }
  const double total = sector_weight_sum(subspace, r, max_sector);
  if (total < 1e-300) {
    throw EmptySubspaceError("bound_polarization: subspace weight underflows at this r");
  }
  return sector_overlap_sum(subspace, r, max_sector) / total;
}

}  // namespace

double bound_number(double r, const SectorSet& subspace) {
  return bound_number_detail_at(r, subspace, -1).value;
}

BoundDetail bound_number_detail(double r, const SectorSet& subspace) {
  return bound_number_detail_at(r, subspace, -1);
}

double bound_polarization(double r, const SectorSet& subspace) {
  return bound_polarization_at(r, subspace, -1);
}

namespace {

template <typename StateT>
WitnessEvaluation evaluate_impl(const StateT& state, double r,
                                const SectorSet& subspace) {
  if (r < 0.0) throw std::invalid_argument("evaluate_witness: negative r");
  const int n_max = state.n_max();
  const PureState reference = mbs_singlet({r, 0.0}, n_max);
  const Projection ref_proj = project_subspace(reference, subspace);
  const auto state_proj = project_subspace(state, subspace);

  const double fidelity = fidelity_to_pure(state_proj.state, ref_proj.state);

  // Bounds renormalized exactly like the conditioned reference, i.e. over
  // the sectors representable at this cutoff.
  const BoundDetail number = bound_number_detail_at(r, subspace, n_max);
  const double polarization = bound_polarization_at(r, subspace, n_max);
  const double threshold = std::max(number.value, polarization);

  WitnessReport report;
  report.r = r;
  report.subspace = subspace.str();
  report.fidelity = fidelity;
  report.bound_number = number.value;
  report.bound_polarization = polarization;
  report.threshold = threshold;
  report.witness_value = threshold - fidelity;
  report.conditioning_probability = state_proj.probability;
  report.tail_weight = reference.leakage();
  report.verdict = report.witness_value < 0.0 ? "hybrid-entangled" : "inconclusive";
  return {report, number.argmax_sector};
}

}  // namespace

WitnessEvaluation evaluate_witness_detail(const PureState& state, double r,
                                          const SectorSet& subspace) {
  return evaluate_impl(state, r, subspace);
}

WitnessEvaluation evaluate_witness_detail(const StateEnsemble& state, double r,
                                          const SectorSet& subspace) {
  return evaluate_impl(state, r, subspace);
}

WitnessReport evaluate_witness(const PureState& state, double r,
                               const SectorSet& subspace) {
  return evaluate_impl(state, r, subspace).report;
}

WitnessReport evaluate_witness(const StateEnsemble& state, double r,
                               const SectorSet& subspace) {
  return evaluate_impl(state, r, subspace).report;
}

double crossover_squeezing(const SectorSet& subspace, double r_lo, double r_hi) {
  if (subspace.sector_count() < 2) {
    throw std::invalid_argument("crossover_squeezing: need at least two sectors");
  }
  if (!(r_lo >= 0.0 && r_hi > r_lo)) {
    throw std::invalid_argument("crossover_squeezing: bad scan range");
  }

  const double step = 0.005;
  double prev_r = std::max(r_lo, 1e-9);
  int prev_sector = bound_number_detail(prev_r, subspace).argmax_sector;
  for (double r = prev_r + step; r <= r_hi + 0.5 * step; r += step) {
    const int sector = bound_number_detail(std::min(r, r_hi), subspace).argmax_sector;
    if (sector != prev_sector) {
      // Bisect the occupation tie p_a(r) = p_b(r).
      const int a = prev_sector;
      const int b = sector;
      double lo = prev_r;
      double hi = std::min(r, r_hi);
      auto gap = [&](double rr) {
        return sector_occupation(b, rr) - sector_occupation(a, rr);
      };
      while (hi - lo > kTieTolerance) {
        const double mid = 0.5 * (lo + hi);
        if (gap(mid) > 0.0) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      return 0.5 * (lo + hi);
    }
    prev_sector = sector;
    prev_r = std::min(r, r_hi);
  }
  throw std::runtime_error("crossover_squeezing: no crossover in scan range");
}

}  // namespace hybent
