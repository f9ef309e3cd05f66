#include "hybent/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hybent {

namespace {

constexpr double kSeriesEps = 1e-17;
constexpr double kWeightSumTol = 1e-10;

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

}  // namespace

void SqueezingParams::validate() const {
  if (r < 0.0 || !std::isfinite(r)) {
    throw std::invalid_argument("SqueezingParams: r must be finite and >= 0");
  }
  if (theta < 0.0 || theta >= 2.0 * std::numbers::pi) {
    throw std::invalid_argument("SqueezingParams: theta must lie in [0, 2*pi)");
  }
}

//-------------------------------------------------------------------------
// Sector statistics
//-------------------------------------------------------------------------

double sector_occupation(int sector, double r) {
  if (sector < 0) throw std::invalid_argument("sector_occupation: negative sector");
  if (r < 0.0) throw std::invalid_argument("sector_occupation: negative r");
  const double t = std::tanh(r);
  const double c = std::cosh(r);
  return std::pow(t, 2 * sector) * (sector + 1) / std::pow(c, 4);
}

namespace {

// Sums f(N) * p_N over the set, where f(N) = 1 or 1/(N+1). Terms follow
// the recurrence p_{N+1} = p_N * x * (N+2)/(N+1) with x = tanh(r)^2; the
// loop stops once the geometric remainder bound drops below kSeriesEps.
double sector_series(const SectorSet& sectors, double r, int max_sector,
                     bool divide_by_dim) {
  if (sectors.empty()) throw std::invalid_argument("sector sum: empty sector set");
  if (r < 0.0) throw std::invalid_argument("sector sum: negative r");
  const double x = std::tanh(r) * std::tanh(r);

  double acc = 0.0;
  for (int s : sectors.finite_sectors()) {
    if (max_sector >= 0 && s > max_sector) continue;
    const double p = sector_occupation(s, r);
    acc += divide_by_dim ? p / (s + 1) : p;
  }
  if (sectors.tail_from()) {
    const int k = *sectors.tail_from();
    double term = sector_occupation(k, r);  // p_k
    for (int n = k;; ++n) {
      if (max_sector >= 0 && n > max_sector) break;
      acc += divide_by_dim ? term / (n + 1) : term;
      const double ratio = x * (n + 2.0) / (n + 1.0);
      const double next = term * ratio;
      if (ratio < 1.0 && next / (1.0 - ratio) < kSeriesEps * std::max(acc, 1e-300)) {
        break;
      }
      if (n > 100000) break;  // x ~ 1 safety stop
      term = next;
    }
  }
  return acc;
}

}  // namespace

double sector_weight_sum(const SectorSet& sectors, double r, int max_sector) {
  return sector_series(sectors, r, max_sector, false);
}

double sector_overlap_sum(const SectorSet& sectors, double r, int max_sector) {
  return sector_series(sectors, r, max_sector, true);
}

SectorWeights sector_probabilities(const SqueezingParams& params,
                                   const SectorSet& subspace, bool renormalize) {
  params.validate();
  if (subspace.empty()) {
    throw std::invalid_argument("sector_probabilities: empty sector set");
  }
  const double r = params.r;
  const double x = std::tanh(r) * std::tanh(r);

  SectorWeights out{r, {}, subspace, renormalize};

  if (renormalize && x == 0.0) {
    // r -> 0 limit: the renormalized weights concentrate on the lowest
    // sector of the subspace.
    out.weights[subspace.min_sector()] = 1.0;
    return out;
  }

  for (int s : subspace.finite_sectors()) {
    out.weights[s] = sector_occupation(s, r);
  }
  if (subspace.tail_from()) {
    const int k = *subspace.tail_from();
    double term = sector_occupation(k, r);
    for (int n = k;; ++n) {
      out.weights[n] = term;
      const double ratio = x * (n + 2.0) / (n + 1.0);
      const double next = term * ratio;
      if (ratio < 1.0 && next / (1.0 - ratio) < 1e-13) break;
      if (n > 100000) break;
      term = next;
    }
  }

  if (renormalize) {
    const double total = sector_weight_sum(subspace, r);
    if (total < 1e-300) {
      throw EmptySubspaceError("sector_probabilities: zero-weight subspace");
    }
    for (auto& [s, w] : out.weights) w /= total;
  }
  return out;
}

//-------------------------------------------------------------------------
// Constructors
//-------------------------------------------------------------------------

PureState mbs_singlet(const SqueezingParams& params, int n_max) {
  params.validate();
  if (params.theta != 0.0) {
    throw std::invalid_argument("mbs_singlet: only theta = 0 is supported");
  }
  const double t = std::tanh(params.r);
  const double inv_cosh2 = 1.0 / (std::cosh(params.r) * std::cosh(params.r));

  PureState out(n_max);
  double stored = 0.0;
  for (int total = 0; total <= n_max; ++total) {
    const double magnitude = std::pow(t, total) * inv_cosh2;
    if (magnitude < kPruneThreshold) {
      break;  // remaining sectors join the leakage below
    }
    for (int n = 0; n <= total; ++n) {
      const int m = total - n;
      const double amp = (m % 2 == 0 ? magnitude : -magnitude);
      out.accumulate(OccupationQuad(n, m, m, n), amp);
      stored += amp * amp;
    }
  }
  out.set_leakage(std::max(0.0, 1.0 - stored));
  return out;
}

PureState sector_singlet(int sector, int n_max) {
  if (sector < 0) throw std::invalid_argument("sector_singlet: negative sector");
  if (sector > n_max) {
    throw std::invalid_argument("sector_singlet: sector " + std::to_string(sector) +
                                " exceeds cutoff " + std::to_string(n_max));
  }
  PureState out(n_max);
  const double amp = 1.0 / std::sqrt(sector + 1.0);
  for (int n = 0; n <= sector; ++n) {
    const int m = sector - n;
    out.accumulate(OccupationQuad(n, m, m, n), (m % 2 == 0 ? amp : -amp));
  }
  return out;
}

PureState tmsv(const SqueezingParams& params, Mode alice_mode, Mode bob_mode,
               int sign, int n_max) {
  params.validate();
  if (sign != 1 && sign != -1) throw std::invalid_argument("tmsv: sign must be +1 or -1");
  const bool alice_ok = alice_mode == Mode::AH || alice_mode == Mode::AV;
  const bool bob_ok = bob_mode == Mode::BH || bob_mode == Mode::BV;
  if (!alice_ok || !bob_ok) {
    throw std::invalid_argument("tmsv: mode pair must span one Alice and one Bob mode");
  }
  const double t = std::tanh(params.r);
  const double inv_cosh = 1.0 / std::cosh(params.r);

  PureState out(n_max);
  double stored = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    double amp = std::pow(t, n) * inv_cosh;
    if (sign < 0 && n % 2 == 1) amp = -amp;
    if (std::abs(amp) < kPruneThreshold && n > 0) break;
    OccupationQuad q;
    q.count(alice_mode) = n;
    q.count(bob_mode) = n;
    out.accumulate(q, amp);
    stored += amp * amp;
  }
  out.set_leakage(std::max(0.0, 1.0 - stored));
  return out;
}

StateEnsemble blind_mixture(const std::map<int, double>& weights, int n_max) {
  if (weights.empty()) throw std::invalid_argument("blind_mixture: no weights");
  double total = 0.0;
  for (const auto& [sector, w] : weights) {
    if (w < 0.0) throw std::invalid_argument("blind_mixture: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > kWeightSumTol) {
    throw std::invalid_argument("blind_mixture: weights sum to " + std::to_string(total));
  }
  StateEnsemble out(n_max);
  for (const auto& [sector, w] : weights) {
    if (w == 0.0) continue;
    out.add_branch(w, sector_singlet(sector, n_max));
  }
  return out;
}

PureState exemplar_state(ExemplarKind kind, Complex alpha, Complex beta, int n_max) {
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-10) {
    throw std::invalid_argument("exemplar_state: |alpha|^2 + |beta|^2 must be 1");
  }
  if (n_max < 2) throw std::invalid_argument("exemplar_state: needs n_max >= 2");
  PureState out(n_max);
  if (kind == ExemplarKind::CrossLayer) {
    out.accumulate(OccupationQuad(2, 0, 0, 2), alpha);
    out.accumulate(OccupationQuad(0, 1, 1, 0), beta);
  } else {
    out.accumulate(OccupationQuad(2, 0, 0, 1), alpha);
    out.accumulate(OccupationQuad(0, 1, 2, 0), beta);
  }
  out.prune();
  return out;
}

PureState beam_splitter_interfere(const PureState& input, double transmissivity) {
  if (transmissivity < 0.0 || transmissivity > 1.0) {
    throw std::invalid_argument("beam_splitter_interfere: transmissivity outside [0,1]");
  }
  const double t = transmissivity;
  for (const auto& [q, z] : input.amplitudes()) {
    if (q.n[2] != 0 || q.n[3] != 0) {
      throw std::invalid_argument(
          "beam_splitter_interfere: ancilla (Bob) modes must be vacuum");
    }
  }
  // The source creation operators map to sqrt(t) a_out + sqrt(1-t) b_out,
  // so |n>_src spreads binomially over the two output spatial modes.
  PureState out(input.n_max());
  out.add_leakage(input.leakage());
  for (const auto& [q, z] : input.amplitudes()) {
    const int nh = q.n[0];
    const int nv = q.n[1];
    for (int j = 0; j <= nh; ++j) {
      const double wh = std::sqrt(binomial(nh, j) * std::pow(t, j) *
                                  std::pow(1.0 - t, nh - j));
      if (wh == 0.0) continue;
      for (int i = 0; i <= nv; ++i) {
        const double wv = std::sqrt(binomial(nv, i) * std::pow(t, i) *
                                    std::pow(1.0 - t, nv - i));
        if (wv == 0.0) continue;
        out.accumulate(OccupationQuad(j, i, nh - j, nv - i), z * wh * wv);
      }
    }
  }
  out.prune();
  return out;
}

Postselection postselect_pair(const PureState& state,
                              const std::vector<OccupationQuad>& kept) {
  PureState selected(state.n_max());
  for (const auto& q : kept) {
    const Complex z = state.amplitude(q);
    if (z != Complex(0.0)) selected.accumulate(q, z);
  }
  const double prob = selected.norm_squared();
  if (prob < kEmptyProjection) {
    throw EmptySubspaceError("postselect_pair: empty post-selection support");
  }
  PureState out = scaled(selected, 1.0 / std::sqrt(prob));
  out.set_leakage(0.0);
  return {std::move(out), prob};
}

double estimate_squeezing(double mean_photons_per_mode) {
  if (mean_photons_per_mode < 0.0 || !std::isfinite(mean_photons_per_mode)) {
    throw std::invalid_argument("estimate_squeezing: mean photon number must be >= 0");
  }
  return std::asinh(std::sqrt(mean_photons_per_mode));
}

}  // namespace hybent
