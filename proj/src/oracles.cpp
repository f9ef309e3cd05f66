#include "hybent/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "hybent/linalg.hpp"

namespace hybent {

namespace {

constexpr int kMaxSweeps = 200;

//-------------------------------------------------------------------------
// Deterministic random streams
//-------------------------------------------------------------------------

struct SplitMix64 {
  std::uint64_t state;

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform() {  // (0, 1)
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Box-Muller, kept by hand so streams are identical across platforms.
  double gaussian() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  Complex gaussian_complex() { return {gaussian(), gaussian()}; }
};

std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 mix{seed ^ (0xD1B54A32D192ED03ULL * (index + 1))};
  return mix.next();
}

std::vector<Complex> random_unit_vector(int dim, SplitMix64& rng) {
  std::vector<Complex> v(dim);
  double norm2 = 0.0;
  for (auto& z : v) {
    z = rng.gaussian_complex();
    norm2 += std::norm(z);
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& z : v) z *= inv;
  return v;
}

//-------------------------------------------------------------------------
// Per-sector bilinear maximization
//-------------------------------------------------------------------------

// Overlap <psi_N^-| a x b> = sum_n d_n a_n b_n with real coefficients
// d_n = (-1)^(N-n)/sqrt(N+1).
Complex sector_overlap(int sector, const std::vector<Complex>& alice,
                       const std::vector<Complex>& bob) {
  const double scale = 1.0 / std::sqrt(sector + 1.0);
  Complex g(0.0);
  for (int n = 0; n <= sector; ++n) {
    const double d = ((sector - n) % 2 == 0) ? scale : -scale;
    g += d * alice[n] * bob[n];
  }
  return g;
}

struct SectorOptimum {
  std::vector<Complex> alice;
  std::vector<Complex> bob;
  double overlap_sq;
  double residual;
  int iterations;
  double worst_step;  // most negative objective improvement seen
  bool converged;
};

// Alternating best responses: for fixed b, the optimal a is the
// normalized conjugate of (d_n b_n), and symmetrically. Each response is
// exact, so the objective is non-decreasing sweep over sweep.
SectorOptimum optimize_sector(int sector, SplitMix64& rng, double residual_tol) {
  const int dim = sector + 1;
  const double scale = 1.0 / std::sqrt(sector + 1.0);

  std::vector<Complex> alice = random_unit_vector(dim, rng);
  std::vector<Complex> bob = random_unit_vector(dim, rng);

  auto best_response = [&](const std::vector<Complex>& fixed,
                           std::vector<Complex>& out) {
    double norm2 = 0.0;
    for (int n = 0; n < dim; ++n) {
      const double d = ((sector - n) % 2 == 0) ? scale : -scale;
      out[n] = std::conj(d * fixed[n]);
      norm2 += std::norm(out[n]);
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& z : out) z *= inv;
  };

  double objective = std::norm(sector_overlap(sector, alice, bob));
  double residual = objective;
  double worst_step = 0.0;
  int sweeps = 0;
  for (; sweeps < kMaxSweeps; ++sweeps) {
    best_response(bob, alice);
    best_response(alice, bob);
    const double next = std::norm(sector_overlap(sector, alice, bob));
    const double step = next - objective;
    worst_step = std::min(worst_step, step);
    residual = std::abs(step);
    objective = next;
    if (residual < residual_tol) break;
  }
  return {std::move(alice), std::move(bob), objective,
          residual, sweeps + 1, worst_step, residual < residual_tol};
}

// Analytic total weight of the subspace (tail included) used to condition
// the reference, so per-sector eigenvalues land on the renormalized p~_N.
double conditioned_total(const SectorSet& subspace, double r) {
  const double total = sector_weight_sum(subspace, r);
  if (total < 1e-300) {
    throw EmptySubspaceError("oracle: subspace carries no weight at this r");
  }
  return total;
}

}  // namespace

//-------------------------------------------------------------------------
// Ansatz materialization
//-------------------------------------------------------------------------

PureState ansatz_to_state(const ProductAnsatz& ansatz, int n_max) {
  PureState out(n_max);
  for (const auto& [sector, c] : ansatz.cross) {
    auto it = ansatz.per_sector.find(sector);
    if (it == ansatz.per_sector.end()) {
      throw std::invalid_argument("ansatz_to_state: missing sector vectors");
    }
    if (sector > n_max) {
      throw std::invalid_argument("ansatz_to_state: sector exceeds cutoff");
    }
    const auto& vecs = it->second;
    if (static_cast<int>(vecs.alice.size()) != sector + 1 ||
        static_cast<int>(vecs.bob.size()) != sector + 1) {
      throw std::invalid_argument("ansatz_to_state: wrong vector length");
    }
    for (int i = 0; i <= sector; ++i) {
      for (int j = 0; j <= sector; ++j) {
        const Complex amp = c * vecs.alice[i] * vecs.bob[j];
        if (amp == Complex(0.0)) continue;
        out.accumulate(OccupationQuad(i, sector - i, sector - j, j), amp);
      }
    }
  }
  out.prune();
  return out;
}

ProductAnsatz random_product_ansatz(const SectorSet& subspace, int n_max,
                                    std::uint64_t seed) {
  const std::vector<int> sectors = subspace.members_up_to(n_max);
  if (sectors.empty()) {
    throw std::invalid_argument("random_product_ansatz: no representable sectors");
  }
  SplitMix64 rng{derive_stream(seed, 0x414E5341ULL)};
  ProductAnsatz ansatz;
  double cross_norm2 = 0.0;
  for (int s : sectors) {
    ansatz.per_sector[s] = {random_unit_vector(s + 1, rng),
                            random_unit_vector(s + 1, rng)};
    const Complex c = rng.gaussian_complex();
    ansatz.cross[s] = c;
    cross_norm2 += std::norm(c);
  }
  const double inv = 1.0 / std::sqrt(cross_norm2);
  for (auto& [s, c] : ansatz.cross) c *= inv;
  return ansatz;
}

//-------------------------------------------------------------------------
// Number-separability supremum
//-------------------------------------------------------------------------

SectorBlockEigen sector_block_eigenpair(double r, const SectorSet& subspace,
                                        int n_max, int sector) {
  if (!subspace.contains(sector)) {
    throw std::invalid_argument("sector_block_eigenpair: sector not in subspace");
  }
  const PureState reference = mbs_singlet({r, 0.0}, n_max);
  const double total = conditioned_total(subspace, r);

  // Sector block of the conditioned projector: u u^+ with u the sector-N
  // component of Psi / sqrt(total).
  PureState block(n_max);
  for (const auto& [q, z] : reference.amplitudes()) {
    if (q.alice_total() == sector && q.bob_total() == sector) {
      block.accumulate(q, z / std::sqrt(total));
    }
  }
  if (block.is_zero()) {
    throw std::runtime_error("sector_block_eigenpair: empty sector block");
  }

  // Power iteration from a deterministic start with nonzero overlap.
  PureState v(n_max);
  {
    double norm2 = 0.0;
    for (int n = 0; n <= sector; ++n) {
      const double a = n + 1.0;
      v.accumulate(OccupationQuad(n, sector - n, sector - n, n), a);
      norm2 += a * a;
    }
    v = scaled(v, 1.0 / std::sqrt(norm2));
  }

  double eigenvalue = 0.0;
  int iterations = 0;
  for (; iterations < 200; ++iterations) {
    const Complex coupling = inner_product(block, v);
    const PureState image = scaled(block, coupling);
    const double image_norm = norm(image);
    if (image_norm < 1e-300) {
      throw std::runtime_error("sector_block_eigenpair: start orthogonal to block");
    }
    v = scaled(image, 1.0 / image_norm);
    const double next = inner_product(v, scaled(block, inner_product(block, v))).real();
    if (std::abs(next - eigenvalue) < 1e-16 + 1e-14 * next) {
      eigenvalue = next;
      break;
    }
    eigenvalue = next;
  }
  return {eigenvalue, std::move(v), iterations + 1};
}

OracleResult oracle_number_sup(double r, const SectorSet& subspace, int n_max) {
  const std::vector<int> sectors = subspace.members_up_to(n_max);
  if (sectors.empty()) {
    throw std::invalid_argument("oracle_number_sup: no representable sectors");
  }
  OracleResult out;
  out.restarts = 0;
  out.seed = 0;

  const double total = conditioned_total(subspace, r);
  double best = 0.0;
  double formula = 0.0;
  for (int s : sectors) {
    // Unoccupied sectors (e.g. everything but vacuum at r = 0) hold the
    // zero block; they cannot carry the supremum.
    if (sector_occupation(s, r) / total < 1e-300) continue;
    const SectorBlockEigen block = sector_block_eigenpair(r, subspace, n_max, s);
    best = std::max(best, block.value);
    formula = std::max(formula, sector_occupation(s, r) / total);
  }

  out.achieved = best;
  out.bound = formula;
  out.gap = out.bound - out.achieved;
  out.converged_restarts = 0;
  out.residual = 0.0;
  return out;
}

//-------------------------------------------------------------------------
// Polarization-separability supremum
//-------------------------------------------------------------------------

PolarizationSup oracle_polarization_sup_detail(double r, const SectorSet& subspace,
                                               int n_max, int restarts,
                                               std::uint64_t seed,
                                               double residual_tol) {
  if (restarts < 1) throw std::invalid_argument("oracle_polarization_sup: restarts >= 1");
  if (residual_tol <= 0.0) throw std::invalid_argument("oracle_polarization_sup: bad residual tolerance");
  const std::vector<int> sectors = subspace.members_up_to(n_max);
  if (sectors.empty()) {
    throw std::invalid_argument("oracle_polarization_sup: no representable sectors");
  }

  const PureState reference = mbs_singlet({r, 0.0}, n_max);
  const double total = conditioned_total(subspace, r);
  PureState conditioned(n_max);
  for (const auto& [q, z] : reference.amplitudes()) {
    const int na = q.alice_total();
    if (na == q.bob_total() && subspace.contains(na)) {
      conditioned.accumulate(q, z / std::sqrt(total));
    }
  }

  PolarizationSup out;
  out.result.restarts = restarts;
  out.result.seed = seed;
  out.worst_monotonicity = 0.0;

  double best = -1.0;
  for (int restart = 0; restart < restarts; ++restart) {
    SplitMix64 rng{derive_stream(seed, static_cast<std::uint64_t>(restart))};

    ProductAnsatz ansatz;
    double cross_norm2 = 0.0;
    double residual = 0.0;
    bool converged = true;
    for (int s : sectors) {
      SectorOptimum opt = optimize_sector(s, rng, residual_tol);
      out.worst_monotonicity = std::min(out.worst_monotonicity, opt.worst_step);
      residual = std::max(residual, opt.residual);
      converged = converged && opt.converged;

      const Complex g = sector_overlap(s, opt.alice, opt.bob);
      const double f = std::sqrt(sector_occupation(s, r) / total);
      const Complex c = std::conj(f * g);  // Cauchy-Schwarz equality case
      ansatz.per_sector[s] = {std::move(opt.alice), std::move(opt.bob)};
      ansatz.cross[s] = c;
      cross_norm2 += std::norm(c);
    }
    if (cross_norm2 < 1e-300) continue;
    const double inv = 1.0 / std::sqrt(cross_norm2);
    for (auto& [s, c] : ansatz.cross) c *= inv;

    const PureState candidate = ansatz_to_state(ansatz, n_max);
    const double achieved = std::norm(inner_product(conditioned, candidate));
    if (converged) out.result.converged_restarts++;
    if (achieved > best) {
      best = achieved;
      out.result.residual = residual;
      out.ansatz = std::move(ansatz);
    }
  }

  out.result.achieved = best;
  out.result.bound =
      sector_overlap_sum(subspace, r, n_max) / sector_weight_sum(subspace, r);
  out.result.gap = out.result.bound - out.result.achieved;
  return out;
}

OracleResult oracle_polarization_sup(double r, const SectorSet& subspace,
                                     int n_max, int restarts, std::uint64_t seed,
                                     double residual_tol) {
  return oracle_polarization_sup_detail(r, subspace, n_max, restarts, seed,
                                        residual_tol)
      .result;
}

OracleResult sector_product_max(int sector, int restarts, std::uint64_t seed,
                                double residual_tol) {
  if (sector < 0) throw std::invalid_argument("sector_product_max: negative sector");
  if (restarts < 1) throw std::invalid_argument("sector_product_max: restarts >= 1");

  OracleResult out;
  out.restarts = restarts;
  out.seed = seed;
  out.bound = 1.0 / (sector + 1.0);

  double best = -1.0;
  for (int restart = 0; restart < restarts; ++restart) {
    SplitMix64 rng{derive_stream(seed, static_cast<std::uint64_t>(restart))};
    SectorOptimum opt = optimize_sector(sector, rng, residual_tol);
    if (opt.converged) out.converged_restarts++;
    if (opt.overlap_sq > best) {
      best = opt.overlap_sq;
      out.residual = opt.residual;
    }
  }
  out.achieved = best;
  out.gap = out.bound - out.achieved;
  return out;
}

//-------------------------------------------------------------------------
// Inequality chain
//-------------------------------------------------------------------------

ChainReport verify_appendix_chain(const ProductAnsatz& ansatz, double r, int n_max) {
  constexpr double kSlack = 1e-10;
  const PureState reference = mbs_singlet({r, 0.0}, n_max);
  const PureState state = ansatz_to_state(ansatz, n_max);

  ChainReport report;
  report.all_hold = true;
  auto push = [&](std::string name, double lhs, double rhs) {
    const bool holds = lhs <= rhs + kSlack;
    if (!holds && report.first_violation.empty()) report.first_violation = name;
    report.all_hold = report.all_hold && holds;
    report.links.push_back({std::move(name), lhs, rhs, holds});
  };

  // Per-sector product overlaps and cross amplitudes.
  std::map<int, double> overlap_sq;  // |<psi_N|phi_N>|^2
  double cross_norm2 = 0.0;
  for (const auto& [sector, c] : ansatz.cross) {
    const auto& vecs = ansatz.per_sector.at(sector);
    const Complex g = sector_overlap(sector, vecs.alice, vecs.bob);
    overlap_sq[sector] = std::norm(g);
    cross_norm2 += std::norm(c);
  }

  // (a) overlap bounded by the squared sum of per-sector root terms.
  double root_sum = 0.0;
  for (const auto& [sector, c] : ansatz.cross) {
    const PureState singlet = sector_singlet(sector, n_max);
    const double sector_term = std::norm(inner_product(singlet, state));
    root_sum += std::sqrt(sector_occupation(sector, r) * sector_term);
  }
  const double overlap = std::norm(inner_product(reference, state));
  push("root-sum", overlap, root_sum * root_sum);

  // (b) per-sector product overlap never beats 1/(N+1).
  for (const auto& [sector, g2] : overlap_sq) {
    push("sector-product N=" + std::to_string(sector), g2, 1.0 / (sector + 1.0));
  }

  // (b) applied inside the root sum.
  double applied = 0.0;
  double cs_lhs = 0.0;
  for (const auto& [sector, c] : ansatz.cross) {
    const double p = sector_occupation(sector, r);
    applied += std::sqrt(std::norm(c) * p * overlap_sq[sector]);
    cs_lhs += std::sqrt(std::norm(c) * p / (sector + 1.0));
  }
  push("per-sector-applied", applied * applied, cs_lhs * cs_lhs);

  // (c) Cauchy-Schwarz split of the remaining sum.
  double pol_sum = 0.0;
  for (const auto& [sector, c] : ansatz.cross) {
    pol_sum += sector_occupation(sector, r) / (sector + 1.0);
  }
  push("cauchy-schwarz", cs_lhs * cs_lhs, pol_sum * cross_norm2);

  return report;
}

//-------------------------------------------------------------------------
// Negativity
//-------------------------------------------------------------------------

double negativity(const PureState& state, std::size_t dimension_cap) {
  using ModePair = std::pair<int, int>;
  std::set<ModePair> alice_labels;
  std::set<ModePair> bob_labels;
  for (const auto& [q, z] : state.amplitudes()) {
    alice_labels.insert({q.n[0], q.n[1]});
    bob_labels.insert({q.n[2], q.n[3]});
  }
  const std::size_t da = alice_labels.size();
  const std::size_t db = bob_labels.size();
  if (da * db == 0) throw std::invalid_argument("negativity: zero state");
  if (da * db > dimension_cap) {
    throw std::runtime_error("negativity: support dimension " +
                             std::to_string(da * db) + " exceeds cap " +
                             std::to_string(dimension_cap));
  }

  std::map<ModePair, std::size_t> aidx, bidx;
  std::size_t k = 0;
  for (const auto& p : alice_labels) aidx[p] = k++;
  k = 0;
  for (const auto& p : bob_labels) bidx[p] = k++;

  std::vector<Complex> psi(da * db, Complex(0.0));
  for (const auto& [q, z] : state.amplitudes()) {
    psi[aidx[{q.n[0], q.n[1]}] * db + bidx[{q.n[2], q.n[3]}]] = z;
  }

  // rho^(T_B)[(a,b),(a',b')] = psi(a,b') conj(psi(a',b))
  const std::size_t dim = da * db;
  std::vector<Complex> pt(dim * dim);
  for (std::size_t a = 0; a < da; ++a) {
    for (std::size_t b = 0; b < db; ++b) {
      for (std::size_t a2 = 0; a2 < da; ++a2) {
        for (std::size_t b2 = 0; b2 < db; ++b2) {
          pt[(a * db + b) * dim + (a2 * db + b2)] =
              psi[a * db + b2] * std::conj(psi[a2 * db + b]);
        }
      }
    }
  }

  double negative_sum = 0.0;
  for (double ev : linalg::hermitian_eigenvalues(pt, dim)) {
    if (ev < 0.0) negative_sum -= ev;
  }
  return negative_sum;
}

}  // namespace hybent
