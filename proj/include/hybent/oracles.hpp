#ifndef HYBENT_ORACLES_HPP
#define HYBENT_ORACLES_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hybent/fock.hpp"
#include "hybent/states.hpp"

// Brute-force verification of the separability bounds: suprema over
// block-diagonal states (per-sector eigenproblems) and over sector-wise
// product states (bilinear alternating maximization with random restarts),
// plus a numeric walk through the inequality chain behind the
// polarization bound and a partial-transpose negativity diagnostic.

namespace hybent {

struct OracleResult {
  double achieved = 0.0;  // best overlap found
  double bound = 0.0;     // analytic bound for the same subspace and cutoff
  double gap = 0.0;       // bound - achieved
  int restarts = 0;
  int converged_restarts = 0;
  double residual = 0.0;  // last-iterate improvement of the best restart
  std::uint64_t seed = 0;
};

// Coherent superposition of per-sector product states: the sector-N
// factor is (sum_i alice[i] |i, N-i>_A) x (sum_j bob[j] |N-j, j>_B), and
// cross holds the sector amplitudes c_N.
struct ProductAnsatz {
  struct SectorVectors {
    std::vector<Complex> alice;  // length N+1, unit norm
    std::vector<Complex> bob;    // length N+1, unit norm
  };
  std::map<int, SectorVectors> per_sector;
  std::map<int, Complex> cross;
};

PureState ansatz_to_state(const ProductAnsatz& ansatz, int n_max);
ProductAnsatz random_product_ansatz(const SectorSet& subspace, int n_max,
                                    std::uint64_t seed);

// Supremum over block-diagonal states: per sector, power iteration on the
// sector block of the conditioned MBS projector. The block is rank one,
// so the leading eigenvalue must land on the renormalized occupation.
OracleResult oracle_number_sup(double r, const SectorSet& subspace, int n_max);

struct SectorBlockEigen {
  double value;
  PureState vector;
  int iterations;
};
SectorBlockEigen sector_block_eigenpair(double r, const SectorSet& subspace,
                                        int n_max, int sector);

// Supremum over sector-wise product superpositions: alternating
// best-response maximization per sector with random restarts, cross-sector
// amplitudes solved in closed form (Cauchy-Schwarz equality case). Each
// restart derives its own stream from the seed, so restarts are
// independent tasks and the aggregation is a plain max-reduction.
OracleResult oracle_polarization_sup(double r, const SectorSet& subspace,
                                     int n_max, int restarts, std::uint64_t seed,
                                     double residual_tol = 1e-13);

struct PolarizationSup {
  OracleResult result;
  ProductAnsatz ansatz;         // best ansatz found
  double worst_monotonicity;    // most negative per-iteration improvement
};
PolarizationSup oracle_polarization_sup_detail(double r, const SectorSet& subspace,
                                               int n_max, int restarts,
                                               std::uint64_t seed,
                                               double residual_tol = 1e-13);

// max |<psi_N^-| a x b>|^2 over unit vectors; converges to 1/(N+1).
OracleResult sector_product_max(int sector, int restarts, std::uint64_t seed,
                                double residual_tol = 1e-13);

struct ChainLink {
  std::string name;
  double lhs;
  double rhs;
  bool holds;  // lhs <= rhs + 1e-10
};

struct ChainReport {
  std::vector<ChainLink> links;
  bool all_hold;
  std::string first_violation;  // empty when all links hold
};

// Evaluates every inequality in the polarization-bound derivation on a
// concrete ansatz: the root-sum bound on the overlap, the per-sector
// product limits 1/(N+1), and the final Cauchy-Schwarz split.
ChainReport verify_appendix_chain(const ProductAnsatz& ansatz, double r, int n_max);

// Sum of the magnitudes of negative partial-transpose eigenvalues across
// the Alice|Bob cut, computed densely on the state's support. Throws when
// the support dimension exceeds the cap.
double negativity(const PureState& state, std::size_t dimension_cap = 400);

}  // namespace hybent

#endif
