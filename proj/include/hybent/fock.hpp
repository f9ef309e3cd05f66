#ifndef HYBENT_FOCK_HPP
#define HYBENT_FOCK_HPP

#include <array>
#include <compare>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Sparse truncated four-mode Fock-space algebra. Two parties (Alice, Bob)
// hold one horizontally and one vertically polarized mode each; basis kets
// are written |n_AH, n_AV, n_BH, n_BV>.

namespace hybent {

using Complex = std::complex<double>;

// Stored amplitudes below this modulus are dropped and booked as leakage.
inline constexpr double kPruneThreshold = 1e-15;
// Projection weights below this are treated as an empty subspace.
inline constexpr double kEmptyProjection = 1e-14;

enum class Mode : int { AH = 0, AV = 1, BH = 2, BV = 3 };
enum class Party { Alice, Bob };
enum class Ladder { Raise, Lower };

// Raised when a projection or conditioning step finds no weight in the
// requested sector set. Surfaces as its own CLI exit code.
struct EmptySubspaceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const char* mode_name(Mode m);

//=========================================================================
// Basis labels
//=========================================================================

struct OccupationQuad {
  std::array<int, 4> n{0, 0, 0, 0};  // AH, AV, BH, BV

  OccupationQuad() = default;
  OccupationQuad(int n_ah, int n_av, int n_bh, int n_bv)
      : n{n_ah, n_av, n_bh, n_bv} {}

  int count(Mode m) const { return n[static_cast<int>(m)]; }
  int& count(Mode m) { return n[static_cast<int>(m)]; }

  // Local photon number of a party, summed over its two polarization modes.
  int alice_total() const { return n[0] + n[1]; }
  int bob_total() const { return n[2] + n[3]; }

  auto operator<=>(const OccupationQuad&) const = default;

  std::string str() const;
};

//=========================================================================
// Sector sets
//=========================================================================

// A set of local-photon-number sectors N. Supports the spec strings
// "full" (N >= 0), "nonvacuum" (N >= 1) and explicit lists/ranges such
// as "1-4,6". Sets with an unbounded tail keep it symbolically so that
// analytic sums over the set can include the tail exactly.
class SectorSet {
 public:
  static SectorSet full() { return SectorSet({}, 0); }
  static SectorSet nonvacuum() { return SectorSet({}, 1); }
  static SectorSet of(std::vector<int> sectors);
  static SectorSet parse(const std::string& spec);

  bool contains(int sector) const;
  bool empty() const { return finite_.empty() && !tail_from_; }
  // Number of listed sectors; unbounded sets count as infinite (INT_MAX).
  int sector_count() const;
  int min_sector() const;
  const std::vector<int>& finite_sectors() const { return finite_; }
  std::optional<int> tail_from() const { return tail_from_; }

  // Members of the set that do not exceed `max_sector`, ascending.
  std::vector<int> members_up_to(int max_sector) const;

  std::string str() const;
  bool operator==(const SectorSet&) const = default;

 private:
  SectorSet(std::vector<int> finite, std::optional<int> tail);

  std::vector<int> finite_;        // sorted, unique, all below tail_from_
  std::optional<int> tail_from_;   // if set, every N >= *tail_from_ is in
};

//=========================================================================
// Pure states
//=========================================================================

// Sparse complex amplitude map over occupation quads with a per-mode
// cutoff. Truncation never fails hard: weight that leaves the
// representable space is accumulated in `leakage`.
class PureState {
 public:
  explicit PureState(int n_max);
  static PureState basis_state(const OccupationQuad& q, int n_max);

  int n_max() const { return n_max_; }
  double leakage() const { return leakage_; }

  const std::map<OccupationQuad, Complex>& amplitudes() const { return amps_; }
  Complex amplitude(const OccupationQuad& q) const;
  std::size_t support_size() const { return amps_.size(); }
  bool is_zero() const { return amps_.empty(); }

  // Adds z to the stored amplitude of q. Occupations must lie in
  // [0, n_max]; out-of-range insertion is a caller bug, not truncation.
  void accumulate(const OccupationQuad& q, Complex z);
  void add_leakage(double weight);
  void set_leakage(double weight);

  // Drops amplitudes with modulus below the threshold into leakage.
  void prune(double threshold = kPruneThreshold);

  double norm_squared() const;

 private:
  int n_max_;
  double leakage_ = 0.0;
  std::map<OccupationQuad, Complex> amps_;
};

//=========================================================================
// Ensembles (mixed states as weighted pure branches)
//=========================================================================

struct EnsembleBranch {
  double weight;
  PureState state;
};

class StateEnsemble {
 public:
  explicit StateEnsemble(int n_max);
  static StateEnsemble pure(PureState state);

  int n_max() const { return n_max_; }
  const std::vector<EnsembleBranch>& branches() const { return branches_; }

  void add_branch(double weight, PureState state);
  double total_weight() const;

  // Weight dropped by channel pruning, kept so that branch weights plus
  // pruned weight account for the full trace.
  double pruned_weight() const { return pruned_weight_; }
  void add_pruned_weight(double w) { pruned_weight_ += w; }

 private:
  int n_max_;
  double pruned_weight_ = 0.0;
  std::vector<EnsembleBranch> branches_;
};

//=========================================================================
// Reduced density matrices
//=========================================================================

class ReducedDensityMatrix {
 public:
  using ModePair = std::pair<int, int>;  // (n_H, n_V) of the kept party

  explicit ReducedDensityMatrix(std::vector<ModePair> basis);

  const std::vector<ModePair>& basis() const { return basis_; }
  std::size_t dim() const { return basis_.size(); }
  Complex entry(std::size_t row, std::size_t col) const;
  void accumulate(std::size_t row, std::size_t col, Complex z);

  double trace() const;
  double hermiticity_defect() const;      // max_ij |A_ij - conj(A_ji)|
  std::vector<double> eigenvalues() const;  // ascending

 private:
  std::vector<ModePair> basis_;
  std::vector<Complex> entries_;  // row-major, dim x dim
};

//=========================================================================
// Operations
//=========================================================================

// Ladder operators: Raise maps |n> -> sqrt(n+1)|n+1> in the given mode,
// Lower maps |n> -> sqrt(n)|n-1>. Raising past the cutoff drops the
// offending amplitude into leakage instead of failing.
PureState ladder(const PureState& state, Mode mode, Ladder direction);

// Conjugate-linear in the left argument. Throws on cutoff mismatch.
Complex inner_product(const PureState& lhs, const PureState& rhs);

double norm(const PureState& state);
PureState normalized(const PureState& state);

PureState add(const PureState& a, const PureState& b);
PureState scaled(const PureState& state, Complex factor);

// Tensor product of two states occupying disjoint mode sets of the same
// four-mode space (e.g. one on {AH,BV}, the other on {AV,BH}).
PureState tensor_combine(const PureState& a, const PureState& b);

// <n_mode> in the normalized state.
double mean_photon(const PureState& state, Mode mode);

struct Projection {
  PureState state;      // renormalized on the kept support
  double probability;   // squared weight kept, before renormalization
  double discarded;     // off-support weight plus the input's leakage
};

struct EnsembleProjection {
  StateEnsemble state;
  double probability;
  double discarded;
};

// Projects onto the family of quads with equal local photon number on
// both parties, n_A = n_B = N with N in `sectors`, then renormalizes.
// Throws when the kept weight is below kEmptyProjection.
Projection project_subspace(const PureState& state, const SectorSet& sectors);
EnsembleProjection project_subspace(const StateEnsemble& state,
                                    const SectorSet& sectors);

ReducedDensityMatrix partial_trace(const PureState& state, Party keep);
ReducedDensityMatrix partial_trace(const StateEnsemble& state, Party keep);

// Tr(rho |target><target|); for ensembles the weight-averaged squared
// overlap. Throws on cutoff mismatch.
double fidelity_to_pure(const PureState& state, const PureState& target);
double fidelity_to_pure(const StateEnsemble& state, const PureState& target);

}  // namespace hybent

#endif
