#include "hybent/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include "hybent/linalg.hpp"

namespace hybent {

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::AH: return "AH";
    case Mode::AV: return "AV";
    case Mode::BH: return "BH";
    case Mode::BV: return "BV";
  }
  return "?";
}

std::string OccupationQuad::str() const {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "|%d,%d,%d,%d>", n[0], n[1], n[2], n[3]);
  return buf;
}

//=========================================================================
// SectorSet
//=========================================================================

SectorSet::SectorSet(std::vector<int> finite, std::optional<int> tail)
    : finite_(std::move(finite)), tail_from_(tail) {
  std::sort(finite_.begin(), finite_.end());
  finite_.erase(std::unique(finite_.begin(), finite_.end()), finite_.end());
  if (!finite_.empty() && finite_.front() < 0) {
    throw std::invalid_argument("SectorSet: negative sector");
  }
  if (tail_from_) {
    if (*tail_from_ < 0) throw std::invalid_argument("SectorSet: negative tail");
    // Drop listed sectors already covered by the tail.
    finite_.erase(std::remove_if(finite_.begin(), finite_.end(),
                                 [&](int s) { return s >= *tail_from_; }),
                  finite_.end());
  }
}

SectorSet SectorSet::of(std::vector<int> sectors) {
  if (sectors.empty()) throw std::invalid_argument("SectorSet: empty set");
  return SectorSet(std::move(sectors), std::nullopt);
}

SectorSet SectorSet::parse(const std::string& spec) {
  std::string s;
  for (char c : spec) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s == "full") return full();
  if (s == "nonvacuum") return nonvacuum();
  if (s.empty()) throw std::invalid_argument("SectorSet: empty spec");

  std::vector<int> sectors;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t comma = s.find(',', pos);
    std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos
                                                               : comma - pos);
    pos = comma == std::string::npos ? s.size() : comma + 1;
    if (tok.empty()) throw std::invalid_argument("SectorSet: empty token in '" + spec + "'");
    std::size_t dash = tok.find('-');
    try {
      if (dash == std::string::npos) {
        sectors.push_back(std::stoi(tok));
      } else {
        int lo = std::stoi(tok.substr(0, dash));
        int hi = std::stoi(tok.substr(dash + 1));
        if (hi < lo) throw std::invalid_argument("descending range");
        for (int k = lo; k <= hi; ++k) sectors.push_back(k);
      }
    } catch (const std::exception&) {
      throw std::invalid_argument("SectorSet: cannot parse '" + spec + "'");
    }
  }
  return of(std::move(sectors));
}

bool SectorSet::contains(int sector) const {
  if (sector < 0) return false;
  if (tail_from_ && sector >= *tail_from_) return true;
  return std::binary_search(finite_.begin(), finite_.end(), sector);
}

int SectorSet::sector_count() const {
  if (tail_from_) return std::numeric_limits<int>::max();
  return static_cast<int>(finite_.size());
}

int SectorSet::min_sector() const {
  if (empty()) throw std::invalid_argument("SectorSet: empty set has no minimum");
  if (finite_.empty()) return *tail_from_;
  if (!tail_from_) return finite_.front();
  return std::min(finite_.front(), *tail_from_);
}

std::vector<int> SectorSet::members_up_to(int max_sector) const {
  std::vector<int> out;
  for (int s : finite_) {
    if (s <= max_sector) out.push_back(s);
  }
  if (tail_from_) {
    for (int s = *tail_from_; s <= max_sector; ++s) out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string SectorSet::str() const {
  if (tail_from_ && finite_.empty()) {
    if (*tail_from_ == 0) return "full";
    if (*tail_from_ == 1) return "nonvacuum";
  }
  std::string out;
  for (std::size_t i = 0; i < finite_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(finite_[i]);
  }
  if (tail_from_) {
    if (!out.empty()) out += ',';
    out += std::to_string(*tail_from_) + "-";  // unbounded tail
  }
  return out;
}

//=========================================================================
// PureState
//=========================================================================

PureState::PureState(int n_max) : n_max_(n_max) {
  if (n_max < 0) throw std::invalid_argument("PureState: negative cutoff");
}

PureState PureState::basis_state(const OccupationQuad& q, int n_max) {
  PureState s(n_max);
  s.accumulate(q, 1.0);
  return s;
}

Complex PureState::amplitude(const OccupationQuad& q) const {
  auto it = amps_.find(q);
  return it == amps_.end() ? Complex(0.0) : it->second;
}

void PureState::accumulate(const OccupationQuad& q, Complex z) {
  for (int c : q.n) {
    if (c < 0 || c > n_max_) {
      throw std::invalid_argument("PureState: occupation " + q.str() +
                                  " outside [0, " + std::to_string(n_max_) + "]");
    }
  }
  amps_[q] += z;
}

void PureState::add_leakage(double weight) {
  if (weight < 0 && weight > -1e-15) weight = 0;  // fp dust
  if (weight < 0) throw std::invalid_argument("PureState: negative leakage");
  leakage_ += weight;
}

void PureState::set_leakage(double weight) {
  leakage_ = 0.0;
  add_leakage(weight);
}

void PureState::prune(double threshold) {
  for (auto it = amps_.begin(); it != amps_.end();) {
    if (std::abs(it->second) < threshold) {
      leakage_ += std::norm(it->second);
      it = amps_.erase(it);
    } else {
      ++it;
    }
  }
}

double PureState::norm_squared() const {
  double out = 0.0;
  for (const auto& [q, a] : amps_) out += std::norm(a);
  return out;
}

//=========================================================================
// StateEnsemble
//=========================================================================

StateEnsemble::StateEnsemble(int n_max) : n_max_(n_max) {
  if (n_max < 0) throw std::invalid_argument("StateEnsemble: negative cutoff");
}

StateEnsemble StateEnsemble::pure(PureState state) {
  StateEnsemble e(state.n_max());
  e.add_branch(1.0, std::move(state));
  return e;
}

void StateEnsemble::add_branch(double weight, PureState state) {
  if (weight <= 0.0) throw std::invalid_argument("StateEnsemble: branch weight must be positive");
  if (state.n_max() != n_max_) throw std::invalid_argument("StateEnsemble: cutoff mismatch");
  branches_.push_back({weight, std::move(state)});
}

double StateEnsemble::total_weight() const {
  double w = 0.0;
  for (const auto& b : branches_) w += b.weight;
  return w;
}

//=========================================================================
// ReducedDensityMatrix
//=========================================================================

ReducedDensityMatrix::ReducedDensityMatrix(std::vector<ModePair> basis)
    : basis_(std::move(basis)), entries_(basis_.size() * basis_.size(), Complex(0.0)) {}

Complex ReducedDensityMatrix::entry(std::size_t row, std::size_t col) const {
  return entries_[row * dim() + col];
}

void ReducedDensityMatrix::accumulate(std::size_t row, std::size_t col, Complex z) {
  entries_[row * dim() + col] += z;
}

double ReducedDensityMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) t += entries_[i * dim() + i].real();
  return t;
}

double ReducedDensityMatrix::hermiticity_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) {
    for (std::size_t j = 0; j < dim(); ++j) {
      worst = std::max(worst, std::abs(entry(i, j) - std::conj(entry(j, i))));
    }
  }
  return worst;
}

std::vector<double> ReducedDensityMatrix::eigenvalues() const {
  return linalg::hermitian_eigenvalues(entries_, dim());
}

//=========================================================================
// Operations
//=========================================================================

PureState ladder(const PureState& state, Mode mode, Ladder direction) {
  PureState out(state.n_max());
  out.add_leakage(state.leakage());
  const int k = static_cast<int>(mode);
  for (const auto& [q, amp] : state.amplitudes()) {
    const int n = q.n[k];
    if (direction == Ladder::Raise) {
      if (n + 1 > state.n_max()) {
        out.add_leakage((n + 1.0) * std::norm(amp));
        continue;
      }
      OccupationQuad up = q;
      up.n[k] = n + 1;
      out.accumulate(up, amp * std::sqrt(n + 1.0));
    } else {
      if (n == 0) continue;  // annihilated, no leakage
      OccupationQuad down = q;
      down.n[k] = n - 1;
      out.accumulate(down, amp * std::sqrt(static_cast<double>(n)));
    }
  }
  out.prune();
  return out;
}

Complex inner_product(const PureState& lhs, const PureState& rhs) {
  if (lhs.n_max() != rhs.n_max()) {
    throw std::invalid_argument("inner_product: cutoff mismatch");
  }
  Complex out(0.0);
  auto li = lhs.amplitudes().begin();
  auto ri = rhs.amplitudes().begin();
  while (li != lhs.amplitudes().end() && ri != rhs.amplitudes().end()) {
    if (li->first < ri->first) {
      ++li;
    } else if (ri->first < li->first) {
      ++ri;
    } else {
      out += std::conj(li->second) * ri->second;
      ++li;
      ++ri;
    }
  }
  return out;
}

double norm(const PureState& state) { return std::sqrt(state.norm_squared()); }

PureState normalized(const PureState& state) {
  const double n2 = state.norm_squared();
  if (n2 <= 0.0) throw std::invalid_argument("normalized: zero state");
  PureState out = scaled(state, 1.0 / std::sqrt(n2));
  out.set_leakage(state.leakage());
  return out;
}

PureState add(const PureState& a, const PureState& b) {
  if (a.n_max() != b.n_max()) throw std::invalid_argument("add: cutoff mismatch");
  PureState out(a.n_max());
  for (const auto& [q, z] : a.amplitudes()) out.accumulate(q, z);
  for (const auto& [q, z] : b.amplitudes()) out.accumulate(q, z);
  out.add_leakage(a.leakage() + b.leakage());
  out.prune();
  return out;
}

PureState scaled(const PureState& state, Complex factor) {
  PureState out(state.n_max());
  for (const auto& [q, z] : state.amplitudes()) out.accumulate(q, z * factor);
  out.add_leakage(state.leakage() * std::norm(factor));
  out.prune();
  return out;
}

PureState tensor_combine(const PureState& a, const PureState& b) {
  if (a.n_max() != b.n_max()) {
    throw std::invalid_argument("tensor_combine: cutoff mismatch");
  }
  std::array<bool, 4> active_a{false, false, false, false};
  std::array<bool, 4> active_b{false, false, false, false};
  for (const auto& [q, z] : a.amplitudes()) {
    for (int m = 0; m < 4; ++m) active_a[m] = active_a[m] || q.n[m] > 0;
  }
  for (const auto& [q, z] : b.amplitudes()) {
    for (int m = 0; m < 4; ++m) active_b[m] = active_b[m] || q.n[m] > 0;
  }
  for (int m = 0; m < 4; ++m) {
    if (active_a[m] && active_b[m]) {
      throw std::invalid_argument(
          "tensor_combine: both factors occupy mode " +
          std::string(mode_name(static_cast<Mode>(m))));
    }
  }
  PureState out(a.n_max());
  for (const auto& [qa, za] : a.amplitudes()) {
    for (const auto& [qb, zb] : b.amplitudes()) {
      OccupationQuad q(qa.n[0] + qb.n[0], qa.n[1] + qb.n[1],
                       qa.n[2] + qb.n[2], qa.n[3] + qb.n[3]);
      out.accumulate(q, za * zb);
    }
  }
  // Lost weight of a product is 1 - (1 - l_a)(1 - l_b).
  out.add_leakage(a.leakage() + b.leakage() - a.leakage() * b.leakage());
  out.prune();
  return out;
}

double mean_photon(const PureState& state, Mode mode) {
  const int k = static_cast<int>(mode);
  double weighted = 0.0;
  double total = 0.0;
  for (const auto& [q, z] : state.amplitudes()) {
    const double w = std::norm(z);
    weighted += w * q.n[k];
    total += w;
  }
  if (total <= 0.0) throw std::invalid_argument("mean_photon: zero state");
  return weighted / total;
}

Projection project_subspace(const PureState& state, const SectorSet& sectors) {
  if (sectors.empty()) throw std::invalid_argument("project_subspace: empty sector set");
  PureState kept(state.n_max());
  double discarded = state.leakage();
  for (const auto& [q, z] : state.amplitudes()) {
    const int na = q.alice_total();
    if (na == q.bob_total() && sectors.contains(na)) {
      kept.accumulate(q, z);
    } else {
      discarded += std::norm(z);
    }
  }
  const double prob = kept.norm_squared();
  if (prob < kEmptyProjection) {
    throw EmptySubspaceError("project_subspace: state has no weight in subspace " +
                             sectors.str());
  }
  PureState out = scaled(kept, 1.0 / std::sqrt(prob));
  out.set_leakage(0.0);  // conditioning restarts truncation bookkeeping
  return {std::move(out), prob, discarded};
}

EnsembleProjection project_subspace(const StateEnsemble& state,
                                    const SectorSet& sectors) {
  if (sectors.empty()) throw std::invalid_argument("project_subspace: empty sector set");
  struct Kept {
    double weight;
    PureState state;
  };
  std::vector<Kept> kept;
  double prob = 0.0;
  double discarded = state.pruned_weight();
  for (const auto& branch : state.branches()) {
    PureState proj(state.n_max());
    double off = branch.state.leakage();
    for (const auto& [q, z] : branch.state.amplitudes()) {
      const int na = q.alice_total();
      if (na == q.bob_total() && sectors.contains(na)) {
        proj.accumulate(q, z);
      } else {
        off += std::norm(z);
      }
    }
    const double p = proj.norm_squared();
    discarded += branch.weight * off;
    if (p < kEmptyProjection) continue;
    prob += branch.weight * p;
    PureState unit = scaled(proj, 1.0 / std::sqrt(p));
    unit.set_leakage(0.0);
    kept.push_back({branch.weight * p, std::move(unit)});
  }
  if (prob < kEmptyProjection) {
    throw EmptySubspaceError("project_subspace: ensemble has no weight in subspace " +
                             sectors.str());
  }
  StateEnsemble out(state.n_max());
  for (auto& k : kept) out.add_branch(k.weight / prob, std::move(k.state));
  return {std::move(out), prob, discarded};
}

namespace {

void accumulate_partial_trace(const PureState& state, Party keep, double weight,
                              std::map<ReducedDensityMatrix::ModePair,
                                       std::map<ReducedDensityMatrix::ModePair, Complex>>& rho) {
  // Group amplitudes by the traced-out party's occupation pair.
  using ModePair = ReducedDensityMatrix::ModePair;
  std::map<ModePair, std::vector<std::pair<ModePair, Complex>>> groups;
  for (const auto& [q, z] : state.amplitudes()) {
    ModePair kept_pair, env_pair;
    if (keep == Party::Alice) {
      kept_pair = {q.n[0], q.n[1]};
      env_pair = {q.n[2], q.n[3]};
    } else {
      kept_pair = {q.n[2], q.n[3]};
      env_pair = {q.n[0], q.n[1]};
    }
    groups[env_pair].push_back({kept_pair, z});
  }
  for (const auto& [env, entries] : groups) {
    for (const auto& [pi, zi] : entries) {
      for (const auto& [pj, zj] : entries) {
        rho[pi][pj] += weight * zi * std::conj(zj);
      }
    }
  }
}

ReducedDensityMatrix build_rdm(
    const std::map<ReducedDensityMatrix::ModePair,
                   std::map<ReducedDensityMatrix::ModePair, Complex>>& rho) {
  std::set<ReducedDensityMatrix::ModePair> labels;
  for (const auto& [pi, row] : rho) {
    labels.insert(pi);
    for (const auto& [pj, z] : row) labels.insert(pj);
  }
  std::vector<ReducedDensityMatrix::ModePair> basis(labels.begin(), labels.end());
  ReducedDensityMatrix out(basis);
  std::map<ReducedDensityMatrix::ModePair, std::size_t> index;
  for (std::size_t i = 0; i < basis.size(); ++i) index[basis[i]] = i;
  for (const auto& [pi, row] : rho) {
    for (const auto& [pj, z] : row) out.accumulate(index[pi], index[pj], z);
  }
  return out;
}

}  // namespace

ReducedDensityMatrix partial_trace(const PureState& state, Party keep) {
  std::map<ReducedDensityMatrix::ModePair,
           std::map<ReducedDensityMatrix::ModePair, Complex>> rho;
  accumulate_partial_trace(state, keep, 1.0, rho);
  return build_rdm(rho);
}

ReducedDensityMatrix partial_trace(const StateEnsemble& state, Party keep) {
  std::map<ReducedDensityMatrix::ModePair,
           std::map<ReducedDensityMatrix::ModePair, Complex>> rho;
  for (const auto& branch : state.branches()) {
    accumulate_partial_trace(branch.state, keep, branch.weight, rho);
  }
  return build_rdm(rho);
}

double fidelity_to_pure(const PureState& state, const PureState& target) {
  return std::norm(inner_product(target, state));
}

double fidelity_to_pure(const StateEnsemble& state, const PureState& target) {
  double out = 0.0;
  for (const auto& branch : state.branches()) {
    out += branch.weight * std::norm(inner_product(target, branch.state));
  }
  return out;
}

}  // namespace hybent
