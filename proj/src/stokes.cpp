#include "hybent/stokes.hpp"

#include <cmath>

namespace hybent {

namespace {

// a_dst^+ a_src applied as one pass, so no intermediate pruning happens.
PureState hop(const PureState& state, Mode src, Mode dst) {
  PureState out(state.n_max());
  const int s = static_cast<int>(src);
  const int d = static_cast<int>(dst);
  for (const auto& [q, amp] : state.amplitudes()) {
    const int ns = q.n[s];
    if (ns == 0) continue;
    const int nd = q.n[d];
    const double factor = std::sqrt(static_cast<double>(ns) * (nd + 1));
    if (nd + 1 > state.n_max()) {
      out.add_leakage(factor * factor * std::norm(amp));
      continue;
    }
    OccupationQuad moved = q;
    moved.n[s] = ns - 1;
    moved.n[d] = nd + 1;
    out.accumulate(moved, amp * factor);
  }
  out.prune();
  return out;
}

}  // namespace

PureState apply_stokes(const PureState& state, StokesAxis axis, Party party) {
  const Mode h = party == Party::Alice ? Mode::AH : Mode::BH;
  const Mode v = party == Party::Alice ? Mode::AV : Mode::BV;
  switch (axis) {
    case StokesAxis::Z: {
      PureState out(state.n_max());
      for (const auto& [q, amp] : state.amplitudes()) {
        const double half_diff = 0.5 * (q.count(h) - q.count(v));
        if (half_diff != 0.0) out.accumulate(q, amp * half_diff);
      }
      return out;
    }
    case StokesAxis::X:
      return scaled(add(hop(state, v, h), hop(state, h, v)), 0.5);
    case StokesAxis::Y:
      // (a_H^+ a_V - a_V^+ a_H)/(2i)
      return scaled(add(hop(state, v, h), scaled(hop(state, h, v), -1.0)),
                    Complex(0.0, -0.5));
  }
  throw std::invalid_argument("apply_stokes: bad axis");
}

namespace {

PureState total_component(const PureState& state, StokesAxis axis) {
  return add(apply_stokes(state, axis, Party::Alice),
             apply_stokes(state, axis, Party::Bob));
}

PureState scoped_component(const PureState& state, StokesAxis axis, Scope which) {
  switch (which) {
    case Scope::Alice: return apply_stokes(state, axis, Party::Alice);
    case Scope::Bob: return apply_stokes(state, axis, Party::Bob);
    case Scope::Total: return total_component(state, axis);
  }
  throw std::invalid_argument("bad scope");
}

}  // namespace

double total_spin_squared(const PureState& state) {
  double out = 0.0;
  for (StokesAxis axis : {StokesAxis::X, StokesAxis::Y, StokesAxis::Z}) {
    const PureState image = total_component(state, axis);
    out += inner_product(image, image).real();  // S Hermitian
  }
  return out;
}

double total_spin_squared(const StateEnsemble& state) {
  double out = 0.0;
  for (const auto& branch : state.branches()) {
    out += branch.weight * total_spin_squared(branch.state);
  }
  return out;
}

double stokes_variance(const PureState& state, StokesAxis axis, Scope which) {
  const PureState image = scoped_component(state, axis, which);
  const double second_moment = inner_product(image, image).real();
  const double first_moment = inner_product(state, image).real();
  return second_moment - first_moment * first_moment;
}

StokesVector stokes_vector(const PureState& state, Scope which) {
  StokesVector out{0.0, 0.0, 0.0, which};
  out.sx = inner_product(state, scoped_component(state, StokesAxis::X, which)).real();
  out.sy = inner_product(state, scoped_component(state, StokesAxis::Y, which)).real();
  out.sz = inner_product(state, scoped_component(state, StokesAxis::Z, which)).real();
  return out;
}

}  // namespace hybent
