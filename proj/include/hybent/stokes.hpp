#ifndef HYBENT_STOKES_HPP
#define HYBENT_STOKES_HPP

#include "hybent/fock.hpp"

// Stokes-operator observables. Per party,
//   S_x = (a_H^+ a_V + a_V^+ a_H)/2,
//   S_y = (a_H^+ a_V - a_V^+ a_H)/(2i),
//   S_z = (a_H^+ a_H - a_V^+ a_V)/2,
// with the circular basis fixed as a_L = (a_H + i a_V)/sqrt(2),
// a_R = (a_H - i a_V)/sqrt(2). Only the sign of S_y depends on that
// choice, and it drops out of every squared quantity.

namespace hybent {

enum class StokesAxis { X, Y, Z };
enum class Scope { Alice, Bob, Total };

struct StokesVector {
  double sx, sy, sz;
  Scope party;
};

// Unnormalized image of the state under one Stokes component. The caller
// must keep the state inside the cutoff if leakage-free images are needed.
PureState apply_stokes(const PureState& state, StokesAxis axis, Party party);

// <S^2> of the total spin S = S_A + S_B, summed over the three axes.
double total_spin_squared(const PureState& state);
double total_spin_squared(const StateEnsemble& state);

// <S_axis^2> - <S_axis>^2 for one party or the total spin.
double stokes_variance(const PureState& state, StokesAxis axis, Scope which);

StokesVector stokes_vector(const PureState& state, Scope which);

}  // namespace hybent

#endif
