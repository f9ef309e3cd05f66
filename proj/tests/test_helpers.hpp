#ifndef HYBENT_TEST_HELPERS_HPP
#define HYBENT_TEST_HELPERS_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "hybent/fock.hpp"

namespace hybent::testing {

// Deterministic sparse random state with all occupations in
// [0, n_max - headroom], normalized to unit norm.
inline PureState random_state(int n_max, int support, std::uint64_t seed,
                              int headroom = 0) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int hi) { return static_cast<int>(rng() % (hi + 1)); };
  auto real = [&] {
    return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
  };
  const int hi = n_max - headroom;
  PureState state(n_max);
  for (int i = 0; i < support; ++i) {
    state.accumulate(OccupationQuad(pick(hi), pick(hi), pick(hi), pick(hi)),
                     Complex(real(), real()));
  }
  state.prune();
  return normalized(state);
}

}  // namespace hybent::testing

#endif
