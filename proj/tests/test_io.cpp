#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "hybent/io.hpp"
#include "hybent/states.hpp"
#include "test_helpers.hpp"

using namespace hybent;
using hybent::testing::random_state;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/hybent_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("pure state round trip") {
  for (std::uint64_t seed = 51; seed <= 56; ++seed) {
    const PureState original = random_state(6, 12, seed);
    const PureState restored = state_from_json(state_to_json(original));
    CHECK(restored.n_max() == original.n_max());
    CHECK(restored.leakage() == original.leakage());
    REQUIRE(restored.support_size() == original.support_size());
    for (const auto& [q, z] : original.amplitudes()) {
      CHECK(restored.amplitude(q) == z);
    }
  }
}

TEST_CASE("ensemble round trip") {
  const StateEnsemble mix = blind_mixture({{1, 0.3}, {2, 0.7}}, 6);
  const StateEnsemble restored = ensemble_from_json(ensemble_to_json(mix));
  REQUIRE(restored.branches().size() == 2);
  CHECK(restored.total_weight() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fidelity_to_pure(restored, sector_singlet(2, 6)) ==
        doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("state files") {
  TempFile file("state.json");
  save_state_file(file.path, state_to_json(mbs_singlet({0.5, 0.0}, 8)));
  const LoadedState loaded = load_state_file(file.path);
  REQUIRE(std::holds_alternative<PureState>(loaded));
  CHECK(std::get<PureState>(loaded).amplitude(OccupationQuad(0, 0, 0, 0)).real() ==
        doctest::Approx(0.786448).epsilon(1e-5));
}

TEST_CASE("malformed input is rejected") {
  CHECK_THROWS_AS((void)load_state_file("/nonexistent/state.json"), IoError);

  TempFile file("bad.json");
  {
    std::ofstream out(file.path);
    out << "{ not json";
  }
  CHECK_THROWS_AS((void)load_state_file(file.path), IoError);

  {
    std::ofstream out(file.path);
    out << R"({"n_max": 2, "amplitudes": [[0,0,0,5,1.0,0.0]]})";
  }
  CHECK_THROWS_AS((void)load_state_file(file.path), IoError);

  {
    std::ofstream out(file.path);
    out << R"({"n_max": 2, "amplitudes": [[0,0,0]]})";
  }
  CHECK_THROWS_AS((void)load_state_file(file.path), IoError);
}

TEST_CASE("diff-stable float formatting") {
  CHECK(format_g12(0.5) == "0.5");
  CHECK(format_g12(1.0 / 3.0) == "0.333333333333");
  CHECK(format_g12(-0.30756436331849446) == "-0.307564363318");
}
