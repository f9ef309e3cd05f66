#include <doctest.h>

#include <cmath>
#include <random>

#include "hybent/oracles.hpp"
#include "hybent/states.hpp"
#include "hybent/witness.hpp"

using namespace hybent;

TEST_CASE("number-separability oracle") {
  SUBCASE("matches the renormalized occupation at r = 0.5") {
    const OracleResult res = oracle_number_sup(0.5, SectorSet::nonvacuum(), 10);
    CHECK(res.achieved == doctest::Approx(0.6924356367).epsilon(1e-9));
    CHECK(std::abs(res.gap) < 1e-10);
  }
  SUBCASE("vacuum dominates the full space at r = 0") {
    const OracleResult res = oracle_number_sup(0.0, SectorSet::full(), 6);
    CHECK(res.achieved == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("the optimal block vector is the sector singlet") {
    const SectorBlockEigen block =
        sector_block_eigenpair(0.5, SectorSet::nonvacuum(), 10, 2);
    const PureState singlet = sector_singlet(2, 10);
    CHECK(std::norm(inner_product(singlet, block.vector)) >=
          doctest::Approx(1.0 - 1e-10));
  }
}

TEST_CASE("polarization-separability oracle") {
  SUBCASE("attains the truncated bound at r = 0.5") {
    const OracleResult res =
        oracle_polarization_sup(0.5, SectorSet::nonvacuum(), 10, 32, 1);
    CHECK(res.achieved == doctest::Approx(0.4402299146).epsilon(1e-3));
    CHECK(res.gap >= -1e-9);
    CHECK(res.gap <= 1e-3);
    CHECK(res.converged_restarts == res.restarts);
  }
  SUBCASE("vacuum is a product state") {
    const OracleResult res = oracle_polarization_sup(0.0, SectorSet::full(), 6, 4, 2);
    CHECK(res.achieved == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("never beats the analytic bound") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 20; ++i) {
      const double r = 0.1 + 1.9 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
      const OracleResult res =
          oracle_polarization_sup(r, SectorSet::nonvacuum(), 8, 8, 3 + i);
      CHECK(res.achieved <= bound_polarization(r, SectorSet::nonvacuum()) + 1e-9);
    }
  }
  SUBCASE("alternating maximization is monotone") {
    const PolarizationSup detail =
        oracle_polarization_sup_detail(0.8, SectorSet::nonvacuum(), 8, 16, 5);
    CHECK(detail.worst_monotonicity >= -1e-12);
  }
}

TEST_CASE("per-sector product maxima") {
  CHECK(sector_product_max(0, 1, 1).achieved == doctest::Approx(1.0));
  CHECK(sector_product_max(1, 16, 1).achieved == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(sector_product_max(3, 64, 1).achieved ==
        doctest::Approx(0.25).epsilon(1e-6));
  for (int sector = 0; sector <= 5; ++sector) {
    const OracleResult res = sector_product_max(sector, 32, 9);
    CHECK(res.achieved <= res.bound + 1e-9);
    CHECK(res.achieved == doctest::Approx(1.0 / (sector + 1)).epsilon(1e-6));
  }
}

TEST_CASE("closed-form cross amplitudes align arbitrary sector phases") {
  // Rotating a sector's product vector by a phase must not cost anything:
  // the closed-form c_N absorbs it and the overlap stays saturated.
  const int n_max = 6;
  const double r = 0.6;
  const SectorSet sectors = SectorSet::nonvacuum();
  const PolarizationSup base =
      oracle_polarization_sup_detail(r, sectors, n_max, 4, 21);

  std::mt19937_64 rng(5);
  auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  ProductAnsatz rotated = base.ansatz;
  for (auto& [sector, vecs] : rotated.per_sector) {
    const Complex phase = std::polar(1.0, 6.283185307 * uniform());
    for (auto& z : vecs.alice) z *= phase;
  }

  const double total = sector_weight_sum(sectors, r);
  double cross_norm2 = 0.0;
  for (auto& [sector, vecs] : rotated.per_sector) {
    ProductAnsatz single;
    single.per_sector[sector] = vecs;
    single.cross[sector] = Complex(1.0);
    const Complex g = inner_product(sector_singlet(sector, n_max),
                                    ansatz_to_state(single, n_max));
    const double f = std::sqrt(sector_occupation(sector, r) / total);
    rotated.cross[sector] = std::conj(f * g);
    cross_norm2 += std::norm(rotated.cross[sector]);
  }
  for (auto& [sector, c] : rotated.cross) c /= std::sqrt(cross_norm2);

  const PureState reference =
      project_subspace(mbs_singlet({r, 0.0}, n_max), sectors).state;
  const double base_value =
      fidelity_to_pure(normalized(ansatz_to_state(base.ansatz, n_max)), reference);
  const double rotated_value =
      fidelity_to_pure(normalized(ansatz_to_state(rotated, n_max)), reference);
  CHECK(rotated_value == doctest::Approx(base_value).epsilon(1e-12));
}

TEST_CASE("oracle determinism") {
  const OracleResult a = oracle_polarization_sup(0.7, SectorSet::nonvacuum(), 8, 12, 42);
  const OracleResult b = oracle_polarization_sup(0.7, SectorSet::nonvacuum(), 8, 12, 42);
  CHECK(a.achieved == b.achieved);
  CHECK(a.bound == b.bound);
  CHECK(a.residual == b.residual);
  CHECK(a.converged_restarts == b.converged_restarts);

  const OracleResult c = oracle_polarization_sup(0.7, SectorSet::nonvacuum(), 8, 12, 43);
  CHECK(c.seed != a.seed);
}

TEST_CASE("inequality chain") {
  SUBCASE("optimal ansatz saturates the outer links") {
    const PolarizationSup pol =
        oracle_polarization_sup_detail(0.5, SectorSet::nonvacuum(), 8, 16, 11);
    const ChainReport report = verify_appendix_chain(pol.ansatz, 0.5, 8);
    CHECK(report.all_hold);
    for (const auto& link : report.links) {
      if (link.name == "root-sum" || link.name == "cauchy-schwarz") {
        CHECK(link.rhs - link.lhs < 1e-6);  // near-saturation
      }
    }
  }
  SUBCASE("vacuum-only ansatz") {
    ProductAnsatz ansatz;
    ansatz.per_sector[0] = {{Complex(1.0)}, {Complex(1.0)}};
    ansatz.cross[0] = Complex(1.0);
    const double r = 0.8;
    const ChainReport report = verify_appendix_chain(ansatz, r, 8);
    CHECK(report.all_hold);
    // Overlap equals the vacuum occupation p_0.
    CHECK(report.links.front().lhs ==
          doctest::Approx(1.0 / std::pow(std::cosh(r), 4)).epsilon(1e-12));
  }
  SUBCASE("random ansatz sweep finds no violation") {
    int checked = 0;
    for (double r : {0.3, 0.8, 1.5}) {
      for (int trial = 0; trial < 67; ++trial) {
        const ProductAnsatz ansatz = random_product_ansatz(
            SectorSet::nonvacuum(), 8, 1000 + trial);
        const ChainReport report = verify_appendix_chain(ansatz, r, 8);
        CHECK(report.all_hold);
        ++checked;
      }
    }
    CHECK(checked == 201);
  }
}

TEST_CASE("negativity") {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  SUBCASE("product states have none") {
    CHECK(negativity(PureState::basis_state(OccupationQuad(2, 0, 0, 2), 4)) ==
          doctest::Approx(0.0));
  }
  SUBCASE("balanced exemplars reach one half") {
    const PureState c =
        exemplar_state(ExemplarKind::CrossLayer, inv_sqrt2, inv_sqrt2, 4);
    CHECK(negativity(c) == doctest::Approx(0.5).epsilon(1e-10));
    const PureState b =
        exemplar_state(ExemplarKind::BeamSplitter, inv_sqrt2, inv_sqrt2, 4);
    CHECK(negativity(b) == doctest::Approx(0.5).epsilon(1e-10));
  }
  SUBCASE("unbalanced exemplar negativity is |alpha beta|") {
    const PureState c = exemplar_state(ExemplarKind::CrossLayer, 0.8, 0.6, 4);
    CHECK(negativity(c) == doctest::Approx(0.48).epsilon(1e-10));
  }
  SUBCASE("sector singlet negativity grows with dimension") {
    // Pure-state negativity ((sum sqrt(lambda))^2 - 1)/2 with flat Schmidt
    // spectrum: (d - 1)/2.
    CHECK(negativity(sector_singlet(2, 4)) == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("support cap") {
    CHECK_THROWS_AS((void)negativity(mbs_singlet({0.5, 0.0}, 10), 16),
                    std::runtime_error);
  }
}
