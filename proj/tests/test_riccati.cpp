#include "qhj/catalog.hpp"
#include "qhj/riccati.hpp"

#include <doctest.h>

#include <random>

using namespace qhj;

TEST_CASE("hydrogen origin candidates are l + 1 and -l") {
    for (double l : {0.0, 1.0, 3.0}) {
        const PotentialSpec s = make_potential("hydrogen_radial", {{"Ze2", 2.0}, {"l", l}});
        const RiccatiProblem prob = s.riccati(-0.2);
        const ResidueChoice c = fixed_pole_residues(prob, 0.0);
        const bool direct = std::abs(c.candidates[0] - (l + 1.0)) < 1e-12 && std::abs(c.candidates[1] + l) < 1e-12;
        const bool swapped = std::abs(c.candidates[1] - (l + 1.0)) < 1e-12 && std::abs(c.candidates[0] + l) < 1e-12;
        CHECK((direct || swapped));
        const auto chosen = s.branches.front().select_fixed(prob);
        REQUIRE(chosen.size() == 1);
        CHECK(std::abs(chosen[0].value() - (l + 1.0)) < 1e-12);
        CHECK(chosen[0].reason != SelectionReason::Unselected);
    }
}

TEST_CASE("harmonic residue sum vanishes exactly at the closed-form energies") {
    const PotentialSpec s = make_potential("harmonic", {{"omega", 2.0}});
    for (int n = 0; n < 6; ++n) {
        const double E = closed_form_energy(s, n);
        CHECK(std::abs(quantization_residual(s.branches.front(), n, E)) < 1e-12);
        CHECK(std::abs(quantization_residual(s.branches.front(), n, E + 0.3)) > 1e-3);
    }
}

TEST_CASE("residue sum is linear in the number of moving poles") {
    const PotentialSpec s = make_potential("morse", {});
    const auto& fam = s.branches.front();
    const cplx r0 = quantization_residual(fam, 0, 1.3);
    const cplx r1 = quantization_residual(fam, 1, 1.3);
    const cplx r2 = quantization_residual(fam, 2, 1.3);
    CHECK(std::abs((r2 - r1) - (r1 - r0)) < 1e-12);
    CHECK(std::abs(std::abs(r1 - r0) - fam.moving_multiplier * kMovingPoleResidue) < 1e-12);
}

TEST_CASE("problem validation rejects malformed input") {
    const RationalFunction R = RationalFunction::pole(0.0, 2, -2.0);
    CHECK_NOTHROW(make_riccati_problem("y", R, {0.0}, 0));
    CHECK_THROWS_AS(make_riccati_problem("y", R, {}, 0), std::invalid_argument);
    CHECK_THROWS_AS(make_riccati_problem("y", R, {0.0}, -1), std::invalid_argument);
    CHECK_THROWS_AS(make_riccati_problem("y", R, {0.0}, 0, RationalFunction::pole(1.0, 2)), std::invalid_argument);
    CHECK_THROWS_AS(make_riccati_problem("y", R, {0.0}, 0, RationalFunction(poly_y())), std::invalid_argument);
    // y^4 growth needs chi ~ y^2
    const RationalFunction quartic(Polynomial::from_real({0.0, 0.0, 0.0, 0.0, 1.0}));
    CHECK_THROWS_AS(make_riccati_problem("y", quartic, {}, 1), std::invalid_argument);
    CHECK_NOTHROW(make_riccati_problem("y", quartic, {}, 2));
}

TEST_CASE("residue candidates at a listed pole only") {
    const RiccatiProblem p = make_riccati_problem("y", RationalFunction::pole(0.0, 2, -2.0), {0.0}, 0);
    CHECK_THROWS_AS(fixed_pole_residues(p, 1.0), std::invalid_argument);
    const ResidueChoice c = fixed_pole_residues(p, 0.0);
    // b^2 - b - 2 = 0
    CHECK(std::abs(c.candidates[0] * c.candidates[1] + 2.0) < 1e-12);
    CHECK(std::abs(c.candidates[0] + c.candidates[1] - 1.0) < 1e-12);
    CHECK_THROWS_AS(c.value(), std::logic_error);
}

TEST_CASE("quartic probe has no decaying branch for any parameters") {
    std::mt19937 gen(4242);
    std::uniform_real_distribution<double> u(-3.0, 3.0), pos(0.1, 3.0);
    for (int trial = 0; trial < 25; ++trial) {
        const PotentialSpec s = make_potential(
            "quartic_probe", {{"alpha", u(gen)}, {"beta", u(gen)}, {"gamma", u(gen)}, {"delta", pos(gen)}});
        CHECK_THROWS_AS(quantization_residual_min(s, trial % 4, u(gen)), NoNormalizableBranch);
    }
}

TEST_CASE("energy scan recovers the harmonic levels") {
    const PotentialSpec s = make_potential("harmonic", {{"omega", 2.0}});
    for (int n = 0; n < 3; ++n) {
        const EnergyScan scan = solve_energy(s, n);
        REQUIRE_FALSE(scan.energies.empty());
        bool found = false;
        for (double E : scan.energies) found = found || std::abs(E - (2.0 * n + 1.0)) < 1e-8;
        CHECK(found);
    }
}
