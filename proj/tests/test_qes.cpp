#include "qhj/qes.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

using namespace qhj;

namespace {

PotentialSpec sextic_on_stratum(double beta, double gamma, int n) {
    const PotentialSpec base = make_potential("sextic", {{"alpha", 0.0}, {"beta", beta}, {"gamma", gamma}});
    return make_potential("sextic", stratum_params(base, n));
}

PotentialSpec hyperbolic(double s1, double s2, double q1, int mu) {
    return make_potential("hyperbolic_qes", {{"s1", s1}, {"s2", s2}, {"q1", q1}, {"mu", double(mu)}});
}

}  // namespace

TEST_CASE("sextic sector matrix for a = b = 1, n = 2") {
    const SectorMatrix m = build_sector_matrix(sextic_on_stratum(2.0, 1.0, 2), 2);
    Eigen::MatrixXd expected(3, 3);
    expected << 1, 0, -2, 0, 3, 0, -4, 0, 5;
    CHECK((m.matrix - expected).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(m.variable == "x");
    CHECK(m.band_violation == 0.0);
}

TEST_CASE("off-stratum sextic leaks out of the sector") {
    const PotentialSpec s = make_potential("sextic", {{"alpha", -5.0}, {"beta", 2.0}, {"gamma", 1.0}});
    try {
        build_sector_matrix(s, 2);
        FAIL("expected SectorLeakage");
    } catch (const SectorLeakage& e) {
        REQUIRE_FALSE(e.overflow.empty());
        CHECK(*std::max_element(e.overflow.begin(), e.overflow.end()) > 0.5);
        CHECK(std::string(e.what()).find("y^") != std::string::npos);
    }
}

TEST_CASE("sextic states: energies, parity and rejected spurious vectors") {
    const AlgebraicSector s1 = algebraic_sector(sextic_on_stratum(2.0, 1.0, 1), 1);
    REQUIRE(s1.states.size() == 1);
    CHECK(s1.states[0].state.energy == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(s1.states[0].parity == -1);
    CHECK_FALSE(s1.notes.empty());

    const AlgebraicSector s2 = algebraic_sector(sextic_on_stratum(2.0, 1.0, 2), 2);
    REQUIRE(s2.states.size() == 2);
    CHECK(s2.states[0].state.energy == doctest::Approx(3.0 - 2.0 * std::sqrt(3.0)).epsilon(1e-12));
    CHECK(s2.states[1].state.energy == doctest::Approx(3.0 + 2.0 * std::sqrt(3.0)).epsilon(1e-12));
    CHECK(s2.states[0].zeros.real_zeros == 0);
    CHECK(s2.states[0].zeros.complex_zeros == 2);
    CHECK(s2.states[1].zeros.real_zeros == 2);
    for (const auto& st : s2.states) {
        CHECK(st.parity == 1);
        CHECK(st.eigen_residual < 1e-10);
        CHECK(st.bethe_residual < 0.0);
    }
}

TEST_CASE("hyperbolic sector matches independent high-precision values") {
    // s1 = s2 = q1 = 1, obtained by solving the Schrodinger equation for the
    // ansatz cosh^1.5 sinh^1.5 exp(-cosh^2/2) (cosh^2 - r) with 40-digit arithmetic.
    const AlgebraicSector s0 = algebraic_sector(hyperbolic(1, 1, 1, 0), 0);
    REQUIRE(s0.states.size() == 1);
    CHECK(s0.states[0].state.energy == doctest::Approx(-13.0).epsilon(1e-12));

    const AlgebraicSector s1 = algebraic_sector(hyperbolic(1, 1, 1, 1), 1);
    REQUIRE(s1.states.size() == 2);
    CHECK(s1.states[0].state.energy == doctest::Approx(-31.24621125123532).epsilon(1e-12));
    CHECK(s1.states[1].state.energy == doctest::Approx(-14.75378874876468).epsilon(1e-12));
    CHECK(s1.states[0].roots[0].real() == doctest::Approx(0.43844718719116973).epsilon(1e-10));
    CHECK(s1.states[1].roots[0].real() == doctest::Approx(4.5615528128088303).epsilon(1e-10));
    CHECK(s1.states[0].zeros.real_zeros == 0);
    CHECK(s1.states[1].zeros.real_zeros == 1);
    for (const auto& st : s1.states) {
        CHECK(st.bethe_residual < 1e-10);
        CHECK(st.energy_formula_residual < 1e-10);
    }
}

TEST_CASE("colliding roots are rejected by the root-equation check") {
    const PotentialSpec spec = hyperbolic(1, 1, 1, 2);
    ClosedFormState st = algebraic_sector(spec, 2).states.at(0).state;
    st.polynomial = Polynomial::from_roots({2.0, 2.0});
    CHECK_THROWS_AS(bethe_check(spec, st), DegenerateConfiguration);
}

TEST_CASE("sector zero counts over random parameters") {
    std::mt19937 gen(31337);
    std::uniform_real_distribution<double> ub(-2.0, 3.0), ug(0.4, 2.5), us(0.8, 2.0), uq(0.4, 2.0);
    for (int draw = 0; draw < 10; ++draw) {
        const double beta = ub(gen), gamma = ug(gen);
        const double s1 = us(gen), s2 = us(gen), q1 = uq(gen);
        for (int n = 0; n <= 6; ++n) {
            const AlgebraicSector a = algebraic_sector(sextic_on_stratum(beta, gamma, n), n);
            const AlgebraicSector b = algebraic_sector(hyperbolic(s1, s2, q1, n), n);
            CHECK(a.states.size() == static_cast<std::size_t>(n / 2 + 1));
            CHECK(b.states.size() == static_cast<std::size_t>(n + 1));
            for (const auto* sec : {&a, &b}) {
                for (std::size_t i = 0; i < sec->states.size(); ++i) {
                    const ZeroCounts& z = sec->states[i].zeros;
                    CHECK(z.total == n);
                    CHECK(z.real_zeros + z.complex_zeros == z.total);
                    if (i > 0) CHECK(z.real_zeros >= sec->states[i - 1].zeros.real_zeros);
                }
            }
            // Hyperbolic ground and top states have 0 and n nodes.
            CHECK(b.states.front().zeros.real_zeros == 0);
            CHECK(b.states.back().zeros.real_zeros == n);
        }
    }
}

TEST_CASE("zero atlas CSV") {
    std::vector<AlgebraicSector> secs = {algebraic_sector(sextic_on_stratum(2.0, 1.0, 2), 2)};
    std::ostringstream os;
    write_zero_atlas_csv(os, secs);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "potential,params_hash,n,state_index,E,real_zeros,complex_zeros,bethe_residual");
    std::getline(is, line);
    CHECK(line.rfind("sextic,", 0) == 0);
    CHECK(line.substr(line.size() - 5) == ",0,2,");
    int rows = 1;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 2);
}

TEST_CASE("exactly solvable entries have no algebraic sector") {
    CHECK_THROWS_AS(build_sector_matrix(make_potential("harmonic"), 1), NotQES);
    CHECK_THROWS_AS(stratum_params(make_potential("circular"), 1), NotQES);
}
