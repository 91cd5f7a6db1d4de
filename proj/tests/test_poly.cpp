#include "qhj/poly.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace qhj;

namespace {

bool contains_root(const std::vector<cplx>& roots, cplx r, double tol) {
    return std::any_of(roots.begin(), roots.end(), [&](cplx z) { return std::abs(z - r) < tol; });
}

}  // namespace

TEST_CASE("polynomial arithmetic and derivatives") {
    const Polynomial p = Polynomial::from_real({1.0, -2.0, 3.0});  // 3y^2 - 2y + 1
    const Polynomial q = Polynomial::from_real({0.0, 1.0});
    CHECK(p.degree() == 2);
    CHECK(std::abs(p(2.0) - cplx(9.0)) < 1e-14);
    const Polynomial prod = p * q;
    CHECK(prod.degree() == 3);
    CHECK(std::abs(prod[3] - cplx(3.0)) < 1e-14);
    const Polynomial d = p.derivative();
    CHECK(std::abs(d[0] - cplx(-2.0)) < 1e-14);
    CHECK(std::abs(d[1] - cplx(6.0)) < 1e-14);
    CHECK(p.derivative(3).is_zero());
    CHECK((p - p).is_zero());
    CHECK(Polynomial().degree() == Polynomial::kZeroDegree);

    const auto [quot, rem] = prod.divmod(q);
    CHECK(rem.is_zero());
    CHECK(std::abs(quot(1.5) - p(1.5)) < 1e-13);
}

TEST_CASE("shift and reversal agree with direct evaluation") {
    const Polynomial p = Polynomial::from_real({2.0, 0.0, -1.0, 0.5});
    const Polynomial s = p.shifted(1.5);
    CHECK(std::abs(s(0.25) - p(1.75)) < 1e-12);
    const Polynomial r = p.reversed(3);
    CHECK(std::abs(r(0.5) - std::pow(0.5, 3) * p(2.0)) < 1e-12);
}

TEST_CASE("roots reproduce random monic polynomials") {
    std::mt19937 gen(12345);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int deg = 1 + trial % 9;
        std::vector<cplx> roots;
        while (static_cast<int>(roots.size()) < deg) {
            if (roots.size() + 2 <= static_cast<std::size_t>(deg) && gen() % 2) {
                const cplx z(u(gen), u(gen));
                roots.push_back(z);
                roots.push_back(std::conj(z));
            } else {
                roots.push_back(u(gen));
            }
        }
        const Polynomial p = Polynomial::from_roots(roots);
        const RootResult r = poly_roots(p);
        REQUIRE(static_cast<int>(r.all.size()) == deg);
        CHECK(r.roundtrip_error < 1e-8);
        for (const cplx z : roots) CHECK(contains_root(r.all, z, 1e-5));
        int mult = 0;
        for (const auto& g : r.grouped) mult += g.multiplicity;
        CHECK(mult == deg);
    }
}

TEST_CASE("repeated roots are grouped with their multiplicity") {
    const Polynomial p = Polynomial::from_roots({1.0, 1.0, 1.0, -2.0});
    const RootResult r = poly_roots(p);
    REQUIRE(r.grouped.size() == 2);
    const auto triple = std::find_if(r.grouped.begin(), r.grouped.end(), [](const Root& g) { return g.multiplicity == 3; });
    REQUIRE(triple != r.grouped.end());
    CHECK(std::abs(triple->value - cplx(1.0)) < 1e-6);
}

TEST_CASE("real-root classification") {
    CHECK(is_real_root(cplx(3.0, 1e-10)));
    CHECK_FALSE(is_real_root(cplx(3.0, 1e-6)));
    CHECK(is_real_root(cplx(1e4, 1e-5)));
}

TEST_CASE("common factors cancel in rational functions") {
    // (y - 1)(y + 2) / (y - 1)^2 = (y + 2)/(y - 1)
    const RationalFunction r(Polynomial::from_roots({1.0, -2.0}), {{1.0, 2}});
    REQUIRE(r.den_factors().size() == 1);
    CHECK(r.den_factors()[0].multiplicity == 1);
    CHECK(r.pole_order(1.0) == 1);
    CHECK(std::abs(r(3.0) - cplx(2.5)) < 1e-12);
    CHECK(std::abs(residue_at(r, 1.0) - cplx(3.0)) < 1e-12);
    std::string note;
    CHECK(std::abs(residue_at(r, 5.0, &note)) == 0.0);
    CHECK(note == "not a pole");
}

TEST_CASE("Laurent coefficients at a double pole and at infinity") {
    // 1/(y-2)^2 + 3/(y-2) + y
    const RationalFunction r = RationalFunction::pole(2.0, 2) + RationalFunction::pole(2.0, 1, 3.0) + RationalFunction(poly_y());
    const LaurentExpansion e = laurent_at(r, 2.0, -2, 1);
    CHECK(std::abs(e.coeff(-2) - cplx(1.0)) < 1e-12);
    CHECK(std::abs(e.coeff(-1) - cplx(3.0)) < 1e-12);
    CHECK(std::abs(e.coeff(0) - cplx(2.0)) < 1e-12);
    CHECK(std::abs(e.coeff(1) - cplx(1.0)) < 1e-12);
    const LaurentExpansion inf = laurent_at_infinity(r, -1, 2);
    CHECK(std::abs(inf.coeff(-1) - cplx(1.0)) < 1e-12);
    CHECK(std::abs(inf.coeff(1) - cplx(3.0)) < 1e-12);
    CHECK(std::abs(inf.coeff(2) - cplx(1.0 + 6.0)) < 1e-12);
    CHECK_THROWS_AS(laurent_at(r, 2.0, -1, 1), LaurentOrderError);
}

TEST_CASE("finite residues and the residue at infinity sum to zero") {
    std::mt19937 gen(777);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<PoleFactor> den;
        const int poles = 1 + trial % 4;
        for (int k = 0; k < poles; ++k) den.push_back({cplx(u(gen), u(gen)), 1 + static_cast<int>(gen() % 3)});
        int den_deg = 0;
        for (const auto& f : den) den_deg += f.multiplicity;
        std::vector<cplx> num;
        for (int k = 0; k <= den_deg + 1; ++k) num.emplace_back(u(gen), u(gen));
        const RationalFunction r(Polynomial(num), den);
        cplx total = residue_at_infinity(r);
        for (const auto& f : r.den_factors()) total += residue_at(r, f.location);
        CHECK(std::abs(total) < 1e-8 * std::max(1.0, Polynomial(num).max_abs_coeff()));
    }
}
