#include "qhj/contour.hpp"
#include "qhj/qes.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

using namespace qhj;

namespace {

ClosedFormState sextic_state(int index) {
    const PotentialSpec base = make_potential("sextic", {{"alpha", 0.0}, {"beta", 2.0}, {"gamma", 1.0}});
    const PotentialSpec s = make_potential("sextic", stratum_params(base, 2));
    return algebraic_sector(s, 2).states.at(index).state;
}

}  // namespace

TEST_CASE("harmonic action integral counts the nodes") {
    const PotentialSpec h = make_potential("harmonic", {{"omega", 2.0}});
    for (int n : {0, 2, 5}) {
        const ClosedFormState st = closed_form_state(h, n);
        const ActionResult r = action_integral(st, default_contour(st));
        CHECK(std::abs(r.J - cplx(n, 0.0)) < 1e-8);
        CHECK(r.enclosed_zeros == n);
        CHECK(r.last_change < 1e-9);
    }
}

TEST_CASE("sextic sector states: complex zeros stay outside the strip") {
    const ClosedFormState lower = sextic_state(0), upper = sextic_state(1);
    CHECK(std::abs(action_integral(lower, default_contour(lower)).J) < 1e-8);
    CHECK(std::abs(action_integral(upper, default_contour(upper)).J - 2.0) < 1e-8);

    const auto census = complex_pole_census(lower, -3.0, 3.0, 3.0);
    int off_axis = 0;
    for (const auto& p : census) off_axis += !p.real;
    CHECK(off_axis == 2);
    const ContourSpec c = default_contour(lower);
    for (const auto& p : census) CHECK(std::abs(p.x.imag()) > c.h);
}

TEST_CASE("census of a harmonic state lists its real nodes") {
    const ClosedFormState st = closed_form_state(make_potential("harmonic", {{"omega", 2.0}}), 3);
    const auto census = complex_pole_census(st, -4.0, 4.0, 1.0);
    REQUIRE(census.size() == 3);
    for (const auto& p : census) {
        CHECK(p.real);
        CHECK(p.in_domain);
    }
}

TEST_CASE("the integral does not depend on the rectangle when no pole is crossed") {
    const ClosedFormState st = closed_form_state(make_potential("morse", {{"A", 4.0}, {"B", 1.0}, {"alpha", 1.0}}), 2);
    const ContourSpec base = default_contour(st);
    const cplx J0 = action_integral(st, base).J;
    ContourSpec wider = base;
    wider.a -= 0.4;
    wider.b += 0.7;
    wider.h *= 0.6;
    CHECK(std::abs(action_integral(st, wider).J - J0) < 1e-8);
}

TEST_CASE("random rectangles enclose as many zeros as the integral counts") {
    const ClosedFormState st = closed_form_state(make_potential("harmonic", {{"omega", 2.0}}), 6);
    std::mt19937 gen(2024);
    std::uniform_real_distribution<double> ua(-4.0, 0.0), ub(0.0, 4.0), uh(0.05, 0.5);
    for (int trial = 0; trial < 20; ++trial) {
        ContourSpec c;
        c.a = ua(gen);
        c.b = ub(gen);
        c.h = uh(gen);
        const ActionResult r = action_integral(st, c);
        CHECK(std::abs(r.J - cplx(r.enclosed_zeros, 0.0)) < 1e-7);
    }
}

TEST_CASE("a rectangle edge through a node is moved off it") {
    const ClosedFormState st = closed_form_state(make_potential("harmonic", {{"omega", 2.0}}), 1);
    ContourSpec c;
    c.a = 0.0;  // the node of the first excited state
    c.b = 2.0;
    c.h = 0.3;
    const ActionResult r = action_integral(st, c);
    CHECK_FALSE(r.notes.empty());
    CHECK(r.contour.a < 0.0);
    CHECK(std::abs(r.J - 1.0) < 1e-8);
}

TEST_CASE("contour CSV") {
    const ClosedFormState st = closed_form_state(make_potential("harmonic", {{"omega", 2.0}}), 1);
    std::ostringstream os;
    write_contour_csv(os, st, default_contour(st), 10);
    const std::string s = os.str();
    CHECK(s.substr(0, s.find('\n')) == "edge,t,re_x,im_x,re_p,im_p");
    CHECK(std::count(s.begin(), s.end(), '\n') == 41);
}
