#include "qhj/catalog.hpp"

#include <doctest.h>

#include <cmath>

using namespace qhj;

namespace {

std::vector<double> samples(const Interval& d, double lo, double hi, int count) {
    std::vector<double> xs;
    const double a = std::isfinite(d.lo) ? std::max(lo, d.lo + 0.05) : lo;
    const double b = std::isfinite(d.hi) ? std::min(hi, d.hi - 0.05) : hi;
    for (int i = 0; i < count; ++i) xs.push_back(a + (b - a) * (i + 0.5) / count);
    return xs;
}

}  // namespace

TEST_CASE("catalog lists every entry") {
    const auto ids = catalog_list();
    CHECK(ids.size() == 13);
    for (const char* id : {"harmonic", "morse", "poschl_teller", "eckart", "hydrogen_radial", "sextic", "sextic_barrier",
                           "circular", "hyperbolic_qes", "sinh_family", "cosh_family", "exp_family", "quartic_probe"}) {
        CHECK(catalog_has(id));
        CHECK_NOTHROW(make_potential(id));
    }
    CHECK_FALSE(catalog_has("square_well"));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(make_potential("eckart", {{"A", 2.0}, {"B", 3.0}, {"alpha", 1.0}}), InvalidParameters);
    CHECK_THROWS_AS(make_potential("poschl_teller", {{"A", 2.0}, {"B", 1.0}, {"alpha", 1.0}}), InvalidParameters);
    CHECK_THROWS_AS(make_potential("harmonic", {{"omega", -1.0}}), InvalidParameters);
    CHECK_THROWS_AS(make_potential("harmonic", {{"frequency", 1.0}}), InvalidParameters);
    CHECK_THROWS_AS(make_potential("hydrogen_radial", {{"l", 0.5}}), InvalidParameters);
    CHECK_THROWS_AS(make_potential("nonexistent"), std::exception);
}

TEST_CASE("Riccati data reproduce the potential") {
    for (const auto& id : catalog_list()) {
        const PotentialSpec s = make_potential(id);
        for (double x : samples(s.domain, -2.5, 2.5, 13)) {
            const double v = s.V(x);
            CHECK_MESSAGE(std::abs(reconstructed_potential(s, x, 0.7) - v) < 1e-9 * std::max(1.0, std::abs(v)),
                          id << " at x=" << x);
        }
    }
}

TEST_CASE("closed-form energies") {
    const PotentialSpec h = make_potential("harmonic", {{"omega", 2.0}});
    CHECK(closed_form_energy(h, 3) == doctest::Approx(7.0).epsilon(1e-14));
    const PotentialSpec m = make_potential("morse", {{"A", 2.0}, {"B", 1.0}, {"alpha", 1.0}});
    CHECK(m.bound_state_count() == 2);
    CHECK(closed_form_energy(m, 0) == doctest::Approx(0.0));
    CHECK(closed_form_energy(m, 1) == doctest::Approx(3.0));
    CHECK_THROWS_AS(closed_form_energy(m, 2), OutOfSpectrum);
    const PotentialSpec hy = make_potential("hydrogen_radial", {{"Ze2", 2.0}, {"l", 1.0}});
    CHECK(closed_form_energy(hy, 0) == doctest::Approx(-0.25));
    CHECK_THROWS_AS(closed_form_energy(make_potential("sextic"), 0), std::exception);
}

TEST_CASE("closed-form states solve the Schrodinger equation") {
    for (const char* id : {"harmonic", "morse", "poschl_teller", "eckart", "hydrogen_radial"}) {
        const PotentialSpec s = make_potential(id);
        const int count = s.bound_state_count() < 0 ? 5 : std::min(5, s.bound_state_count());
        for (int n = 0; n < count; ++n) {
            const ClosedFormState st = closed_form_state(s, n);
            CHECK_MESSAGE(st.schrodinger_residual(samples(s.domain, -3.0, 6.0, 40)) < 1e-7, id << " n=" << n);
            CHECK_MESSAGE(static_cast<int>(st.nodes().size()) == n, id << " n=" << n);
        }
    }
}

TEST_CASE("printed harmonic ODE yields the monic Hermite polynomial") {
    const PotentialSpec s = make_potential("harmonic", {{"omega", 2.0}});
    const Polynomial p = solve_hypergeometric_ode(s.printed_ode(2, 5.0), 2);
    CHECK(std::abs(p[2] - cplx(1.0)) < 1e-12);
    CHECK(std::abs(p[1]) < 1e-12);
    CHECK(std::abs(p[0] + 0.5) < 1e-12);
    CHECK(s.printed_ode(2, 5.0).apply(p).max_abs_coeff() < 1e-12);
}

TEST_CASE("QES condition residual vanishes on the stratum") {
    const PotentialSpec h = make_potential("hyperbolic_qes", {{"mu", 2.0}});
    CHECK(qes_condition_residual(h, 2) < 1e-14);
    CHECK(qes_condition_residual(h, 1) == doctest::Approx(1.0));
    CHECK_THROWS_AS(qes_condition_residual(make_potential("harmonic"), 0), NotQES);
}

TEST_CASE("export metadata") {
    const PotentialSpec s = make_potential("morse");
    const std::string h = params_hash(s.params);
    CHECK(h.size() == 16);
    CHECK(h.find_first_not_of("0123456789abcdef") == std::string::npos);
    CHECK(h == params_hash(make_potential("morse").params));
    CHECK(h != params_hash(make_potential("morse", {{"A", 2.5}}).params));
    const auto j = catalog_json(s);
    CHECK(j["schema"] == 1);
    CHECK(j.contains("parameter_schema"));
}
