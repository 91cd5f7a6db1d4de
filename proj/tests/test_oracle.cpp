#include "qhj/oracle.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

using namespace qhj;

namespace {

const double kPi = std::acos(-1.0);

double zero(double) { return 0.0; }

}  // namespace

TEST_CASE("particle in a box reaches k^2 after refinement") {
    const RefinedSpectrum r = refine_to(zero, {0.0, kPi}, 4, 1e-9, 400);
    REQUIRE(r.levels.size() == 4);
    CHECK(r.certified);
    for (int k = 0; k < 4; ++k) {
        CHECK(std::abs(r.levels[k].energy - (k + 1.0) * (k + 1.0)) < 1e-6);
        CHECK(r.levels[k].node_count == k);
        CHECK(r.levels[k].converged);
    }
    CHECK(r.grid_points.size() >= 2);
    CHECK(r.grid_points[1] == 2 * r.grid_points[0] + 1);
}

TEST_CASE("raw box eigenvalue error falls like h^2") {
    std::vector<double> err;
    for (int N : {200, 401, 803}) {
        const GridSpectrum g = eigen_lowest(discretize(zero, {0.0, kPi}, N), 1, false);
        err.push_back(std::abs(g.eigenvalues[0] - 1.0));
    }
    for (int i = 0; i + 1 < 3; ++i) {
        const double ratio = err[i] / err[i + 1];
        CHECK(ratio > 3.6);
        CHECK(ratio < 4.4);
    }
}

TEST_CASE("harmonic and hydrogen ground states") {
    const PotentialSpec h = make_potential("harmonic", {{"omega", 2.0}});
    const RefinedSpectrum rh = refine_to(h.V, {-10.0, 10.0}, 3, 1e-9, 2000);
    CHECK(std::abs(rh.levels[0].energy - 1.0) < 1e-6);
    CHECK(std::abs(rh.levels[2].energy - 5.0) < 1e-6);

    const PotentialSpec c = make_potential("hydrogen_radial", {{"Ze2", 2.0}, {"l", 0.0}});
    const GridSpectrum g = eigen_lowest(discretize(c.V, {0.0, 60.0}, 6000), 2, false);
    CHECK(std::abs(g.eigenvalues[0] + 1.0) < 1e-2);
    const RefinedSpectrum rc = refine_to(c.V, {0.0, 60.0}, 1, 1e-7, 3000);
    CHECK(std::abs(rc.levels[0].energy + 1.0) < 1e-4);
}

TEST_CASE("eigenvalues increase and node counts follow the index") {
    const PotentialSpec m = make_potential("morse", {{"A", 4.0}, {"B", 1.0}, {"alpha", 1.0}});
    const GridSpectrum g = eigen_lowest(discretize(m.V, {-4.0, 14.0}, 3000), 4, true);
    REQUIRE(g.eigenvalues.size() == 4);
    for (int k = 0; k < 4; ++k) {
        CHECK(g.node_counts[k] == k);
        CHECK(count_nodes(g.eigenvectors[k]) == k);
        if (k > 0) CHECK(g.eigenvalues[k] > g.eigenvalues[k - 1]);
    }
}

TEST_CASE("symmetric potentials give eigenvectors of definite parity") {
    const PotentialSpec h = make_potential("harmonic", {{"omega", 2.0}});
    const GridSpectrum g = eigen_lowest(discretize(h.V, {-8.0, 8.0}, 1601), 4, true);
    for (int k = 0; k < 4; ++k) {
        const auto& v = g.eigenvectors[k];
        const double sign = k % 2 == 0 ? 1.0 : -1.0;
        double worst = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) worst = std::max(worst, std::abs(v[i] - sign * v[v.size() - 1 - i]));
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("grid size comes from the environment when set") {
    ::unsetenv("QHJ_ORACLE_POINTS");
    CHECK(default_oracle_points() == 2000);
    ::setenv("QHJ_ORACLE_POINTS", "3500", 1);
    CHECK(default_oracle_points() == 3500);
    ::setenv("QHJ_ORACLE_POINTS", "lots", 1);
    CHECK(default_oracle_points() == 2000);
    ::unsetenv("QHJ_ORACLE_POINTS");
}

TEST_CASE("a singular node shifts the grid instead of failing") {
    // 1/|x - 0.5| is infinite at the midpoint of [0, 1], which is a node for odd N.
    const auto V = [](double x) { return std::abs(x - 0.5) < 1e-12 ? INFINITY : 1.0 / std::abs(x - 0.5); };
    const TridiagonalSystem s = discretize(V, {0.0, 1.0}, 99);
    CHECK(s.points == 100);
    CHECK_THROWS_AS(discretize(V, {0.0, 1.0}, 2), OracleError);
    CHECK_THROWS_AS(discretize(zero, {0.0, INFINITY}, 100), OracleError);
}

TEST_CASE("oracle spectrum for a catalog entry is certified") {
    const PotentialSpec m = make_potential("morse", {});
    const RefinedSpectrum r = oracle_spectrum(m, 2);
    CHECK(r.certified);
    CHECK(std::abs(r.levels[0].energy) < 1e-6);
    CHECK(std::abs(r.levels[1].energy - 3.0) < 1e-6);
}

TEST_CASE("eigenfunction CSV header") {
    const GridSpectrum g = eigen_lowest(discretize(zero, {0.0, 1.0}, 50), 2, true);
    std::ostringstream os;
    write_eigenfunction_csv(os, g);
    const std::string s = os.str();
    CHECK(s.substr(0, s.find('\n')) == "x,psi_0,psi_1");
    CHECK(std::count(s.begin(), s.end(), '\n') == 51);
}
