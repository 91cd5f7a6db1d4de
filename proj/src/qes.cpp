#include "qhj/qes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace qhj {

namespace {

Polynomial as_polynomial(const RationalFunction& r, const char* what) {
    if (!r.den_factors().empty())
        throw std::runtime_error(std::string("sector gauge leaves a singular ") + what + " coefficient");
    const Polynomial& p = r.num();
    return p.is_zero() ? p : p.chopped(1e-12);
}

VariableMap cosh_squared_map() {
    VariableMap m;
    m.formula = "xi = cosh^2 x";
    m.y = [](cplx x) { return std::cosh(x) * std::cosh(x); };
    m.dy = [](cplx x) { return std::sinh(2.0 * x); };
    m.d2y = [](cplx x) { return 2.0 * std::cosh(2.0 * x); };
    m.x_of_y = [](double xi) { return xi >= 1.0 ? std::acosh(std::sqrt(xi)) : std::numeric_limits<double>::quiet_NaN(); };
    return m;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

SectorGauge sector_gauge(const PotentialSpec& spec) {
    SectorGauge g;
    if (spec.id == "sextic") {
        g.map = spec.variable_map;
        g.J2 = RationalFunction::constant(1.0);
        g.K = Polynomial();
        g.V_of_y = spec.V_of_y;
        prefactor_from_residues(spec, 0.0, g.factors, g.exp_polynomial);
    } else if (spec.id == "hyperbolic_qes") {
        // Engine data lives in y = cosh x; the sector polynomial is even in y,
        // so everything is re-expressed through xi = y^2.
        std::vector<ExponentFactor> fy;
        Polynomial Qy;
        prefactor_from_residues(spec, 0.0, fy, Qy);
        double e0 = 0.0, e1 = 0.0, em1 = 0.0;
        for (const auto& f : fy) {
            if (std::abs(f.location) < 1e-12) e0 = f.exponent;
            else if (std::abs(f.location - 1.0) < 1e-12) e1 = f.exponent;
            else if (std::abs(f.location + 1.0) < 1e-12) em1 = f.exponent;
        }
        if (std::abs(e1 - em1) > 1e-12) throw std::runtime_error("hyperbolic prefactor is not even in cosh x");
        std::vector<cplx> q;
        for (int k = 0; k <= Qy.degree(); ++k) {
            if (k % 2 == 1 && std::abs(Qy[k]) > 1e-12) throw std::runtime_error("hyperbolic exponent polynomial is odd");
            if (k % 2 == 0) q.push_back(Qy[k]);
        }
        g.map = cosh_squared_map();
        g.factors = {{0.0, 0.5 * e0}, {1.0, e1}};
        g.exp_polynomial = Polynomial(q);
        g.J2 = RationalFunction(Polynomial::from_real({0.0, -4.0, 4.0}));
        g.K = Polynomial::from_real({-2.0, 4.0});
        const auto& p = spec.params;
        const double s1 = p.at("s1"), s2 = p.at("s2"), q1 = p.at("q1"), mu = p.at("mu");
        const double A = 4.0 * (s1 - 0.25) * (s1 - 0.75), B = 4.0 * (s2 - 0.25) * (s2 - 0.75);
        const double C = q1 * q1 + 4.0 * q1 * (s1 + s2 + mu), D = q1 * q1;
        g.V_of_y = RationalFunction::pole(0.0, 1, -A) + RationalFunction::pole(1.0, 1, B) +
                   RationalFunction(Polynomial::from_real({0.0, -C, D}));
    } else {
        throw NotQES("no algebraic sector is implemented for " + spec.id);
    }
    RationalFunction G(g.exp_polynomial.derivative());
    for (const auto& f : g.factors) G += RationalFunction::pole(f.location, 1, f.exponent);
    const RationalFunction K(g.K);
    g.c2 = as_polynomial(-1.0 * g.J2, "P''");
    g.c1 = as_polynomial(-1.0 * (2.0 * g.J2 * G + K), "P'");
    g.c0 = as_polynomial(g.V_of_y - g.J2 * (G.derivative() + G * G) - K * G, "P");
    return g;
}

ParamSet stratum_params(const PotentialSpec& spec, int n) {
    ParamSet p = spec.params;
    if (spec.id == "sextic") {
        const double b = p.at("beta"), g = p.at("gamma");
        p["alpha"] = b * b / (4.0 * g) - (3.0 + 2.0 * n) * std::sqrt(g);
    } else if (spec.id == "hyperbolic_qes") {
        p["mu"] = n;
    } else {
        throw NotQES("no algebraic sector is implemented for " + spec.id);
    }
    return p;
}

SectorMatrix build_sector_matrix(const PotentialSpec& spec, int n) {
    if (!spec.qes) throw NotQES(spec.id + " is not quasi-exactly solvable");
    if (n < 0) throw std::invalid_argument("sector degree must be non-negative");
    const SectorGauge g = sector_gauge(spec);
    int lo_off = 0, hi_off = 0;
    auto offsets = [&](const Polynomial& c, int shift) {
        for (int k = 0; k <= c.degree(); ++k)
            if (c[k] != 0.0) {
                lo_off = std::min(lo_off, k - shift);
                hi_off = std::max(hi_off, k - shift);
            }
    };
    offsets(g.c2, 2);
    offsets(g.c1, 1);
    offsets(g.c0, 0);
    const int raise = std::max(hi_off, 0);

    SectorMatrix m;
    m.n = n;
    m.potential_id = spec.id;
    m.params = spec.params;
    m.variable = spec.id == "hyperbolic_qes" ? "xi" : "x";
    m.lower_band = -lo_off;
    m.upper_band = hi_off;
    m.matrix = Eigen::MatrixXd::Zero(n + 1, n + 1);
    m.overflow = Eigen::MatrixXd::Zero(raise, n + 1);
    for (int j = 0; j <= n; ++j) {
        const double jj = j;
        const Polynomial h = g.c2 * Polynomial::monomial(std::max(j - 2, 0), jj * (jj - 1.0)) +
                             g.c1 * Polynomial::monomial(std::max(j - 1, 0), jj) + g.c0 * Polynomial::monomial(j);
        for (int i = 0; i <= h.degree(); ++i) {
            const double v = h[i].real();
            if (i <= n) {
                m.matrix(i, j) = v;
                if (i - j < lo_off || i - j > hi_off) m.band_violation = std::max(m.band_violation, std::abs(v));
            } else if (i - n - 1 < raise) {
                m.overflow(i - n - 1, j) = v;
            }
        }
    }
    const double scale = std::max(1.0, m.matrix.cwiseAbs().maxCoeff());
    std::vector<double> top;
    double worst = 0.0;
    for (int r = 0; r < raise; ++r) {
        top.push_back(std::abs(m.overflow(r, n)));
        worst = std::max(worst, top.back());
    }
    if (worst > 1e-9 * scale) {
        std::string msg = spec.id + ": degree-" + std::to_string(n) + " sector leaks; overflow coefficients";
        for (std::size_t r = 0; r < top.size(); ++r)
            msg += " y^" + std::to_string(n + 1 + static_cast<int>(r)) + ":" + fmt(top[r]);
        throw SectorLeakage(msg, top);
    }
    return m;
}

ZeroCounts count_zeros(const ClosedFormState& state, std::vector<cplx>* roots) {
    ZeroCounts z;
    const int d = state.polynomial.degree();
    if (d < 1) {
        if (roots) roots->clear();
        return z;
    }
    const auto rr = poly_roots(state.polynomial);
    z.total = static_cast<int>(rr.all.size());
    for (const cplx r : rr.all) {
        if (!is_real_root(r)) continue;
        const double x = state.map.x_of_y(r.real());
        if (std::isfinite(x) && state.domain.contains(x)) ++z.real_zeros;
    }
    z.complex_zeros = z.total - z.real_zeros;
    if (roots) *roots = rr.all;
    return z;
}

AlgebraicSector solve_sector(const PotentialSpec& spec, const SectorMatrix& m) {
    AlgebraicSector out;
    out.n = m.n;
    out.potential_id = m.potential_id;
    out.params = m.params;
    const SectorGauge g = sector_gauge(spec);
    const int N = m.n + 1;
    const double norm = std::max(1.0, m.matrix.cwiseAbs().maxCoeff());
    const double ovnorm = m.overflow.size() ? m.overflow.cwiseAbs().maxCoeff() : 0.0;

    Eigen::EigenSolver<Eigen::MatrixXd> es(m.matrix, false);
    std::vector<double> energies;
    for (int k = 0; k < N; ++k) {
        const cplx lam = es.eigenvalues()[k];
        if (std::abs(lam.imag()) > 1e-9 * norm) {
            out.notes.push_back("complex eigenvalue " + fmt(lam.real()) + (lam.imag() < 0 ? "" : "+") +
                                fmt(lam.imag()) + "i skipped");
            continue;
        }
        energies.push_back(lam.real());
    }
    std::sort(energies.begin(), energies.end());

    for (std::size_t k = 0; k < energies.size(); ++k) {
        const double E = energies[k];
        const double delta = 1e-10 * norm * (1.0 + static_cast<double>(k % 3));
        const Eigen::MatrixXd A = m.matrix - (E + delta) * Eigen::MatrixXd::Identity(N, N);
        const Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
        Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(N, 1.0, 2.0);
        for (int it = 0; it < 4; ++it) {
            v = lu.solve(v);
            v /= v.norm();
        }
        const double ov = m.overflow.size() ? (m.overflow * v).cwiseAbs().maxCoeff() : 0.0;
        if (ov > 1e-8 * std::max(1.0, ovnorm)) {
            out.notes.push_back("eigenvalue " + fmt(E) + " rejected: its eigenvector leaves the sector (overflow " +
                                fmt(ov) + ")");
            continue;
        }
        for (int i = 0; i < N; ++i)
            if (std::abs(v[i]) < 1e-13) v[i] = 0.0;
        int deg = N - 1;
        while (deg > 0 && v[deg] == 0.0) --deg;
        v /= v[deg];

        SectorState st;
        st.eigen_residual = (m.matrix * v - E * v).norm() / v.norm();
        std::vector<cplx> c(v.data(), v.data() + deg + 1);
        st.state.n = m.n;
        st.state.energy = E;
        st.state.exponent_factors = g.factors;
        st.state.exp_polynomial = g.exp_polynomial;
        st.state.polynomial = Polynomial(c);
        st.state.map = g.map;
        st.state.potential = spec.V;
        st.state.domain = spec.domain;
        st.zeros = count_zeros(st.state, &st.roots);
        if (spec.id == "sextic") {
            bool even = true, odd = true;
            for (int i = 0; i <= deg; ++i) {
                if (v[i] == 0.0) continue;
                (i % 2 == 0 ? odd : even) = false;
            }
            st.parity = even ? 1 : (odd ? -1 : 0);
        }
        out.states.push_back(std::move(st));
    }
    for (std::size_t k = 0; k + 1 < out.states.size(); ++k) {
        if (out.states[k + 1].state.energy - out.states[k].state.energy <= 1e-8 * norm) {
            out.states[k].degenerate = out.states[k + 1].degenerate = true;
            out.has_degeneracy = true;
        }
    }
    if (out.has_degeneracy) out.notes.push_back("eigenvalues within 1e-8 |M| reported as a cluster");
    return out;
}

AlgebraicSector algebraic_sector(const PotentialSpec& spec, int n) {
    AlgebraicSector sec = solve_sector(spec, build_sector_matrix(spec, n));
    if (spec.id == "hyperbolic_qes") {
        for (auto& st : sec.states) {
            try {
                st.bethe_residual = bethe_check(spec, st.state);
            } catch (const DegenerateConfiguration& e) {
                sec.notes.push_back(e.what());
            }
            try {
                st.energy_formula_residual = sector_energy_formula_check(spec, st.state);
            } catch (const std::runtime_error& e) {
                sec.notes.push_back(e.what());
            }
        }
    }
    return sec;
}

namespace {

std::vector<cplx> xi_roots(const PotentialSpec& spec, const ClosedFormState& state) {
    if (spec.id != "hyperbolic_qes") throw std::invalid_argument("root equations apply to hyperbolic_qes only");
    if (state.polynomial.degree() < 1) return {};
    return poly_roots(state.polynomial).all;
}

}  // namespace

double bethe_check(const PotentialSpec& spec, const ClosedFormState& state) {
    const auto roots = xi_roots(spec, state);
    const double s1 = spec.params.at("s1"), s2 = spec.params.at("s2"), q = spec.params.at("q1");
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t k = i + 1; k < roots.size(); ++k)
            if (std::abs(roots[i] - roots[k]) < 1e-10)
                throw DegenerateConfiguration("root collision at xi = " + fmt(roots[i].real()));
    double worst = 0.0;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        const cplx xi = roots[i];
        cplx r = s1 / xi + s2 / (xi - 1.0) - 0.5 * q;
        for (std::size_t k = 0; k < roots.size(); ++k)
            if (k != i) r += 1.0 / (xi - roots[k]);
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

double sector_energy_formula_check(const PotentialSpec& spec, const ClosedFormState& state) {
    const auto roots = xi_roots(spec, state);
    const double s1 = spec.params.at("s1"), s2 = spec.params.at("s2"), q = spec.params.at("q1");
    cplx inv_sum = 0.0;
    for (const cplx xi : roots) {
        if (std::abs(xi) < 1e-12) throw std::runtime_error("sector root at xi = 0 makes the energy formula singular");
        inv_sum += 1.0 / xi;
    }
    const cplx formula = -4.0 * (s1 + s2 - 0.5) * (s1 + s2 - 0.5) - 8.0 * s1 * (0.5 * q + inv_sum);
    return std::abs(state.energy - formula);
}

void write_zero_atlas_csv(std::ostream& os, const std::vector<AlgebraicSector>& sectors, bool header) {
    if (header) os << "potential,params_hash,n,state_index,E,real_zeros,complex_zeros,bethe_residual\n";
    for (const auto& sec : sectors) {
        const std::string h = params_hash(sec.params);
        for (std::size_t i = 0; i < sec.states.size(); ++i) {
            const auto& st = sec.states[i];
            os << sec.potential_id << ',' << h << ',' << sec.n << ',' << i << ',' << fmt(st.state.energy) << ','
               << st.zeros.real_zeros << ',' << st.zeros.complex_zeros << ',';
            if (st.bethe_residual >= 0.0) os << fmt(st.bethe_residual);
            os << '\n';
        }
    }
}

}  // namespace qhj
