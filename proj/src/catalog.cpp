#include "catalog_registry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>

namespace qhj {

namespace detail {

RationalFunction phi_linear_term(const PotentialSpec& spec) { return RationalFunction(spec.K) * spec.inv_J2; }

std::function<RiccatiProblem(double)> riccati_builder(const PotentialSpec& spec, std::vector<cplx> fixed_poles,
                                                      int infinity_pole_order) {
    const RationalFunction l = phi_linear_term(spec);
    const bool chi = spec.riccati_form == "chi";
    RationalFunction base = -1.0 * (spec.V_of_y * spec.inv_J2);
    RationalFunction linear;
    if (chi)
        base = base - (0.25 * (l * l) + 0.5 * l.derivative());
    else
        linear = l;
    const RationalFunction inv_J2 = spec.inv_J2;
    const std::string var = spec.variable_map.formula.substr(0, 1);
    return [=](double E) {
        return make_riccati_problem(var.empty() ? "y" : var, base + E * inv_J2, fixed_poles, infinity_pole_order,
                                    linear);
    };
}

double sampled_minimum(const std::function<double(double)>& V, const Interval& d) {
    double lo = d.lo, hi = d.hi;
    if (!std::isfinite(lo) && !std::isfinite(hi)) {
        lo = -20.0;
        hi = 20.0;
    } else if (!std::isfinite(lo)) {
        lo = hi - 40.0;
    } else if (!std::isfinite(hi)) {
        hi = lo + 40.0;
    }
    const int N = 20000;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 1; i < N; ++i) {
        const double v = V(lo + (hi - lo) * i / N);
        if (std::isfinite(v)) best = std::min(best, v);
    }
    return best;
}

}  // namespace detail

using detail::catalog_entries;

// ------------------------------------------------------------ PolyOde / state

Polynomial PolyOde::apply(const Polynomial& p) const {
    return a2 * p.derivative(2) + a1 * p.derivative() + a0 * p;
}

namespace {

struct Prefactor {
    cplx G{0.0}, dG{0.0};  // F'/F and its derivative in y
    cplx logF{0.0};        // log|F| on the real axis (complex for complex y)
};

Prefactor prefactor_at(const ClosedFormState& s, cplx y, bool real_axis) {
    Prefactor f;
    const Polynomial dQ = s.exp_polynomial.derivative();
    f.G = dQ(y);
    f.dG = dQ.derivative()(y);
    f.logF = s.exp_polynomial(y);
    for (const auto& e : s.exponent_factors) {
        const cplx d = y - e.location;
        f.G += e.exponent / d;
        f.dG -= e.exponent / (d * d);
        f.logF += e.exponent * (real_axis && e.location.imag() == 0.0 ? cplx(std::log(std::abs(d))) : std::log(d));
    }
    return f;
}

}  // namespace

cplx ClosedFormState::log_derivative(cplx x) const {
    const cplx y = map.y(x);
    const Prefactor f = prefactor_at(*this, y, false);
    return map.dy(x) * (f.G + polynomial.derivative()(y) / polynomial(y));
}

void ClosedFormState::evaluate(double x, double& psi_out, double& dpsi, double& d2psi) const {
    const cplx y = map.y(x);
    const Prefactor f = prefactor_at(*this, y, true);
    const cplx F = std::exp(f.logF);
    const cplx P = polynomial(y), P1 = polynomial.derivative()(y), P2 = polynomial.derivative(2)(y);
    const cplx psi_y = F * (f.G * P + P1);
    const cplx psi_yy = F * ((f.dG + f.G * f.G) * P + 2.0 * f.G * P1 + P2);
    const cplx y1 = map.dy(x), y2 = map.d2y(x);
    psi_out = (F * P).real();
    dpsi = (y1 * psi_y).real();
    d2psi = (y1 * y1 * psi_yy + y2 * psi_y).real();
}

double ClosedFormState::psi(double x) const {
    double p, d1, d2;
    evaluate(x, p, d1, d2);
    return p;
}

double ClosedFormState::schrodinger_residual(const std::vector<double>& xs) const {
    double worst = 0.0, peak = 0.0;
    for (double x : xs) {
        double p, d1, d2;
        evaluate(x, p, d1, d2);
        peak = std::max(peak, std::abs(p));
        worst = std::max(worst, std::abs(-d2 + (potential(x) - energy) * p));
    }
    return peak > 0.0 ? worst / peak : std::numeric_limits<double>::infinity();
}

std::vector<double> ClosedFormState::nodes() const {
    std::vector<double> out;
    if (polynomial.degree() < 1) return out;
    for (const cplx r : poly_roots(polynomial).all) {
        if (!is_real_root(r)) continue;
        const double x = map.x_of_y(r.real());
        if (!std::isfinite(x) || !domain.contains(x)) continue;
        if (std::abs(map.y(x) - r.real()) > 1e-7 * std::max(1.0, std::abs(r))) continue;
        out.push_back(x);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<cplx> ClosedFormState::preimages(cplx c, double x_lo, double x_hi, double height) const {
    std::vector<cplx> out;
    const int nx = 24, ny = 8;
    const double pad = 0.5 * height;
    for (int i = 0; i <= nx; ++i)
        for (int j = 0; j <= ny; ++j) {
            cplx x(x_lo - pad + (x_hi - x_lo + 2 * pad) * i / nx, -height - pad + 2 * (height + pad) * j / ny);
            bool ok = false;
            for (int it = 0; it < 200; ++it) {
                const cplx f = map.y(x) - c, d = map.dy(x);
                if (!std::isfinite(std::abs(f)) || std::abs(d) == 0.0) break;
                const cplx step = f / d;
                x -= step;
                if (std::abs(step) < 1e-14 * std::max(1.0, std::abs(x))) {
                    ok = true;
                    break;
                }
            }
            if (!ok && std::abs(map.y(x) - c) > 1e-10 * std::max(1.0, std::abs(c))) continue;
            if (x.real() < x_lo - pad || x.real() > x_hi + pad || std::abs(x.imag()) > height + pad) continue;
            const bool dup = std::any_of(out.begin(), out.end(), [&](cplx z) { return std::abs(z - x) < 1e-4; });
            if (!dup) out.push_back(x);
        }
    std::sort(out.begin(), out.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return out;
}

std::vector<cplx> ClosedFormState::prefactor_singularities(double x_lo, double x_hi, double height) const {
    std::vector<cplx> out;
    for (const auto& e : exponent_factors)
        for (const cplx x : preimages(e.location, x_lo, x_hi, height))
            if (std::none_of(out.begin(), out.end(), [&](cplx z) { return std::abs(z - x) < 1e-4; })) out.push_back(x);
    std::sort(out.begin(), out.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return out;
}

// ------------------------------------------------------------ lookup

std::vector<std::string> catalog_list() {
    std::vector<std::string> ids;
    for (const auto& e : catalog_entries()) ids.push_back(e.id);
    return ids;
}

bool catalog_has(const std::string& id) {
    const auto& es = catalog_entries();
    return std::any_of(es.begin(), es.end(), [&](const auto& e) { return e.id == id; });
}

namespace {

const detail::CatalogEntry& entry(const std::string& id) {
    for (const auto& e : catalog_entries())
        if (e.id == id) return e;
    throw std::invalid_argument("unknown potential '" + id + "'");
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::vector<ParamInfo> catalog_schema(const std::string& id) { return entry(id).schema; }

PotentialSpec make_potential(const std::string& id, const ParamSet& params) {
    const auto& e = entry(id);
    ParamSet full;
    for (const auto& [k, v] : params) {
        const bool known = std::any_of(e.schema.begin(), e.schema.end(), [&](const auto& p) { return p.name == k; });
        if (!known) throw InvalidParameters(id + ": unknown parameter '" + k + "'");
        full[k] = v;
    }
    for (const auto& p : e.schema) {
        auto it = full.find(p.name);
        if (it == full.end()) {
            if (!p.default_value) throw InvalidParameters(id + ": missing parameter '" + p.name + "'");
            full[p.name] = *p.default_value;
            it = full.find(p.name);
        }
        const double v = it->second;
        const bool lo_ok = p.lo_strict ? v > p.lo : v >= p.lo;
        const bool hi_ok = p.hi_strict ? v < p.hi : v <= p.hi;
        if (!std::isfinite(v) || !lo_ok || !hi_ok)
            throw InvalidParameters(id + ": " + p.name + " = " + fmt(v) + " outside " + (p.lo_strict ? "(" : "[") +
                                    fmt(p.lo) + ", " + fmt(p.hi) + (p.hi_strict ? ")" : "]"));
        if (p.integer && v != std::floor(v)) throw InvalidParameters(id + ": " + p.name + " must be an integer");
    }
    PotentialSpec s = e.build(full);
    s.schema = e.schema;
    s.params = full;
    return s;
}

// ------------------------------------------------------------ closed forms

double closed_form_energy(const PotentialSpec& spec, int n) {
    if (!spec.has_closed_form()) throw std::logic_error(spec.id + " has no closed-form spectrum");
    if (n < 0) throw OutOfSpectrum(spec.id + ": n must be non-negative");
    return spec.spectrum(n);
}

void prefactor_from_residues(const PotentialSpec& spec, double E, std::vector<ExponentFactor>& factors,
                             Polynomial& exp_poly) {
    const RiccatiFamily& fam = spec.branches.front();
    const RiccatiProblem prob = fam.problem(E);
    const auto fixed = fam.select_fixed(prob);
    const auto inf = infinity_behavior(prob, fam.infinity_rule);
    const RationalFunction l = detail::phi_linear_term(spec);
    const bool chi = spec.riccati_form == "chi";
    factors.clear();
    for (const auto& c : fixed) {
        if (c.chi_pole_order != 1) throw std::logic_error("closed-form prefactor needs simple fixed poles");
        const cplx e = c.value() - (chi ? 0.5 * residue_at(l, c.pole) : cplx(0.0));
        factors.push_back({c.pole, e.real()});
    }
    if (chi) {
        // poles of the shift that are not fixed poles of chi
        for (const auto& f : l.den_factors()) {
            const bool known = std::any_of(factors.begin(), factors.end(),
                                           [&](const auto& g) { return std::abs(g.location - f.location) < 1e-12; });
            if (!known) factors.push_back({f.location, (-0.5 * residue_at(l, f.location)).real()});
        }
    }
    const int m = inf.m;
    std::vector<cplx> q(m + 2, 0.0);
    for (int k = 0; k <= m; ++k) {
        const int power = m - k;  // u_k multiplies y^power
        q[power + 1] = inf.leading_coeffs[k] / static_cast<double>(power + 1);
    }
    for (auto& c : q) c = cplx(c.real(), std::abs(c.imag()) < 1e-14 ? 0.0 : c.imag());
    exp_poly = Polynomial(q);
}

PolyOde reduce_to_polynomial_ode(const PotentialSpec& spec, double E, const std::vector<ExponentFactor>& factors,
                                 const Polynomial& exp_poly) {
    RationalFunction G(exp_poly.derivative());
    for (const auto& f : factors) G += RationalFunction::pole(f.location, 1, f.exponent);
    const RationalFunction l = detail::phi_linear_term(spec);
    const RationalFunction Rphi = (RationalFunction::constant(E) - spec.V_of_y) * spec.inv_J2;
    const RationalFunction A1 = 2.0 * G + l;
    const RationalFunction A0 = G.derivative() + G * G + l * G + Rphi;
    std::vector<PoleFactor> lcm;
    for (const auto* r : {&A1, &A0})
        for (const auto& f : r->den_factors()) {
            auto it = std::find_if(lcm.begin(), lcm.end(),
                                   [&](const PoleFactor& g) { return std::abs(g.location - f.location) < 1e-12; });
            if (it == lcm.end())
                lcm.push_back(f);
            else
                it->multiplicity = std::max(it->multiplicity, f.multiplicity);
        }
    Polynomial L = Polynomial::constant(1.0);
    for (const auto& f : lcm)
        for (int k = 0; k < f.multiplicity; ++k) L *= Polynomial({-f.location, 1.0});
    auto clear = [&](const RationalFunction& r) {
        const RationalFunction t = r * RationalFunction(L);
        if (!t.den_factors().empty()) throw std::runtime_error("denominator did not clear in ODE reduction");
        return t.num();
    };
    PolyOde ode{L, clear(A1), clear(A0)};
    const double scale = std::max({ode.a2.max_abs_coeff(), ode.a1.max_abs_coeff(), ode.a0.max_abs_coeff()});
    const double rel = 1e-10 * scale;
    auto chop = [&](const Polynomial& p) {
        return scale > 0 && p.max_abs_coeff() > 0 ? p.chopped(rel / p.max_abs_coeff()) : p;
    };
    ode.a2 = chop(ode.a2);
    ode.a1 = chop(ode.a1);
    ode.a0 = chop(ode.a0);
    return ode;
}

PolyOde polynomial_ode(const PotentialSpec& spec, int n, double E) {
    if (spec.printed_ode) return spec.printed_ode(n, E);
    std::vector<ExponentFactor> factors;
    Polynomial Q;
    prefactor_from_residues(spec, E, factors, Q);
    return reduce_to_polynomial_ode(spec, E, factors, Q);
}

Polynomial solve_hypergeometric_ode(const PolyOde& ode, int n) {
    if (n < 0) throw std::invalid_argument("degree must be non-negative");
    if (ode.a2.degree() > 2 || ode.a1.degree() > 1 || ode.a0.degree() > 0)
        throw std::invalid_argument("ODE is not of hypergeometric type (degrees must be at most 2, 1, 0)");
    const cplx A0 = ode.a2[0], A1 = ode.a2[1], A2 = ode.a2[2];
    const cplx B0 = ode.a1[0], B1 = ode.a1[1], C0 = ode.a0[0];
    const double nn = n;
    const cplx top = A2 * nn * (nn - 1.0) + B1 * nn + C0;
    const double top_scale = std::abs(A2) * nn * nn + std::abs(B1) * nn + std::abs(C0) + 1e-300;
    if (std::abs(top) > 1e-8 * top_scale)
        throw std::invalid_argument("no polynomial solution of degree " + std::to_string(n) +
                                    " (top-degree coefficient " + fmt(std::abs(top)) + ")");
    std::vector<cplx> p(n + 1, 0.0);
    p[n] = 1.0;
    for (int k = n - 1; k >= 0; --k) {
        const double kk = k;
        const cplx pivot = A2 * kk * (kk - 1.0) + B1 * kk + C0;
        const double pscale = std::abs(A2) * kk * kk + std::abs(B1) * kk + std::abs(C0) + 1e-300;
        cplx rhs = p[k + 1] * (kk + 1.0) * (A1 * kk + B0);
        if (k + 2 <= n) rhs += p[k + 2] * A0 * (kk + 2.0) * (kk + 1.0);
        if (std::abs(pivot) <= 1e-13 * pscale)
            throw RecursionBreakdown("zero pivot in coefficient recursion at index " + std::to_string(k), k);
        p[k] = -rhs / pivot;
    }
    return Polynomial(p);
}

Polynomial polynomial_ode_solve(const PotentialSpec& spec, int n, double E) {
    return solve_hypergeometric_ode(polynomial_ode(spec, n, E), n);
}

double qes_condition_residual(const PotentialSpec& spec, int n) {
    if (!spec.qes || !spec.qes_condition) throw NotQES(spec.id + " is not quasi-exactly solvable");
    return spec.qes_condition(n);
}

double quantization_residual_min(const PotentialSpec& spec, int n, double E) {
    double best = std::numeric_limits<double>::infinity();
    bool any = false;
    std::string last;
    for (const auto& b : spec.branches) {
        try {
            best = std::min(best, std::abs(quantization_residual(b, n, E)));
            any = true;
        } catch (const NoNormalizableBranch& e) {
            last = e.what();
        }
    }
    if (!any) throw NoNormalizableBranch(spec.id + ": " + last);
    return best;
}

EnergyScan solve_energy(const PotentialSpec& spec, int n) {
    const auto [lo, hi] = spec.energy_window(n);
    return solve_energy(spec.branches.front(), n, lo, hi);
}

ClosedFormState closed_form_state(const PotentialSpec& spec, int n) {
    ClosedFormState s;
    s.n = n;
    s.energy = closed_form_energy(spec, n);
    prefactor_from_residues(spec, s.energy, s.exponent_factors, s.exp_polynomial);
    s.polynomial = polynomial_ode_solve(spec, n, s.energy);
    s.map = spec.variable_map;
    s.potential = spec.V;
    s.domain = spec.domain;
    return s;
}

double reconstructed_potential(const PotentialSpec& spec, double x, double E) {
    const cplx y = spec.variable_map.y(x);
    const RiccatiProblem prob = spec.riccati(E);
    const RationalFunction l = detail::phi_linear_term(spec);
    const cplx J2 = 1.0 / spec.inv_J2(y);
    cplx R = prob.rational_term(y);
    if (spec.riccati_form == "chi") R += 0.25 * l(y) * l(y) + 0.5 * l.derivative()(y);
    return (E - J2 * R).real();
}

// ------------------------------------------------------------ export

std::string params_hash(const ParamSet& params) {
    std::uint64_t h = 1469598103934665603ULL;
    for (const auto& [k, v] : params) {
        const std::string item = k + "=" + fmt(v) + ";";
        for (unsigned char c : item) {
            h ^= c;
            h *= 1099511628211ULL;
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

nlohmann::json bound(double v) {
    if (std::isfinite(v)) return v;
    return v > 0 ? "inf" : "-inf";
}

}  // namespace

nlohmann::json catalog_json(const PotentialSpec& spec) {
    nlohmann::json j;
    j["schema"] = 1;
    j["id"] = spec.id;
    j["title"] = spec.title;
    j["params"] = spec.params;
    j["params_hash"] = params_hash(spec.params);
    auto& sch = j["parameter_schema"] = nlohmann::json::array();
    for (const auto& p : spec.schema) {
        nlohmann::json e{{"name", p.name},           {"lo", bound(p.lo)},         {"hi", bound(p.hi)},
                         {"lo_strict", p.lo_strict}, {"hi_strict", p.hi_strict}, {"integer", p.integer},
                         {"meaning", p.meaning}};
        if (p.default_value) e["default"] = *p.default_value;
        sch.push_back(e);
    }
    j["domain"] = {bound(spec.domain.lo), bound(spec.domain.hi)};
    j["potential"] = spec.potential_formula;
    j["variable"] = spec.variable_formula;
    j["riccati_form"] = spec.riccati_form;
    auto& rules = j["residue_rules"] = nlohmann::json::array();
    for (const auto& [pole, rule] : spec.residue_rules) rules.push_back({{"pole", pole}, {"rule", rule}});
    j["moving_multiplier"] = spec.branches.front().moving_multiplier;
    j["printed_quantization"] = spec.printed_quantization.text;
    j["closed_form"] = spec.has_closed_form();
    j["qes"] = spec.qes;
    if (spec.qes) j["qes_condition"] = spec.qes_condition_text;
    return j;
}

}  // namespace qhj
