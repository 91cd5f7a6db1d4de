#include "catalog_registry.hpp"

#include <cmath>
#include <limits>

namespace qhj::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kNaN = std::numeric_limits<double>::quiet_NaN();
const cplx kI{0.0, 1.0};

ParamInfo positive(std::string name, std::string meaning, double def) {
    ParamInfo p;
    p.name = std::move(name);
    p.lo = 0.0;
    p.lo_strict = true;
    p.meaning = std::move(meaning);
    p.default_value = def;
    return p;
}

ParamInfo real_param(std::string name, std::string meaning, double def) {
    ParamInfo p;
    p.name = std::move(name);
    p.meaning = std::move(meaning);
    p.default_value = def;
    return p;
}

ParamInfo above(std::string name, double lo, std::string meaning, double def) {
    ParamInfo p = positive(std::move(name), std::move(meaning), def);
    p.lo = lo;
    return p;
}

RationalFunction rpoly(std::vector<double> c) { return RationalFunction(Polynomial::from_real(c)); }

RationalFunction over(Polynomial num, std::vector<PoleFactor> den) { return RationalFunction(std::move(num), std::move(den)); }

// ------------------------------------------------------------ pole rules

struct PoleRule {
    cplx pole;
    bool irregular = false;
    std::function<void(ResidueChoice&)> apply;
    std::string label;
    std::string text;
};

PoleRule nearest(cplx pole, cplx target, SelectionReason why, std::string label) {
    return {pole, false, [target, why](ResidueChoice& c) { c.select_nearest(target, why); }, std::move(label),
            to_string(why)};
}

PoleRule larger_real(cplx pole, SelectionReason why, std::string label) {
    return {pole, false, [why](ResidueChoice& c) { c.select_larger_real(why); }, std::move(label), to_string(why)};
}

PoleRule fixed_index(cplx pole, int idx, bool irregular, std::string label) {
    return {pole, irregular, [idx](ResidueChoice& c) { c.select(idx, SelectionReason::ManualOverride); },
            std::move(label), to_string(SelectionReason::ManualOverride)};
}

PoleRule decaying(cplx pole, double theta, std::string label) {
    return {pole, true, [theta](ResidueChoice& c) { select_by_decay(c, theta); }, std::move(label),
            to_string(SelectionReason::SquareIntegrability)};
}

std::function<std::vector<ResidueChoice>(const RiccatiProblem&)> selector(std::vector<PoleRule> rules) {
    return [rules = std::move(rules)](const RiccatiProblem& prob) {
        std::vector<ResidueChoice> out;
        out.reserve(rules.size());
        for (const auto& r : rules) {
            ResidueChoice c = r.irregular ? irregular_pole_residues(prob, r.pole) : fixed_pole_residues(prob, r.pole);
            r.apply(c);
            out.push_back(std::move(c));
        }
        return out;
    };
}

void document(PotentialSpec& s, const std::vector<PoleRule>& rules, const DecayRule& inf) {
    s.residue_rules.clear();
    for (const auto& r : rules) s.residue_rules.emplace_back(r.label, r.text);
    s.residue_rules.emplace_back("infinity", inf.forced_sign != 0 ? to_string(inf.reason)
                                                                  : to_string(SelectionReason::SquareIntegrability));
}

RiccatiFamily make_family(const PotentialSpec& s, const std::vector<cplx>& poles, int m, std::vector<PoleRule> rules,
                          DecayRule inf, int multiplier) {
    RiccatiFamily f;
    f.problem = riccati_builder(s, poles, m);
    f.select_fixed = selector(std::move(rules));
    f.infinity_rule = std::move(inf);
    f.moving_multiplier = multiplier;
    return f;
}

/// Residue of chi at a pole in the E -> 0 limit where psi = exp(-int W dx):
/// residue of -W dx/dy plus half the residue of l_phi (chi form).
cplx superpotential_target(const RationalFunction& minus_W_dxdy, const RationalFunction& l_phi, cplx pole) {
    return residue_at(minus_W_dxdy, pole) + 0.5 * residue_at(l_phi, pole);
}

VariableMap identity_map() {
    VariableMap m;
    m.formula = "y = x";
    m.y = [](cplx x) { return x; };
    m.dy = [](cplx) { return cplx(1.0); };
    m.d2y = [](cplx) { return cplx(0.0); };
    m.x_of_y = [](double y) { return y; };
    return m;
}

VariableMap cosh_map(double a, std::string formula) {
    VariableMap m;
    m.formula = std::move(formula);
    m.y = [a](cplx x) { return std::cosh(a * x); };
    m.dy = [a](cplx x) { return a * std::sinh(a * x); };
    m.d2y = [a](cplx x) { return a * a * std::cosh(a * x); };
    m.x_of_y = [a](double y) { return y >= 1.0 ? std::acosh(y) / a : kNaN; };
    return m;
}

VariableMap exp_map(double a, std::string formula) {
    VariableMap m;
    m.formula = std::move(formula);
    m.y = [a](cplx x) { return std::exp(a * x); };
    m.dy = [a](cplx x) { return a * std::exp(a * x); };
    m.d2y = [a](cplx x) { return a * a * std::exp(a * x); };
    m.x_of_y = [a](double y) { return y > 0.0 ? std::log(y) / a : kNaN; };
    return m;
}

double kappa(double s) { return 4.0 * (s - 0.25) * (s - 0.75); }

std::pair<double, double> window_from(const PotentialSpec& s, double hi) {
    return {sampled_minimum(s.V, s.domain) - 1.0, hi};
}

// ------------------------------------------------------------ ES entries

PotentialSpec build_harmonic(const ParamSet& p) {
    const double w = p.at("omega");
    PotentialSpec s;
    s.id = "harmonic";
    s.title = "Harmonic oscillator";
    s.domain = {-kInf, kInf};
    s.potential_formula = "V(x) = omega^2 x^2 / 4";
    s.variable_map = identity_map();
    s.variable_formula = s.variable_map.formula;
    s.riccati_form = "chi";
    s.V = [w](double x) { return 0.25 * w * w * x * x; };
    s.inv_J2 = rpoly({1.0});
    s.K = Polynomial();
    s.V_of_y = rpoly({0.0, 0.0, 0.25 * w * w});
    DecayRule inf{{0.0, M_PI}, 0, SelectionReason::SquareIntegrability};
    s.branches = {make_family(s, {}, 1, {}, inf, 1)};
    document(s, {}, inf);
    s.printed_quantization = {"n + 1/2 - E/omega = 0", 1.0};
    s.spectrum = [w](int n) { return (n + 0.5) * w; };
    s.bound_state_count = [] { return -1; };
    s.energy_window = [w](int n) { return std::make_pair(-1.0, w * (n + 1.5) + 1.0); };
    s.printed_ode = [w](int n, double) {
        return PolyOde{Polynomial::from_real({1.0}), Polynomial::from_real({0.0, -w}),
                       Polynomial::from_real({n * w})};
    };
    return s;
}

PotentialSpec build_morse(const ParamSet& p) {
    const double A = p.at("A"), B = p.at("B"), a = p.at("alpha");
    const double sp = A / a;
    PotentialSpec s;
    s.id = "morse";
    s.title = "Morse oscillator";
    s.domain = {-kInf, kInf};
    s.potential_formula = "V(x) = A^2 + B^2 exp(-2 alpha x) - 2B(A + alpha/2) exp(-alpha x)";
    const double k = 2.0 * B / a;
    VariableMap m;
    m.formula = "y = (2B/alpha) exp(-alpha x)";
    m.y = [k, a](cplx x) { return k * std::exp(-a * x); };
    m.dy = [k, a](cplx x) { return -a * k * std::exp(-a * x); };
    m.d2y = [k, a](cplx x) { return a * a * k * std::exp(-a * x); };
    m.x_of_y = [k, a](double y) { return y > 0.0 ? -std::log(y / k) / a : kNaN; };
    s.variable_map = m;
    s.variable_formula = m.formula;
    s.riccati_form = "chi";
    s.V = [A, B, a](double x) {
        const double e = std::exp(-a * x);
        return A * A + B * B * e * e - 2.0 * B * (A + 0.5 * a) * e;
    };
    s.inv_J2 = over(Polynomial::constant(1.0 / (a * a)), {{0.0, 2}});
    s.K = Polynomial::from_real({0.0, a * a});
    s.V_of_y = rpoly({A * A, -a * (A + 0.5 * a), 0.25 * a * a});
    const RationalFunction mW = over(Polynomial::from_real({A / a, -0.5}), {{0.0, 1}});
    const std::vector<PoleRule> rules = {nearest(0.0, superpotential_target(mW, phi_linear_term(s), 0.0),
                                                 SelectionReason::SuperpotentialLimit, "y=0")};
    DecayRule inf{{0.0}, 0, SelectionReason::SquareIntegrability};
    s.branches = {make_family(s, {0.0}, 0, rules, inf, 1)};
    document(s, rules, inf);
    s.printed_quantization = {"-b1 - n = -d1", -1.0};
    s.spectrum = [A, a, sp](int n) {
        if (!(n < sp)) throw OutOfSpectrum("morse: n must satisfy n < A/alpha");
        return A * A - (A - n * a) * (A - n * a);
    };
    s.bound_state_count = [sp] { return static_cast<int>(std::ceil(sp - 1e-12)); };
    s.energy_window = [s_ = s, A](int) { return window_from(s_, A * A); };
    s.printed_ode = [sp](int n, double) {
        return PolyOde{Polynomial::from_real({0.0, 1.0}), Polynomial::from_real({1.0 + 2.0 * (sp - n), -1.0}),
                       Polynomial::from_real({static_cast<double>(n)})};
    };
    return s;
}

PotentialSpec build_poschl_teller(const ParamSet& p) {
    const double A = p.at("A"), B = p.at("B"), a = p.at("alpha");
    if (!(A < B)) throw InvalidParameters("poschl_teller requires A < B");
    const double sp = A / a, lam = B / a;
    PotentialSpec s;
    s.id = "poschl_teller";
    s.title = "Poschl-Teller potential";
    s.domain = {0.0, kInf};
    s.potential_formula = "V(x) = A^2 + (B^2 + A^2 + A alpha) csch^2(alpha x) - B(2A + alpha) coth(alpha x) csch(alpha x)";
    s.variable_map = cosh_map(a, "y = cosh(alpha x)");
    s.variable_formula = s.variable_map.formula;
    s.riccati_form = "chi";
    s.V = [A, B, a](double x) {
        const double sh = std::sinh(a * x), ch = std::cosh(a * x);
        return A * A + (B * B + A * A + A * a) / (sh * sh) - B * (2.0 * A + a) * ch / (sh * sh);
    };
    const std::vector<PoleFactor> pm = {{1.0, 1}, {-1.0, 1}};
    s.inv_J2 = over(Polynomial::constant(1.0 / (a * a)), pm);
    s.K = Polynomial::from_real({0.0, a * a});
    s.V_of_y = rpoly({A * A}) + over(Polynomial::from_real({B * B + A * A + A * a, -B * (2.0 * A + a)}), pm);
    const RationalFunction mW = over(Polynomial::from_real({B / a, -A / a}), pm);
    const RationalFunction l = phi_linear_term(s);
    const std::vector<PoleRule> rules = {
        nearest(1.0, superpotential_target(mW, l, 1.0), SelectionReason::SuperpotentialLimit, "y=1"),
        nearest(-1.0, superpotential_target(mW, l, -1.0), SelectionReason::SuperpotentialLimit, "y=-1")};
    DecayRule inf{{0.0}, 0, SelectionReason::SquareIntegrability};
    s.branches = {make_family(s, {1.0, -1.0}, 0, rules, inf, 1)};
    document(s, rules, inf);
    s.printed_quantization = {"b1 + b1' + n = d1", 1.0};
    s.spectrum = [A, a, sp](int n) {
        if (!(n < sp)) throw OutOfSpectrum("poschl_teller: n must satisfy n < A/alpha");
        return A * A - (A - n * a) * (A - n * a);
    };
    s.bound_state_count = [sp] { return static_cast<int>(std::ceil(sp - 1e-12)); };
    s.energy_window = [s_ = s, A](int) { return window_from(s_, A * A); };
    s.printed_ode = [sp, lam](int n, double) {
        return PolyOde{Polynomial::from_real({1.0, 0.0, -1.0}), Polynomial::from_real({-2.0 * lam, 2.0 * sp - 1.0}),
                       Polynomial::from_real({n * (n - 2.0 * sp)})};
    };
    return s;
}

PotentialSpec build_eckart(const ParamSet& p) {
    const double A = p.at("A"), B = p.at("B"), a = p.at("alpha");
    if (!(B > A * A)) throw InvalidParameters("eckart requires B > A^2");
    PotentialSpec s;
    s.id = "eckart";
    s.title = "Eckart potential";
    s.domain = {0.0, kInf};
    s.potential_formula = "V(x) = A^2 + B^2/A^2 - 2B coth(alpha x) + A(A - alpha) csch^2(alpha x)";
    VariableMap m;
    m.formula = "y = coth(alpha x)";
    m.y = [a](cplx x) { return std::cosh(a * x) / std::sinh(a * x); };
    m.dy = [a](cplx x) {
        const cplx sh = std::sinh(a * x);
        return -a / (sh * sh);
    };
    m.d2y = [a](cplx x) {
        const cplx sh = std::sinh(a * x);
        return 2.0 * a * a * std::cosh(a * x) / (sh * sh * sh);
    };
    m.x_of_y = [a](double y) { return y > 1.0 ? std::atanh(1.0 / y) / a : kNaN; };
    s.variable_map = m;
    s.variable_formula = m.formula;
    s.riccati_form = "chi";
    s.V = [A, B, a](double x) {
        const double sh = std::sinh(a * x);
        return A * A + B * B / (A * A) - 2.0 * B / std::tanh(a * x) + A * (A - a) / (sh * sh);
    };
    s.inv_J2 = over(Polynomial::constant(1.0 / (a * a)), {{1.0, 2}, {-1.0, 2}});
    s.K = Polynomial::from_real({0.0, -2.0 * a * a, 0.0, 2.0 * a * a});
    s.V_of_y = rpoly({A * A + B * B / (A * A) - A * (A - a), -2.0 * B, A * (A - a)});
    // -W dx/dy with W = -A coth(alpha x) + B/A and dy/dx = alpha (1 - y^2)
    const RationalFunction mW = over(Polynomial::from_real({B / (A * a), -A / a}), {{1.0, 1}, {-1.0, 1}});
    const RationalFunction l = phi_linear_term(s);
    const std::vector<PoleRule> rules = {
        nearest(1.0, superpotential_target(mW, l, 1.0), SelectionReason::SuperpotentialLimit, "y=1"),
        nearest(-1.0, superpotential_target(mW, l, -1.0), SelectionReason::SuperpotentialLimit, "y=-1")};
    DecayRule inf{{0.0}, 0, SelectionReason::SquareIntegrability};
    s.branches = {make_family(s, {1.0, -1.0}, 0, rules, inf, 1)};
    document(s, rules, inf);
    s.printed_quantization = {"b1 + b1' + n = d1", 1.0};
    s.spectrum = [A, B, a](int n) {
        const double An = A + n * a;
        if (!(An * An < B)) throw OutOfSpectrum("eckart: n must satisfy (A + n alpha)^2 < B");
        return A * A - An * An - B * B / (An * An) + B * B / (A * A);
    };
    s.bound_state_count = [A, B, a] {
        int n = 0;
        while ((A + n * a) * (A + n * a) < B) ++n;
        return n;
    };
    const double top = (A - B / A) * (A - B / A);
    s.energy_window = [s_ = s, top](int) { return window_from(s_, top); };
    return s;
}

PotentialSpec build_hydrogen(const ParamSet& p) {
    const double Z = p.at("Ze2"), l = p.at("l");
    PotentialSpec s;
    s.id = "hydrogen_radial";
    s.title = "Hydrogen atom, radial equation";
    s.domain = {0.0, kInf};
    s.potential_formula = "V(r) = -Ze2/r + l(l+1)/r^2";
    s.variable_map = identity_map();
    s.variable_map.formula = "y = r";
    s.variable_formula = s.variable_map.formula;
    s.riccati_form = "chi";
    s.V = [Z, l](double r) { return -Z / r + l * (l + 1.0) / (r * r); };
    s.inv_J2 = rpoly({1.0});
    s.K = Polynomial();
    s.V_of_y = over(Polynomial::from_real({l * (l + 1.0), -Z}), {{0.0, 2}});
    const std::vector<PoleRule> rules = {larger_real(0.0, SelectionReason::FinitenessAtOrigin, "r=0")};
    DecayRule inf{{0.0}, 0, SelectionReason::SquareIntegrability};
    s.branches = {make_family(s, {0.0}, 0, rules, inf, 1)};
    document(s, rules, inf);
    s.printed_quantization = {"b1 + n = Ze2 / (2 sqrt(-E))", 1.0};
    s.spectrum = [Z, l](int n) {
        const double np = n + l + 1.0;
        return -Z * Z / (4.0 * np * np);
    };
    s.bound_state_count = [] { return -1; };
    s.energy_window = [Z](int) { return std::make_pair(-0.25 * Z * Z - 1.0, -1e-12); };
    s.printed_ode = [Z, l](int n, double) {
        const double np = n + l + 1.0;
        return PolyOde{Polynomial::from_real({0.0, 1.0}), Polynomial::from_real({2.0 * (l + 1.0), -Z / np}),
                       Polynomial::from_real({n * Z / np})};
    };
    return s;
}

// ------------------------------------------------------------ QES entries

std::function<std::pair<double, double>(int)> generic_window(const PotentialSpec& s) {
    return [s_ = s](int n) {
        const double lo = sampled_minimum(s_.V, s_.domain) - 1.0;
        return std::make_pair(lo, lo + 50.0 * (n + 1));
    };
}


PotentialSpec polynomial_potential(std::string id, std::string title, std::vector<double> coeffs) {
    PotentialSpec s;
    s.id = std::move(id);
    s.title = std::move(title);
    s.domain = {-kInf, kInf};
    s.variable_map = identity_map();
    s.variable_formula = s.variable_map.formula;
    s.riccati_form = "chi";
    s.V = [c = coeffs](double x) { return Polynomial::from_real(c).eval_real(x); };
    s.inv_J2 = rpoly({1.0});
    s.K = Polynomial();
    s.V_of_y = rpoly(coeffs);
    return s;
}

PotentialSpec build_sextic(const ParamSet& p) {
    const double al = p.at("alpha"), be = p.at("beta"), ga = p.at("gamma");
    PotentialSpec s = polynomial_potential("sextic", "Sextic oscillator", {0.0, 0.0, al, 0.0, be, 0.0, ga});
    s.potential_formula = "V(x) = alpha x^2 + beta x^4 + gamma x^6";
    DecayRule inf{{0.0, M_PI}, 0, SelectionReason::SquareIntegrability};
    s.branches = {make_family(s, {}, 3, {}, inf, 1)};
    document(s, {}, inf);
    s.printed_quantization = {"a1 = -i n", kI};
    s.qes = true;
    s.qes_condition_text = "(1/sqrt(gamma)) (beta^2/(4 gamma) - alpha) = 3 + 2n";
    s.qes_condition = [al, be, ga](int n) {
        return std::abs((be * be / (4.0 * ga) - al) / std::sqrt(ga) - (3.0 + 2.0 * n));
    };
    s.energy_window = generic_window(s);
    return s;
}

PotentialSpec build_sextic_barrier(const ParamSet& p) {
    const double sb = p.at("s"), a = p.at("a"), b = p.at("b"), mu = p.at("mu");
    const double k = kappa(sb);
    PotentialSpec s;
    s.id = "sextic_barrier";
    s.title = "Sextic oscillator with a centrifugal barrier";
    s.domain = {0.0, kInf};
    s.potential_formula = "V(x) = 4(s-1/4)(s-3/4)/x^2 + [b^2 - 4a(s + 1/2 + mu)] x^2 + 2ab x^4 + a^2 x^6";
    s.variable_map = identity_map();
    s.variable_formula = s.variable_map.formula;
    s.riccati_form = "chi";
    const double c2 = b * b - 4.0 * a * (sb + 0.5 + mu);
    s.V = [k, c2, a, b](double x) {
        const double x2 = x * x;
        return k / x2 + c2 * x2 + 2.0 * a * b * x2 * x2 + a * a * x2 * x2 * x2;
    };
    s.inv_J2 = rpoly({1.0});
    s.K = Polynomial();
    s.V_of_y = over(Polynomial::from_real({k, 0.0, 0.0, 0.0, c2, 0.0, 2.0 * a * b, 0.0, a * a}), {{0.0, 2}});
    const std::vector<PoleRule> rules = {larger_real(0.0, SelectionReason::FinitenessAtOrigin, "x=0")};
    DecayRule inf{{0.0}, 0, SelectionReason::SquareIntegrability};
    s.branches = {make_family(s, {0.0}, 3, rules, inf, 2)};
    document(s, rules, inf);
    s.printed_quantization = {"b1 + 2n = c1", 1.0};
    s.qes = true;
    s.qes_condition_text = "mu = n";
    s.qes_condition = [mu](int n) { return std::abs(mu - n); };
    s.energy_window = generic_window(s);
    return s;
}

PotentialSpec build_circular(const ParamSet& p) {
    const double s1 = p.at("s1"), s2 = p.at("s2"), q = p.at("q1"), mu = p.at("mu");
    const double A = kappa(s1), B = kappa(s2), C = q * q + 4.0 * q * (s1 + s2 + mu), D = q * q;
    PotentialSpec s;
    s.id = "circular";
    s.title = "Circular (trigonometric) QES potential";
    s.domain = {0.0, M_PI / 2.0};
    s.potential_formula = "V(x) = A/sin^2 x + B/cos^2 x + C sin^2 x - D sin^4 x";
    VariableMap m;
    m.formula = "y = sin^2 x";
    m.y = [](cplx x) { return std::sin(x) * std::sin(x); };
    m.dy = [](cplx x) { return std::sin(2.0 * x); };
    m.d2y = [](cplx x) { return 2.0 * std::cos(2.0 * x); };
    m.x_of_y = [](double y) { return (y >= 0.0 && y <= 1.0) ? std::asin(std::sqrt(y)) : kNaN; };
    s.variable_map = m;
    s.variable_formula = m.formula;
    s.riccati_form = "phi";
    s.V = [A, B, C, D](double x) {
        const double sn = std::sin(x), cs = std::cos(x);
        const double s2_ = sn * sn;
        return A / s2_ + B / (cs * cs) + C * s2_ - D * s2_ * s2_;
    };
    s.inv_J2 = over(Polynomial::constant(-0.25), {{0.0, 1}, {1.0, 1}});
    s.K = Polynomial::from_real({2.0, -4.0});
    s.V_of_y = over(Polynomial::from_real({A}), {{0.0, 1}}) + over(Polynomial::from_real({-B}), {{1.0, 1}}) +
               rpoly({0.0, C, -D});
    const std::vector<PoleRule> rules = {
        nearest(0.0, 0.5 * (0.5 + (2.0 * s1 - 1.0)), SelectionReason::SquareIntegrability, "y=0"),
        nearest(1.0, 0.5 * (0.5 + (2.0 * s2 - 1.0)), SelectionReason::SquareIntegrability, "y=1")};
    DecayRule inf{{}, -1, SelectionReason::ManualOverride};
    s.branches = {make_family(s, {0.0, 1.0}, 0, rules, inf, 1)};
    document(s, rules, inf);
    s.printed_quantization = {"b1 + b1' + n = c1", 1.0};
    s.qes = true;
    s.qes_condition_text = "mu = n";
    s.qes_condition = [mu](int n) { return std::abs(mu - n); };
    s.energy_window = generic_window(s);
    return s;
}

PotentialSpec build_hyperbolic(const ParamSet& p) {
    const double s1 = p.at("s1"), s2 = p.at("s2"), q = p.at("q1"), mu = p.at("mu");
    const double A = kappa(s1), B = kappa(s2), C = q * q + 4.0 * q * (s1 + s2 + mu), D = q * q;
    PotentialSpec s;
    s.id = "hyperbolic_qes";
    s.title = "Hyperbolic QES potential";
    s.domain = {0.0, kInf};
    s.potential_formula = "V(x) = -A/cosh^2 x + B/sinh^2 x - C cosh^2 x + D cosh^4 x";
    s.variable_map = cosh_map(1.0, "y = cosh x");
    s.variable_formula = s.variable_map.formula;
    s.riccati_form = "phi";
    s.V = [A, B, C, D](double x) {
        const double ch = std::cosh(x), sh = std::sinh(x);
        const double c2 = ch * ch;
        return -A / c2 + B / (sh * sh) - C * c2 + D * c2 * c2;
    };
    s.inv_J2 = over(Polynomial::constant(1.0), {{1.0, 1}, {-1.0, 1}});
    s.K = Polynomial::from_real({0.0, 1.0});
    s.V_of_y = over(Polynomial::from_real({-A}), {{0.0, 2}}) +
               over(Polynomial::from_real({B}), {{1.0, 1}, {-1.0, 1}}) + rpoly({0.0, 0.0, -C, 0.0, D});
    const std::vector<PoleRule> rules = {
        nearest(0.0, 0.5 + (2.0 * s1 - 1.0), SelectionReason::ManualOverride, "y=0"),
        larger_real(1.0, SelectionReason::FinitenessAtOrigin, "y=1"),
        larger_real(-1.0, SelectionReason::FinitenessAtOrigin, "y=-1")};
    DecayRule inf{{0.0}, 0, SelectionReason::SquareIntegrability};
    s.branches = {make_family(s, {0.0, 1.0, -1.0}, 1, rules, inf, 2)};
    document(s, rules, inf);
    s.printed_quantization = {"d1 = 2n + b1 + b1' + b1''", -1.0};
    s.qes = true;
    s.qes_condition_text = "mu = n";
    s.qes_condition = [mu](int n) { return std::abs(mu - n); };
    s.energy_window = generic_window(s);
    return s;
}

PotentialSpec build_sinh_family(const ParamSet& p) {
    const double A = p.at("A"), B = p.at("B"), C = p.at("C"), D = p.at("D"), nu = p.at("nu");
    const double r = std::sqrt(nu);
    PotentialSpec s;
    s.id = "sinh_family";
    s.title = "sinh-type QES family";
    s.domain = {-kInf, kInf};
    s.potential_formula =
        "V(x) = A sinh^2(sqrt(nu) x) + B sinh(sqrt(nu) x) + C tanh(sqrt(nu) x) sech(sqrt(nu) x) + D sech^2(sqrt(nu) x)";
    VariableMap m;
    m.formula = "y = sinh(sqrt(nu) x)";
    m.y = [r](cplx x) { return std::sinh(r * x); };
    m.dy = [r](cplx x) { return r * std::cosh(r * x); };
    m.d2y = [r](cplx x) { return r * r * std::sinh(r * x); };
    m.x_of_y = [r](double y) { return std::asinh(y) / r; };
    s.variable_map = m;
    s.variable_formula = m.formula;
    s.riccati_form = "chi";
    s.V = [A, B, C, D, r](double x) {
        const double sh = std::sinh(r * x), ch = std::cosh(r * x);
        return A * sh * sh + B * sh + C * sh / (ch * ch) + D / (ch * ch);
    };
    const std::vector<PoleFactor> pm = {{kI, 1}, {-kI, 1}};
    s.inv_J2 = over(Polynomial::constant(1.0 / nu), pm);
    s.K = Polynomial::from_real({0.0, nu});
    s.V_of_y = rpoly({0.0, B, A}) + over(Polynomial::from_real({D, C}), pm);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int sg : {-1, 1}) {
                const std::vector<PoleRule> rules = {fixed_index(kI, i, false, "y=i"),
                                                     fixed_index(-kI, j, false, "y=-i")};
                DecayRule inf{{}, sg, SelectionReason::ManualOverride};
                s.branches.push_back(make_family(s, {kI, -kI}, 0, rules, inf, 1));
                if (s.branches.size() == 1) document(s, rules, inf);
            }
    s.printed_quantization = {"b1 + b1' + n = d1", 1.0};
    s.qes = true;
    s.qes_condition_text = "[B +/- 2(n+1) sqrt(nu A)]^4 + A(4D - nu)[B +/- 2(n+1) sqrt(nu A)]^2 - 4 A^2 C^2 = 0";
    s.qes_condition = [A, B, C, D, nu](int n) {
        double best = kInf;
        for (int sg : {-1, 1}) {
            const double Y = B + sg * 2.0 * (n + 1) * std::sqrt(nu * A);
            best = std::min(best, std::abs(std::pow(Y, 4) + A * (4.0 * D - nu) * Y * Y - 4.0 * A * A * C * C));
        }
        return best;
    };
    s.energy_window = generic_window(s);
    return s;
}

PotentialSpec build_cosh_family(const ParamSet& p) {
    const double A = p.at("A"), B = p.at("B"), C = p.at("C"), D = p.at("D"), nu = p.at("nu");
    const double r = std::sqrt(nu);
    PotentialSpec s;
    s.id = "cosh_family";
    s.title = "cosh-type QES family";
    s.domain = {0.0, kInf};
    s.potential_formula =
        "V(x) = A cosh^2(sqrt(nu) x) + B cosh(sqrt(nu) x) + C coth(sqrt(nu) x) csch(sqrt(nu) x) + D csch^2(sqrt(nu) x)";
    s.variable_map = exp_map(r, "y = exp(sqrt(nu) x)");
    s.variable_formula = s.variable_map.formula;
    s.riccati_form = "chi";
    s.V = [A, B, C, D, r](double x) {
        const double sh = std::sinh(r * x), ch = std::cosh(r * x);
        return A * ch * ch + B * ch + C * ch / (sh * sh) + D / (sh * sh);
    };
    s.inv_J2 = over(Polynomial::constant(1.0 / nu), {{0.0, 2}});
    s.K = Polynomial::from_real({0.0, nu});
    // cosh = (y^2+1)/(2y), csch = 2y/(y^2-1), coth = (y^2+1)/(y^2-1)
    const std::vector<PoleFactor> pm2 = {{1.0, 2}, {-1.0, 2}};
    s.V_of_y = over(Polynomial::from_real({0.25 * A, 0.0, 0.5 * A, 0.0, 0.25 * A}), {{0.0, 2}}) +
               over(Polynomial::from_real({0.5 * B, 0.0, 0.5 * B}), {{0.0, 1}}) +
               over(Polynomial::from_real({0.0, 2.0 * C, 4.0 * D, 2.0 * C}), pm2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                const std::vector<PoleRule> rules = {fixed_index(0.0, i, true, "y=0"),
                                                     fixed_index(1.0, j, false, "y=1"),
                                                     fixed_index(-1.0, k, false, "y=-1")};
                // d0 = -b2: the sign at infinity mirrors the sign chosen at y = 0
                DecayRule inf{{}, i == 0 ? -1 : 1, SelectionReason::ManualOverride};
                s.branches.push_back(make_family(s, {0.0, 1.0, -1.0}, 0, rules, inf, 2));
                if (s.branches.size() == 1) document(s, rules, inf);
            }
    s.printed_quantization = {"b1 + b1' + b1'' + 2n = d1", 1.0};
    s.qes = true;
    s.qes_condition_text = "[B +/- 2(n+1) sqrt(nu A)]^4 - A(4D + nu)[B +/- 2(n+1) sqrt(nu A)]^2 + 4 A^2 C^2 = 0";
    s.qes_condition = [A, B, C, D, nu](int n) {
        double best = kInf;
        for (int sg : {-1, 1}) {
            const double Y = B + sg * 2.0 * (n + 1) * std::sqrt(nu * A);
            best = std::min(best, std::abs(std::pow(Y, 4) - A * (4.0 * D + nu) * Y * Y + 4.0 * A * A * C * C));
        }
        return best;
    };
    s.energy_window = generic_window(s);
    return s;
}

PotentialSpec build_exp_family(const ParamSet& p) {
    const double A = p.at("A"), B = p.at("B"), C = p.at("C"), D = p.at("D"), nu = p.at("nu");
    const double r = std::sqrt(nu);
    PotentialSpec s;
    s.id = "exp_family";
    s.title = "Exponential QES family";
    s.domain = {-kInf, kInf};
    s.potential_formula =
        "V(x) = A exp(2 sqrt(nu) x) + B exp(sqrt(nu) x) + C exp(-sqrt(nu) x) + D exp(-2 sqrt(nu) x)";
    s.variable_map = exp_map(r, "y = exp(sqrt(nu) x)");
    s.variable_formula = s.variable_map.formula;
    s.riccati_form = "chi";
    s.V = [A, B, C, D, r](double x) {
        const double e = std::exp(r * x);
        return A * e * e + B * e + C / e + D / (e * e);
    };
    s.inv_J2 = over(Polynomial::constant(1.0 / nu), {{0.0, 2}});
    s.K = Polynomial::from_real({0.0, nu});
    s.V_of_y = over(Polynomial::from_real({D, C, 0.0, B, A}), {{0.0, 2}});
    {
        const std::vector<PoleRule> rules = {decaying(0.0, 0.0, "y=0")};
        DecayRule inf{{0.0}, 0, SelectionReason::SquareIntegrability};
        s.branches.push_back(make_family(s, {0.0}, 0, rules, inf, 1));
        document(s, rules, inf);
    }
    for (int i = 0; i < 2; ++i)
        for (int sg : {-1, 1}) {
            const std::vector<PoleRule> rules = {fixed_index(0.0, i, true, "y=0")};
            DecayRule inf{{}, sg, SelectionReason::ManualOverride};
            s.branches.push_back(make_family(s, {0.0}, 0, rules, inf, 1));
        }
    s.printed_quantization = {"b1 + n = d1", 1.0};
    s.qes = true;
    s.qes_condition_text = "2(n+1) sqrt(nu A D) = +/- B sqrt(D) +/- C sqrt(A)";
    s.qes_condition = [A, B, C, D, nu](int n) {
        const double lhs = 2.0 * (n + 1) * std::sqrt(nu * A * D);
        double best = kInf;
        for (int s1 : {-1, 1})
            for (int s2 : {-1, 1})
                best = std::min(best, std::abs(lhs - (s1 * B * std::sqrt(D) + s2 * C * std::sqrt(A))));
        return best;
    };
    s.energy_window = generic_window(s);
    return s;
}

PotentialSpec build_quartic(const ParamSet& p) {
    const double al = p.at("alpha"), be = p.at("beta"), ga = p.at("gamma"), de = p.at("delta");
    PotentialSpec s = polynomial_potential("quartic_probe", "Quartic anharmonic oscillator", {0.0, al, be, ga, de});
    s.potential_formula = "V(x) = alpha x + beta x^2 + gamma x^3 + delta x^4";
    DecayRule inf{{0.0, M_PI}, 0, SelectionReason::SquareIntegrability};
    s.branches = {make_family(s, {}, 2, {}, inf, 1)};
    document(s, {}, inf);
    s.printed_quantization = {"no normalizable branch for real parameters", 1.0};
    s.qes = false;
    s.energy_window = generic_window(s);
    return s;
}

}  // namespace

const std::vector<CatalogEntry>& catalog_entries() {
    static const std::vector<CatalogEntry> entries = [] {
        std::vector<CatalogEntry> e;
        e.push_back({"harmonic", {positive("omega", "oscillator frequency", 2.0)}, build_harmonic});
        e.push_back({"morse",
                     {positive("A", "superpotential constant", 2.0), positive("B", "exponential amplitude", 1.0),
                      positive("alpha", "inverse range", 1.0)},
                     build_morse});
        e.push_back({"poschl_teller",
                     {positive("A", "coth coefficient of W", 1.0), positive("B", "csch coefficient of W (B > A)", 2.0),
                      positive("alpha", "inverse range", 1.0)},
                     build_poschl_teller});
        e.push_back({"eckart",
                     {positive("A", "coth coefficient of W", 2.0), positive("B", "coupling (B > A^2)", 12.0),
                      positive("alpha", "inverse range", 1.0)},
                     build_eckart});
        {
            ParamInfo l = real_param("l", "angular momentum", 0.0);
            l.lo = 0.0;
            l.integer = true;
            e.push_back({"hydrogen_radial", {positive("Ze2", "Coulomb strength Z e^2", 2.0), l}, build_hydrogen});
        }
        e.push_back({"sextic",
                     {real_param("alpha", "x^2 coefficient", -6.0), real_param("beta", "x^4 coefficient", 2.0),
                      positive("gamma", "x^6 coefficient", 1.0)},
                     build_sextic});
        {
            ParamInfo s = above("s", 0.75, "barrier exponent (s > 3/4)", 1.0);
            e.push_back({"sextic_barrier",
                         {s, positive("a", "sqrt of the x^6 coefficient", 1.0), real_param("b", "x^4 scale", 1.0),
                          real_param("mu", "sector label", 1.0)},
                         build_sextic_barrier});
        }
        e.push_back({"circular",
                     {real_param("s1", "exponent at sin x = 0", 1.0), real_param("s2", "exponent at cos x = 0", 1.0),
                      positive("q1", "sqrt of D", 1.0), real_param("mu", "sector label", 1.0)},
                     build_circular});
        e.push_back({"hyperbolic_qes",
                     {real_param("s1", "exponent at cosh x = 0", 1.0),
                      above("s2", 0.75, "exponent at sinh x = 0 (s2 > 3/4)", 1.0), positive("q1", "sqrt of D", 1.0),
                      real_param("mu", "sector label", 1.0)},
                     build_hyperbolic});
        const std::vector<ParamInfo> five = {positive("A", "leading coefficient", 1.0), real_param("B", "", 1.0),
                                             real_param("C", "", 1.0), real_param("D", "", 1.0),
                                             positive("nu", "scale of the argument", 1.0)};
        e.push_back({"sinh_family", five, build_sinh_family});
        e.push_back({"cosh_family", five, build_cosh_family});
        {
            std::vector<ParamInfo> ex = {positive("A", "exp(2 sqrt(nu) x) coefficient", 1.0),
                                         real_param("B", "exp(sqrt(nu) x) coefficient", -1.0),
                                         real_param("C", "exp(-sqrt(nu) x) coefficient", -1.0),
                                         positive("D", "exp(-2 sqrt(nu) x) coefficient", 1.0),
                                         positive("nu", "scale of the argument", 1.0)};
            e.push_back({"exp_family", ex, build_exp_family});
        }
        e.push_back({"quartic_probe",
                     {real_param("alpha", "x coefficient", 0.0), real_param("beta", "x^2 coefficient", 0.0),
                      real_param("gamma", "x^3 coefficient", 0.0), positive("delta", "x^4 coefficient", 1.0)},
                     build_quartic});
        return e;
    }();
    return entries;
}

}  // namespace qhj::detail
