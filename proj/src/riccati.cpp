#include "qhj/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qhj {

std::string to_string(SelectionReason r) {
    switch (r) {
        case SelectionReason::Unselected: return "unselected";
        case SelectionReason::SquareIntegrability: return "square-integrability";
        case SelectionReason::FinitenessAtOrigin: return "finiteness-at-origin";
        case SelectionReason::SuperpotentialLimit: return "superpotential-limit";
        case SelectionReason::ManualOverride: return "manual-override";
    }
    return "unknown";
}

namespace {

bool listed(const std::vector<cplx>& poles, cplx a) {
    return std::any_of(poles.begin(), poles.end(), [&](cplx p) {
        return std::abs(p - a) <= 1e-10 * std::max(1.0, std::abs(a));
    });
}

}  // namespace

RiccatiProblem make_riccati_problem(std::string variable, RationalFunction R, std::vector<cplx> fixed_poles,
                                    int infinity_pole_order, RationalFunction linear_term) {
    if (infinity_pole_order < 0) throw std::invalid_argument("infinity pole order must be non-negative");
    for (const auto& f : R.den_factors())
        if (f.multiplicity >= 2 && !listed(fixed_poles, f.location))
            throw std::invalid_argument("rational term has an unlisted pole of order " +
                                        std::to_string(f.multiplicity));
    for (const auto& f : linear_term.den_factors())
        if (f.multiplicity > 1) throw std::invalid_argument("linear term must have at most simple poles");
    if (!linear_term.is_zero() && linear_term.degree_at_infinity() > -1)
        throw std::invalid_argument("linear term must vanish at infinity");
    if (!R.is_zero()) {
        const int d = R.degree_at_infinity();
        const int m = infinity_pole_order;
        if ((m >= 1 && d != 2 * m) || (m == 0 && d > 0))
            throw std::invalid_argument("growth of the rational term (degree " + std::to_string(d) +
                                        ") does not balance chi ~ y^" + std::to_string(m));
    }
    RiccatiProblem p;
    p.variable_name = std::move(variable);
    p.rational_term = std::move(R);
    p.linear_term = std::move(linear_term);
    p.fixed_poles = std::move(fixed_poles);
    p.infinity_pole_order = infinity_pole_order;
    return p;
}

// ------------------------------------------------------------ ResidueChoice

cplx ResidueChoice::value() const {
    if (!is_selected()) throw std::logic_error("residue at fixed pole not selected");
    return candidates[selected];
}

ResidueChoice& ResidueChoice::select(int index, SelectionReason why) {
    selected = index;
    reason = why;
    return *this;
}

ResidueChoice& ResidueChoice::select_nearest(cplx target, SelectionReason why) {
    return select(std::abs(candidates[0] - target) <= std::abs(candidates[1] - target) ? 0 : 1, why);
}

ResidueChoice& ResidueChoice::select_larger_real(SelectionReason why) {
    return select(candidates[0].real() >= candidates[1].real() ? 0 : 1, why);
}

ResidueChoice& ResidueChoice::select_smaller_real(SelectionReason why) {
    return select(candidates[0].real() <= candidates[1].real() ? 0 : 1, why);
}

ResidueChoice fixed_pole_residues(const RiccatiProblem& prob, cplx pole) {
    if (!listed(prob.fixed_poles, pole)) throw std::invalid_argument("not a listed fixed pole");
    const int v = prob.rational_term.pole_order(pole);
    if (v >= 3)
        throw UnsupportedPoleOrder("rational term has a pole of order " + std::to_string(v) +
                                   " here; use irregular_pole_residues");
    ResidueChoice c;
    c.pole = pole;
    c.r2 = v == 2 ? laurent_at(prob.rational_term, pole, -2, -2).coeff(-2) : cplx(0.0);
    c.l1 = residue_at(prob.linear_term, pole);
    const cplx half_sum = 0.5 * (1.0 - c.l1);
    const cplx root = 0.5 * std::sqrt((1.0 - c.l1) * (1.0 - c.l1) - 4.0 * c.r2);
    c.candidates = {half_sum + root, half_sum - root};
    return c;
}

ResidueChoice irregular_pole_residues(const RiccatiProblem& prob, cplx pole) {
    if (!listed(prob.fixed_poles, pole)) throw std::invalid_argument("not a listed fixed pole");
    const int v = prob.rational_term.pole_order(pole);
    if (v < 4 || v % 2 != 0)
        throw UnsupportedPoleOrder("irregular pole needs an even order >= 4 in the rational term, got " +
                                   std::to_string(v));
    const int M = v / 2;
    const auto Rs = laurent_at(prob.rational_term, pole, -2 * M, -M - 1);
    const cplx l1 = residue_at(prob.linear_term, pole);
    ResidueChoice c;
    c.pole = pole;
    c.chi_pole_order = M;
    c.l1 = l1;
    const cplx lead = std::sqrt(-Rs.coeff(-2 * M));
    for (int idx = 0; idx < 2; ++idx) {
        std::vector<cplx> w(M, 0.0);
        w[0] = idx == 0 ? lead : -lead;
        for (int k = 1; k <= M - 1; ++k) {
            cplx acc = Rs.coeff(k - 2 * M);
            for (int i = 1; i <= k - 1; ++i) acc += w[i] * w[k - i];
            if (k == M - 1) acc += (-static_cast<double>(M) + l1) * w[0];
            w[k] = -acc / (2.0 * w[0]);
        }
        c.candidates[idx] = w[M - 1];
        c.principal_parts[idx] = std::move(w);
    }
    return c;
}

void select_by_decay(ResidueChoice& choice, double theta) {
    const int M = choice.chi_pole_order;
    if (M < 2) throw std::invalid_argument("decay selection applies to irregular poles");
    const cplx dir = std::polar(1.0, (1.0 - M) * theta) / (1.0 - M);
    for (int idx = 0; idx < 2; ++idx) {
        if ((choice.principal_parts[idx][0] * dir).real() < 0.0) {
            choice.select(idx, SelectionReason::SquareIntegrability);
            return;
        }
    }
    throw NoNormalizableBranch("neither branch decays on approach to the irregular pole");
}

// ------------------------------------------------------------ infinity

InfinityBehavior infinity_behavior(const RiccatiProblem& prob, const DecayRule& rule) {
    const int m = prob.infinity_pole_order;
    InfinityBehavior out;
    out.m = m;
    const auto Rs = laurent_at_infinity(prob.rational_term, -2 * m, 2);
    const auto Ls = laurent_at_infinity(prob.linear_term, 0, 1);
    const cplx l1 = Ls.coeff(1);
    double rscale = 0.0;
    for (int k = -2 * m; k <= 2; ++k) rscale = std::max(rscale, std::abs(Rs.coeff(k)));
    rscale = std::max(rscale, 1.0);

    std::vector<cplx> u(m + 2, 0.0);
    const cplx lead2 = -Rs.coeff(-2 * m);
    if (m == 0 && std::abs(lead2) <= 1e-14 * rscale) {
        if (std::abs(Rs.coeff(1)) > 1e-12 * rscale)
            throw NoNormalizableBranch("chi is not meromorphic at infinity (R ~ 1/y)");
        out.regular_singular = true;
        const cplx half_sum = 0.5 * (1.0 - l1);
        const cplx root = 0.5 * std::sqrt((1.0 - l1) * (1.0 - l1) - 4.0 * Rs.coeff(2));
        out.regular_candidates = {half_sum + root, half_sum - root};
        int idx;
        if (rule.forced_sign != 0) {
            idx = rule.forced_sign > 0 ? 0 : 1;
            out.reason = rule.reason;
        } else {
            idx = out.regular_candidates[0].real() <= out.regular_candidates[1].real() ? 0 : 1;
            out.reason = SelectionReason::SquareIntegrability;
        }
        out.sign = idx == 0 ? 1 : -1;
        u[1] = out.regular_candidates[idx];
    } else {
        const cplx principal = std::sqrt(lead2);
        int sign = 0;
        if (rule.forced_sign != 0) {
            sign = rule.forced_sign > 0 ? 1 : -1;
            out.reason = rule.reason;
        } else {
            auto decays = [&](cplx a0) {
                for (double th : rule.directions)
                    if (!((a0 * std::polar(1.0, (m + 1) * th)).real() < -1e-12 * std::abs(a0))) return false;
                return true;
            };
            if (decays(principal))
                sign = 1;
            else if (decays(-principal))
                sign = -1;
            else
                throw NoNormalizableBranch("neither sign of the leading coefficient " +
                                           std::to_string(principal.real()) + (principal.imag() < 0 ? "" : "+") +
                                           std::to_string(principal.imag()) +
                                           "i gives a decaying wavefunction on every required boundary");
            out.reason = rule.reason == SelectionReason::Unselected ? SelectionReason::SquareIntegrability
                                                                     : rule.reason;
        }
        out.sign = sign;
        u[0] = static_cast<double>(sign) * principal;
        for (int k = 1; k <= m + 1; ++k) {
            cplx acc = Rs.coeff(k - 2 * m);
            for (int i = 1; i <= k - 1; ++i) acc += u[i] * u[k - i];
            if (k == m + 1) acc += (static_cast<double>(2 * m + 1 - k) + l1) * u[0];
            u[k] = -acc / (2.0 * u[0]);
        }
    }
    out.leading_coeffs.assign(u.begin(), u.begin() + m + 1);
    out.inverse_coefficient = u[m + 1];
    out.residue_at_infinity = -u[m + 1];

    // Substitute the truncated chi back and inspect the surviving coefficients.
    std::vector<cplx> poly_part(m + 1, 0.0);
    for (int k = 0; k <= m; ++k) poly_part[m - k] = u[k];
    RationalFunction chi{Polynomial(poly_part)};
    chi += RationalFunction::pole(0.0, 1, u[m + 1]);
    RationalFunction eq = chi * chi + chi.derivative() + prob.linear_term * chi + prob.rational_term;
    const int top = out.regular_singular ? 2 : 1 - m;
    const auto Es = laurent_at_infinity(eq, -2 * m, top);
    double worst = 0.0;
    for (int k = -2 * m; k <= top; ++k) worst = std::max(worst, std::abs(Es.coeff(k)));
    out.balance_residual = worst / rscale;
    return out;
}

cplx quantization_residue_sum(const std::vector<ResidueChoice>& fixed, int n_moving, const InfinityBehavior& inf) {
    cplx sum = static_cast<double>(n_moving) * kMovingPoleResidue + inf.residue_at_infinity;
    for (const auto& c : fixed) sum += c.value();
    return sum;
}

cplx quantization_residual(const RiccatiFamily& family, int n, double E) {
    const RiccatiProblem prob = family.problem(E);
    const auto fixed = family.select_fixed(prob);
    const auto inf = infinity_behavior(prob, family.infinity_rule);
    return quantization_residue_sum(fixed, family.moving_multiplier * n, inf);
}

EnergyScan solve_energy(const RiccatiFamily& family, int n, double lo, double hi, int samples) {
    EnergyScan scan;
    scan.lo = lo;
    scan.hi = hi;
    scan.samples = samples;
    if (!(hi > lo) || samples < 2) throw std::invalid_argument("empty energy window");

    auto eval = [&](double E, double& out) {
        try {
            const cplx r = quantization_residual(family, n, E);
            if (!std::isfinite(r.real()) || !std::isfinite(r.imag())) return false;
            if (std::abs(r.imag()) > 1e-9 * (1.0 + std::abs(r.real()))) return false;
            out = r.real();
            return true;
        } catch (const NoNormalizableBranch&) {
            return false;
        }
    };

    std::vector<double> Es(samples), fs(samples);
    std::vector<char> ok(samples);
    for (int i = 0; i < samples; ++i) {
        Es[i] = lo + (hi - lo) * i / (samples - 1);
        ok[i] = eval(Es[i], fs[i]);
        scan.valid_samples += ok[i];
    }
    auto accept = [&](double E) {
        double f;
        if (!eval(E, f) || std::abs(f) >= 1e-10) return;
        for (double e : scan.energies)
            if (std::abs(e - E) <= 1e-12 * std::max(1.0, std::abs(E))) return;
        scan.energies.push_back(E);
        scan.residuals.push_back(std::abs(f));
    };
    for (int i = 0; i + 1 < samples; ++i) {
        if (!ok[i] || !ok[i + 1]) continue;
        if (fs[i] == 0.0) {
            accept(Es[i]);
            continue;
        }
        if ((fs[i] < 0) == (fs[i + 1] < 0)) continue;
        double a = Es[i], b = Es[i + 1], fa = fs[i];
        for (int it = 0; it < 200 && b - a > 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(a));
             ++it) {
            const double mid = 0.5 * (a + b);
            double fm;
            if (!eval(mid, fm)) break;
            if (fm == 0.0) {
                a = b = mid;
                break;
            }
            if ((fm < 0) == (fa < 0)) {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
        }
        // Prefer the endpoint with the smaller residual.
        double f1 = 0, f2 = 0;
        const bool o1 = eval(a, f1), o2 = eval(b, f2);
        if (o1 && (!o2 || std::abs(f1) <= std::abs(f2)))
            accept(a);
        else if (o2)
            accept(b);
    }
    if (samples > 0 && ok[samples - 1] && fs[samples - 1] == 0.0) accept(Es[samples - 1]);

    std::vector<std::size_t> idx(scan.energies.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto x, auto y) { return scan.energies[x] < scan.energies[y]; });
    std::vector<double> e2, r2;
    for (auto i : idx) {
        e2.push_back(scan.energies[i]);
        r2.push_back(scan.residuals[i]);
    }
    scan.energies = std::move(e2);
    scan.residuals = std::move(r2);
    std::ostringstream rep;
    rep << "scanned [" << lo << ", " << hi << "] with " << samples << " samples, " << scan.valid_samples
        << " admissible, " << scan.energies.size() << " root(s)";
    scan.report = rep.str();
    return scan;
}

}  // namespace qhj
