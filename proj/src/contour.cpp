#include "qhj/contour.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

namespace qhj {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct GaussRule {
    std::vector<double> nodes, weights;  // on [-1, 1]
};

const GaussRule& gauss_rule(int n) {
    static std::map<int, GaussRule> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    GaussRule r;
    for (double z : boost::math::legendre_p_zeros<double>(n)) {
        const double dp = boost::math::legendre_p_prime<double>(n, z);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        r.nodes.push_back(z);
        r.weights.push_back(w);
        if (z != 0.0) {
            r.nodes.push_back(-z);
            r.weights.push_back(w);
        }
    }
    return cache.emplace(n, std::move(r)).first->second;
}

struct Edge {
    cplx from, to;
};

std::vector<Edge> edges(const ContourSpec& c) {
    const cplx p0(c.a, -c.h), p1(c.b, -c.h), p2(c.b, c.h), p3(c.a, c.h);
    return {{p0, p1}, {p1, p2}, {p2, p3}, {p3, p0}};
}

double distance_to_segment(cplx z, const Edge& e) {
    const cplx d = e.to - e.from;
    const double t = std::clamp(std::real((z - e.from) * std::conj(d)) / std::norm(d), 0.0, 1.0);
    return std::abs(z - (e.from + t * d));
}

double distance_to_path(cplx z, const ContourSpec& c) {
    double best = INFINITY;
    for (const auto& e : edges(c)) best = std::min(best, distance_to_segment(z, e));
    return best;
}

bool strictly_inside(cplx z, const ContourSpec& c) {
    return z.real() > c.a && z.real() < c.b && std::abs(z.imag()) < c.h;
}

cplx momentum(const ClosedFormState& s, cplx x) { return cplx(0.0, -1.0) * s.log_derivative(x); }

cplx closed_integral(const ClosedFormState& s, const ContourSpec& c, int m) {
    const GaussRule& g = gauss_rule(m);
    cplx total = 0.0;
    for (const auto& e : edges(c)) {
        const cplx mid = 0.5 * (e.from + e.to), half = 0.5 * (e.to - e.from);
        cplx sum = 0.0;
        for (std::size_t i = 0; i < g.nodes.size(); ++i) sum += g.weights[i] * momentum(s, mid + half * g.nodes[i]);
        total += half * sum;
    }
    return total / (2.0 * kPi);
}

/// Points where psi'/psi has poles near the window: zeros of psi and prefactor singularities.
std::vector<cplx> all_poles(const ClosedFormState& s, double lo, double hi, double height) {
    std::vector<cplx> out;
    for (const auto& p : complex_pole_census(s, lo, hi, height)) out.push_back(p.x);
    for (const cplx z : s.prefactor_singularities(lo, hi, height)) out.push_back(z);
    return out;
}

}  // namespace

std::vector<PoleSite> complex_pole_census(const ClosedFormState& state, double x_lo, double x_hi, double height) {
    std::vector<PoleSite> out;
    if (state.polynomial.degree() < 1) return out;
    for (const cplx r : poly_roots(state.polynomial).all) {
        for (const cplx x : state.preimages(r, x_lo, x_hi, height)) {
            if (std::any_of(out.begin(), out.end(), [&](const PoleSite& p) { return std::abs(p.x - x) < 1e-8; }))
                continue;
            PoleSite p;
            p.x = x;
            p.y = r;
            p.real = std::abs(x.imag()) < 1e-8 * std::max(1.0, std::abs(x));
            p.in_domain = p.real && state.domain.contains(x.real());
            out.push_back(p);
        }
    }
    std::sort(out.begin(), out.end(), [](const PoleSite& a, const PoleSite& b) {
        return a.x.real() != b.x.real() ? a.x.real() < b.x.real() : a.x.imag() < b.x.imag();
    });
    return out;
}

ContourSpec default_contour(const ClosedFormState& state) {
    const Interval d = state.domain;
    const std::vector<double> nodes = state.nodes();
    ContourSpec c;
    double left_ref, right_ref;
    if (!nodes.empty()) {
        c.a = nodes.front() - 1.0;
        c.b = nodes.back() + 1.0;
        left_ref = nodes.front();
        right_ref = nodes.back();
    } else {
        const double lo = std::isfinite(d.lo) ? d.lo : -50.0, hi = std::isfinite(d.hi) ? d.hi : 50.0;
        double first = NAN, last = NAN, vmin = INFINITY, xmin = 0.5 * (lo + hi);
        const int S = 40000;
        for (int i = 1; i < S; ++i) {
            const double x = lo + (hi - lo) * i / S;
            const double v = state.potential(x);
            if (!std::isfinite(v)) continue;
            if (v < vmin) {
                vmin = v;
                xmin = x;
            }
            if (v < state.energy) {
                if (std::isnan(first)) first = x;
                last = x;
            }
        }
        if (std::isnan(first)) first = last = xmin;
        c.a = first;
        c.b = last;
        if (c.b - c.a < 0.5) {
            c.a -= 0.25;
            c.b += 0.25;
        }
        left_ref = right_ref = 0.5 * (c.a + c.b);
    }
    if (std::isfinite(d.lo)) c.a = std::max(c.a, d.lo + 0.5 * (left_ref - d.lo));
    if (std::isfinite(d.hi)) c.b = std::min(c.b, d.hi - 0.5 * (d.hi - right_ref));

    double nearest = INFINITY;
    for (const cplx z : all_poles(state, c.a - 1.0, c.b + 1.0, 4.0)) {
        if (std::abs(z.imag()) < 1e-8 * std::max(1.0, std::abs(z))) continue;
        if (z.real() < c.a - 1.0 || z.real() > c.b + 1.0) continue;
        nearest = std::min(nearest, std::abs(z.imag()));
    }
    c.h = std::isfinite(nearest) ? 0.5 * nearest : 0.5;
    return c;
}

ActionResult action_integral(const ClosedFormState& state, const ContourSpec& spec) {
    ActionResult res;
    ContourSpec c = spec;
    const double pad = 1.0;
    std::vector<cplx> poles = all_poles(state, c.a - pad, c.b + pad, c.h + pad);
    auto too_close = [&](const ContourSpec& cc) {
        for (const cplx z : poles)
            if (distance_to_path(z, cc) < cc.delta) return true;
        return false;
    };
    int adjustments = 0;
    while (too_close(c)) {
        if (++adjustments > 5) throw ContourError("contour passes within delta of a pole of psi'/psi");
        c.h *= 0.8;
        c.a -= 0.5 * c.delta * adjustments;
        c.b += 0.5 * c.delta * adjustments;
        res.notes.push_back("contour adjusted away from a pole");
    }
    for (const auto& p : complex_pole_census(state, c.a - pad, c.b + pad, c.h + pad))
        if (strictly_inside(p.x, c)) ++res.enclosed_zeros;

    int m = std::max(2, c.samples);
    cplx J = closed_integral(state, c, m);
    double change = INFINITY;
    while (m < 8192) {
        const cplx J2 = closed_integral(state, c, 2 * m);
        change = std::abs(J2 - J);
        J = J2;
        m *= 2;
        if (change < 1e-9) break;
    }
    if (!(change < 1e-9)) res.notes.push_back("quadrature stopped at the point cap before the 1e-9 change target");
    res.J = J;
    res.samples = m;
    res.last_change = change;
    res.contour = c;
    return res;
}

void write_contour_csv(std::ostream& os, const ClosedFormState& state, const ContourSpec& c, int samples_per_edge) {
    os << "edge,t,re_x,im_x,re_p,im_p\n";
    const auto es = edges(c);
    char buf[200];
    for (std::size_t k = 0; k < es.size(); ++k) {
        for (int i = 0; i < samples_per_edge; ++i) {
            const double t = (i + 0.5) / samples_per_edge;
            const cplx x = es[k].from + t * (es[k].to - es[k].from);
            const cplx p = momentum(state, x);
            std::snprintf(buf, sizeof buf, "%zu,%.6f,%.12g,%.12g,%.12g,%.12g\n", k, t, x.real(), x.imag(), p.real(),
                          p.imag());
            os << buf;
        }
    }
}

}  // namespace qhj
