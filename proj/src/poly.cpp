#include "qhj/poly.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qhj {

namespace {

bool same_point(cplx a, cplx b, double rel = 1e-12) {
    return std::abs(a - b) <= rel * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

// Power-series quotient a(t)/b(t) up to t^(count-1); b(0) must be nonzero.
std::vector<cplx> series_divide(const Polynomial& a, const Polynomial& b, int count) {
    std::vector<cplx> s(std::max(count, 0));
    const cplx b0 = b[0];
    for (int k = 0; k < count; ++k) {
        cplx acc = a[k];
        for (int i = 1; i <= k && i <= b.degree(); ++i) acc -= b[i] * s[k - i];
        s[k] = acc / b0;
    }
    return s;
}

// Sum of |a_k| |z|^k, the natural scale for judging |p(z)|.
double abs_scale(const Polynomial& p, cplx z) {
    // Powers of |z| are floored at 1 so a value near a root at the origin is
    // still measured against the size of the coefficients.
    double az = std::max(1.0, std::abs(z)), acc = 0.0;
    for (int k = p.degree(); k >= 0; --k) acc = acc * az + std::abs(p[k]);
    return acc;
}

}  // namespace

// ------------------------------------------------------------ Polynomial

Polynomial::Polynomial(std::vector<cplx> coeffs) : c_(std::move(coeffs)) { trim(); }

Polynomial Polynomial::from_real(const std::vector<double>& coeffs) {
    return Polynomial(std::vector<cplx>(coeffs.begin(), coeffs.end()));
}

Polynomial Polynomial::constant(cplx c) { return Polynomial(std::vector<cplx>{c}); }

Polynomial Polynomial::monomial(int k, cplx c) {
    std::vector<cplx> v(k + 1, 0.0);
    v[k] = c;
    return Polynomial(std::move(v));
}

Polynomial Polynomial::from_roots(const std::vector<cplx>& roots, cplx lead) {
    std::vector<cplx> v{lead};
    for (cplx r : roots) {
        v.push_back(0.0);
        for (std::size_t k = v.size() - 1; k > 0; --k) v[k] = v[k - 1] - r * v[k];
        v[0] = -r * v[0];
    }
    return Polynomial(std::move(v));
}

void Polynomial::trim() {
    while (!c_.empty() && c_.back() == cplx(0.0, 0.0)) c_.pop_back();
}

int Polynomial::degree() const { return c_.empty() ? kZeroDegree : static_cast<int>(c_.size()) - 1; }

cplx Polynomial::operator[](int k) const {
    return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : cplx(0.0, 0.0);
}

cplx Polynomial::leading() const { return c_.empty() ? cplx(0.0, 0.0) : c_.back(); }

double Polynomial::max_abs_coeff() const {
    double m = 0.0;
    for (auto c : c_) m = std::max(m, std::abs(c));
    return m;
}

cplx Polynomial::operator()(cplx z) const {
    cplx acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

double Polynomial::eval_real(double x) const { return (*this)(cplx(x, 0.0)).real(); }

Polynomial Polynomial::derivative(int order) const {
    std::vector<cplx> v = c_;
    for (int o = 0; o < order; ++o) {
        if (v.empty()) break;
        for (std::size_t k = 1; k < v.size(); ++k) v[k - 1] = v[k] * static_cast<double>(k);
        v.pop_back();
    }
    return Polynomial(std::move(v));
}

Polynomial Polynomial::shifted(cplx c) const {
    // Repeated synthetic division (Taylor shift).
    std::vector<cplx> v = c_;
    const int n = static_cast<int>(v.size());
    for (int i = 0; i < n; ++i)
        for (int k = n - 2; k >= i; --k) v[k] += c * v[k + 1];
    return Polynomial(std::move(v));
}

Polynomial Polynomial::reversed(int n) const {
    if (is_zero()) return {};
    if (n < degree()) throw std::invalid_argument("reversed: n below degree");
    std::vector<cplx> v(n + 1, 0.0);
    for (int k = 0; k <= degree(); ++k) v[n - k] = c_[k];
    return Polynomial(std::move(v));
}

Polynomial Polynomial::monic() const {
    if (is_zero()) return {};
    Polynomial p = *this;
    p *= 1.0 / leading();
    return p;
}

Polynomial Polynomial::chopped(double rel_tol) const {
    const double cut = rel_tol * max_abs_coeff();
    std::vector<cplx> v = c_;
    for (auto& c : v)
        if (std::abs(c) <= cut) c = 0.0;
    return Polynomial(std::move(v));
}

std::pair<Polynomial, Polynomial> Polynomial::divmod(const Polynomial& d) const {
    if (d.is_zero()) throw std::invalid_argument("division by the zero polynomial");
    if (degree() < d.degree()) return {Polynomial{}, *this};
    std::vector<cplx> r = c_;
    const int dn = d.degree();
    std::vector<cplx> q(degree() - dn + 1, 0.0);
    for (int k = degree() - dn; k >= 0; --k) {
        q[k] = r[k + dn] / d.leading();
        for (int j = 0; j <= dn; ++j) r[k + j] -= q[k] * d[j];
        r[k + dn] = 0.0;
    }
    r.resize(dn > 0 ? dn : 0);
    return {Polynomial(std::move(q)), Polynomial(std::move(r))};
}

bool Polynomial::has_real_coefficients(double rel_tol) const {
    const double cut = rel_tol * max_abs_coeff();
    return std::all_of(c_.begin(), c_.end(), [&](cplx c) { return std::abs(c.imag()) <= cut; });
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) {
    if (is_zero() || o.is_zero()) {
        c_.clear();
        return *this;
    }
    std::vector<cplx> v(c_.size() + o.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < c_.size(); ++i)
        for (std::size_t j = 0; j < o.c_.size(); ++j) v[i + j] += c_[i] * o.c_[j];
    c_ = std::move(v);
    trim();
    return *this;
}

Polynomial& Polynomial::operator*=(cplx s) {
    for (auto& c : c_) c *= s;
    trim();
    return *this;
}

// ------------------------------------------------------ RationalFunction

RationalFunction::RationalFunction(Polynomial num) : num_(std::move(num)) {}

RationalFunction::RationalFunction(Polynomial num, std::vector<PoleFactor> den_factors)
    : num_(std::move(num)), den_(std::move(den_factors)) {
    reduce();
}

RationalFunction RationalFunction::from_polynomials(const Polynomial& num, const Polynomial& den) {
    if (den.is_zero()) throw std::invalid_argument("zero denominator");
    if (den.degree() == 0) return RationalFunction(num * (1.0 / den[0]));
    auto roots = poly_roots(den);
    std::vector<PoleFactor> f;
    for (const auto& r : roots.grouped) f.push_back({r.value, r.multiplicity});
    return RationalFunction(num * (1.0 / den.leading()), std::move(f));
}

RationalFunction RationalFunction::pole(cplx a, int k, cplx c) {
    return RationalFunction(Polynomial::constant(c), {{a, k}});
}

void RationalFunction::reduce() {
    // Merge coincident factors first.
    std::vector<PoleFactor> merged;
    for (const auto& f : den_) {
        if (f.multiplicity <= 0) continue;
        auto it = std::find_if(merged.begin(), merged.end(),
                               [&](const PoleFactor& g) { return same_point(g.location, f.location); });
        if (it == merged.end())
            merged.push_back(f);
        else
            it->multiplicity += f.multiplicity;
    }
    den_ = std::move(merged);
    if (num_.is_zero()) {
        den_.clear();
        return;
    }
    for (auto& f : den_) {
        while (f.multiplicity > 0 && num_.degree() >= 1) {
            const double scale = abs_scale(num_, f.location);
            const double rel = std::abs(num_(f.location)) / (scale > 0 ? scale : 1.0);
            if (rel <= 1e-10) {
                num_ = num_.divmod(Polynomial({-f.location, 1.0})).first;
                --f.multiplicity;
            } else {
                if (rel <= 1e-6)
                    notes_.push_back("near-cancellation at y = (" + std::to_string(f.location.real()) + ", " +
                                     std::to_string(f.location.imag()) + ") with relative size " +
                                     std::to_string(rel));
                break;
            }
        }
    }
    den_.erase(std::remove_if(den_.begin(), den_.end(), [](const PoleFactor& f) { return f.multiplicity == 0; }),
               den_.end());
}

Polynomial RationalFunction::den() const {
    Polynomial d = Polynomial::constant(1.0);
    for (const auto& f : den_)
        for (int k = 0; k < f.multiplicity; ++k) d *= Polynomial({-f.location, 1.0});
    return d;
}

int RationalFunction::pole_order(cplx a) const {
    for (const auto& f : den_)
        if (same_point(f.location, a, 1e-10)) return f.multiplicity;
    return 0;
}

int RationalFunction::degree_at_infinity() const {
    if (num_.is_zero()) return Polynomial::kZeroDegree;
    int dd = 0;
    for (const auto& f : den_) dd += f.multiplicity;
    return num_.degree() - dd;
}

cplx RationalFunction::operator()(cplx z) const {
    cplx d = 1.0;
    for (const auto& f : den_) d *= std::pow(z - f.location, f.multiplicity);
    return num_(z) / d;
}

RationalFunction RationalFunction::derivative() const {
    if (den_.empty()) return RationalFunction(num_.derivative());
    // (N/D)' with D = prod (y-c)^m; write over D * prod (y-c).
    Polynomial L = Polynomial::constant(1.0);
    for (const auto& f : den_) L *= Polynomial({-f.location, 1.0});
    Polynomial out = num_.derivative() * L;
    for (const auto& f : den_) {
        Polynomial others = Polynomial::constant(static_cast<double>(f.multiplicity));
        for (const auto& g : den_)
            if (&g != &f) others *= Polynomial({-g.location, 1.0});
        out -= num_ * others;
    }
    auto factors = den_;
    for (auto& f : factors) ++f.multiplicity;
    return RationalFunction(out, std::move(factors));
}

RationalFunction& RationalFunction::operator+=(const RationalFunction& o) {
    // Least common multiple of the two factored denominators.
    std::vector<PoleFactor> lcm = den_;
    for (const auto& g : o.den_) {
        auto it = std::find_if(lcm.begin(), lcm.end(),
                               [&](const PoleFactor& f) { return same_point(f.location, g.location); });
        if (it == lcm.end())
            lcm.push_back(g);
        else
            it->multiplicity = std::max(it->multiplicity, g.multiplicity);
    }
    auto lift = [&](const Polynomial& n, const std::vector<PoleFactor>& own) {
        Polynomial out = n;
        for (const auto& f : lcm) {
            int have = 0;
            for (const auto& g : own)
                if (same_point(f.location, g.location)) have = g.multiplicity;
            for (int k = have; k < f.multiplicity; ++k) out *= Polynomial({-f.location, 1.0});
        }
        return out;
    };
    Polynomial n = lift(num_, den_) + lift(o.num_, o.den_);
    auto notes = notes_;
    notes.insert(notes.end(), o.notes_.begin(), o.notes_.end());
    *this = RationalFunction(std::move(n), std::move(lcm));
    notes_.insert(notes_.begin(), notes.begin(), notes.end());
    return *this;
}

RationalFunction& RationalFunction::operator*=(const RationalFunction& o) {
    auto factors = den_;
    factors.insert(factors.end(), o.den_.begin(), o.den_.end());
    auto notes = notes_;
    notes.insert(notes.end(), o.notes_.begin(), o.notes_.end());
    *this = RationalFunction(num_ * o.num_, std::move(factors));
    notes_.insert(notes_.begin(), notes.begin(), notes.end());
    return *this;
}

RationalFunction& RationalFunction::operator*=(cplx s) {
    num_ *= s;
    if (num_.is_zero()) den_.clear();
    return *this;
}

// ------------------------------------------------------------- Laurent

cplx LaurentExpansion::coeff(int k) const {
    const int i = k - min_order;
    if (i < 0 || i >= static_cast<int>(coeffs.size())) return 0.0;
    return coeffs[i];
}

LaurentExpansion laurent_at(const RationalFunction& r, cplx center, int min_order, int max_order) {
    LaurentExpansion out;
    out.center = center;
    out.min_order = min_order;
    int v = 0;
    Polynomial q = Polynomial::constant(1.0);
    cplx q_at_center = 1.0;
    for (const auto& f : r.den_factors()) {
        if (same_point(f.location, center, 1e-10)) {
            v = f.multiplicity;
        } else {
            for (int k = 0; k < f.multiplicity; ++k) {
                q *= Polynomial({center - f.location, 1.0});
                q_at_center *= center - f.location;
            }
        }
    }
    if (!r.is_zero() && -v < min_order)
        throw LaurentOrderError("pole of order " + std::to_string(v) + " exceeds requested minimum order " +
                                std::to_string(min_order));
    const Polynomial n = r.num().shifted(center);
    const int count = max_order + v + 1;
    auto s = series_divide(n, q, count);
    out.coeffs.assign(max_order - min_order + 1, 0.0);
    for (int o = min_order; o <= max_order; ++o) {
        const int k = o + v;
        if (k >= 0 && k < count) out.coeffs[o - min_order] = s[k];
    }
    if (v == 1 && min_order <= -1 && max_order >= -1) {
        const cplx limit = r.num()(center) / q_at_center;
        out.crosscheck_error = std::abs(limit - out.coeff(-1));
    }
    return out;
}

LaurentExpansion laurent_at_infinity(const RationalFunction& r, int min_order, int max_order) {
    LaurentExpansion out;
    out.at_infinity = true;
    out.min_order = min_order;
    out.coeffs.assign(max_order - min_order + 1, 0.0);
    if (r.is_zero()) return out;
    const Polynomial den = r.den();
    const int dn = r.num().degree(), dd = den.degree();
    const int low = dd - dn;  // r(1/t) = t^low * N~(t) / D~(t)
    if (low < min_order)
        throw LaurentOrderError("pole of order " + std::to_string(-low) + " at infinity exceeds requested order");
    const Polynomial nt = r.num().reversed(dn), dt = den.reversed(dd);
    const int count = max_order - low + 1;
    auto s = series_divide(nt, dt, std::max(count, 0));
    for (int o = min_order; o <= max_order; ++o) {
        const int k = o - low;
        if (k >= 0 && k < count) out.coeffs[o - min_order] = s[k];
    }
    return out;
}

cplx residue_at(const RationalFunction& r, cplx pole, std::string* note) {
    const int v = r.pole_order(pole);
    if (v == 0) {
        if (note) *note = "not a pole";
        return 0.0;
    }
    return laurent_at(r, pole, -v, -1).coeff(-1);
}

cplx residue_at_infinity(const RationalFunction& r) {
    if (r.is_zero()) return 0.0;
    const int low = -r.degree_at_infinity();
    return -laurent_at_infinity(r, std::min(low, 1), 1).coeff(1);
}

// --------------------------------------------------------------- roots

bool is_real_root(cplx r) { return std::abs(r.imag()) < 1e-8 * std::max(1.0, std::abs(r)); }

namespace {

std::vector<cplx> companion_roots(const Polynomial& q) {
    const int n = q.degree();
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) C(i, n - 1) = -q[i] / q.leading();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
    std::vector<cplx> out(n);
    for (int i = 0; i < n; ++i) out[i] = es.eigenvalues()[i];
    return out;
}

double roundtrip(const Polynomial& p, const std::vector<cplx>& roots) {
    const Polynomial back = Polynomial::from_roots(roots, p.leading());
    double err = 0.0;
    for (int k = 0; k <= p.degree(); ++k) err = std::max(err, std::abs(back[k] - p[k]));
    return err / p.max_abs_coeff();
}

// A root of multiplicity m moves by about tol^(1/m) under coefficient noise of size tol,
// so clusters are collected within sqrt(tol).
std::vector<Root> group_roots(const std::vector<cplx>& all, double tol) {
    const double radius = std::sqrt(tol);
    std::vector<Root> out;
    std::vector<int> counts;
    std::vector<cplx> sums;
    for (cplx r : all) {
        bool placed = false;
        for (std::size_t g = 0; g < out.size(); ++g) {
            if (std::abs(r - out[g].value) <= radius * std::max(1.0, std::abs(r))) {
                sums[g] += r;
                ++counts[g];
                out[g].value = sums[g] / static_cast<double>(counts[g]);
                out[g].multiplicity = counts[g];
                placed = true;
                break;
            }
        }
        if (!placed) {
            out.push_back({r, 1});
            counts.push_back(1);
            sums.push_back(r);
        }
    }
    return out;
}

}  // namespace

RootResult poly_roots(const Polynomial& p, double tol) {
    if (p.degree() < 1 || p.degree() == Polynomial::kZeroDegree)
        throw std::invalid_argument("poly_roots needs degree >= 1");
    RootResult res;
    // Exact zero roots come off first.
    int zeros = 0;
    while (p[zeros] == cplx(0.0, 0.0)) ++zeros;
    std::vector<cplx> q_coeffs(p.coeffs().begin() + zeros, p.coeffs().end());
    const Polynomial q(q_coeffs);
    res.all.assign(zeros, 0.0);

    const int n = q.degree();
    std::vector<cplx> z(n);
    std::vector<bool> done(n, false);
    if (n == 1) {
        z[0] = -q[0] / q[1];
        done[0] = true;
    } else if (n > 1) {
        const Polynomial dq = q.derivative();
        const double radius = std::pow(std::abs(q[0] / q.leading()), 1.0 / n);
        for (int k = 0; k < n; ++k)
            z[k] = std::polar(radius > 0 ? radius : 1.0, 2.0 * std::numbers::pi * k / n + 0.4);
        const double eps = std::numeric_limits<double>::epsilon();
        int it = 0;
        for (; it < kAberthIterationCap; ++it) {
            bool all_done = true;
            for (int i = 0; i < n; ++i) {
                if (done[i]) continue;
                const cplx pz = q(z[i]);
                if (std::abs(pz) <= 16.0 * eps * abs_scale(q, z[i])) {
                    done[i] = true;
                    continue;
                }
                all_done = false;
                const cplx ratio = pz / dq(z[i]);
                cplx sum = 0.0;
                for (int j = 0; j < n; ++j)
                    if (j != i) sum += 1.0 / (z[i] - z[j]);
                const cplx w = ratio / (1.0 - ratio * sum);
                z[i] -= w;
                if (std::abs(w) <= eps * std::abs(z[i])) done[i] = true;
            }
            if (all_done) break;
        }
        res.iterations = it;
    }
    const bool converged = std::all_of(done.begin(), done.end(), [](bool b) { return b; });
    std::vector<cplx> cand = res.all;
    cand.insert(cand.end(), z.begin(), z.end());
    double err = roundtrip(p, cand);
    if (!converged || err > tol) {
        auto comp = companion_roots(q);
        std::vector<cplx> cand2 = res.all;
        cand2.insert(cand2.end(), comp.begin(), comp.end());
        const double err2 = roundtrip(p, cand2);
        res.used_companion_fallback = true;
        if (err2 < err) {
            cand = std::move(cand2);
            err = err2;
        }
        if (err > tol) {
            std::vector<bool> flags(zeros, true);
            flags.insert(flags.end(), done.begin(), done.end());
            throw RootFindingError("root finder did not converge (round-trip error " + std::to_string(err) + ")",
                                   cand, flags);
        }
    }
    res.all = std::move(cand);
    res.roundtrip_error = err;
    res.grouped = group_roots(res.all, tol);
    return res;
}

}  // namespace qhj
