#include "qhj/oracle.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <ostream>

namespace qhj {

namespace {

TridiagonalSystem build_system(const std::function<double(double)>& V, const Interval& domain, int N, bool* ok) {
    TridiagonalSystem s;
    s.domain = domain;
    s.points = N;
    s.h = (domain.hi - domain.lo) / (N + 1);
    const double inv_h2 = 1.0 / (s.h * s.h);
    s.x.resize(N);
    s.diag.resize(N);
    s.offdiag.assign(N > 0 ? N - 1 : 0, -inv_h2);
    *ok = true;
    for (int i = 0; i < N; ++i) {
        s.x[i] = domain.lo + (i + 1) * s.h;
        const double v = V(s.x[i]);
        if (!std::isfinite(v)) *ok = false;
        s.diag[i] = 2.0 * inv_h2 + v;
    }
    return s;
}

}  // namespace

TridiagonalSystem discretize(const std::function<double(double)>& V, const Interval& domain, int N) {
    if (!(std::isfinite(domain.lo) && std::isfinite(domain.hi)) || domain.hi <= domain.lo)
        throw OracleError("oracle grid needs a finite, non-empty interval");
    if (N < 3) throw OracleError("oracle grid needs at least 3 interior points");
    bool ok = false;
    TridiagonalSystem s = build_system(V, domain, N, &ok);
    if (ok) return s;
    s = build_system(V, domain, N + 1, &ok);
    if (ok) return s;
    throw OracleError("potential is not finite at an interior grid node");
}

int count_nodes(const std::vector<double>& psi, double rel) {
    double mx = 0.0;
    for (double v : psi) mx = std::max(mx, std::abs(v));
    const double thr = rel * mx;
    int nodes = 0, last = 0;
    for (double v : psi) {
        if (std::abs(v) < thr) continue;
        const int sg = v > 0 ? 1 : -1;
        if (last != 0 && sg != last) ++nodes;
        last = sg;
    }
    return nodes;
}

GridSpectrum eigen_lowest(const TridiagonalSystem& sys, int k, bool with_vectors) {
    if (k < 1) throw std::invalid_argument("eigen_lowest needs k >= 1");
    const lapack_int n = sys.points;
    k = std::min<int>(k, n);
    const double abstol = 2.0 * LAPACKE_dlamch('S');
    std::vector<double> w(n);
    std::vector<lapack_int> iblock(n), isplit(n);
    lapack_int m = 0, nsplit = 0;
    lapack_int info = LAPACKE_dstebz('I', 'B', n, 0.0, 0.0, 1, k, abstol, sys.diag.data(), sys.offdiag.data(), &m,
                                     &nsplit, w.data(), iblock.data(), isplit.data());
    if (info != 0 || m != k) {
        // Retry through an explicit value window around the Gershgorin bounds.
        double lo = sys.diag[0], hi = sys.diag[0];
        for (lapack_int i = 0; i < n; ++i) {
            const double r = (i > 0 ? std::abs(sys.offdiag[i - 1]) : 0.0) + (i + 1 < n ? std::abs(sys.offdiag[i]) : 0.0);
            lo = std::min(lo, sys.diag[i] - r);
            hi = std::max(hi, sys.diag[i] + r);
        }
        info = LAPACKE_dstebz('A', 'B', n, lo - 1.0, hi + 1.0, 0, 0, abstol, sys.diag.data(), sys.offdiag.data(), &m,
                              &nsplit, w.data(), iblock.data(), isplit.data());
        if (info != 0 || m < k) throw OracleError("tridiagonal bisection failed (info " + std::to_string(info) + ")");
    }

    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return w[a] < w[b]; });
    order.resize(k);

    GridSpectrum g;
    g.domain = sys.domain;
    g.points = sys.points;
    g.x = sys.x;
    for (int i : order) g.eigenvalues.push_back(w[i]);
    if (!with_vectors) return g;

    std::vector<double> z(static_cast<std::size_t>(n) * m);
    std::vector<lapack_int> ifail(m);
    info = LAPACKE_dstein(LAPACK_COL_MAJOR, n, sys.diag.data(), sys.offdiag.data(), m, w.data(), iblock.data(),
                          isplit.data(), z.data(), n, ifail.data());
    if (info < 0) throw OracleError("inverse iteration failed (info " + std::to_string(info) + ")");
    for (int i : order) {
        std::vector<double> v(z.begin() + static_cast<std::ptrdiff_t>(i) * n,
                              z.begin() + static_cast<std::ptrdiff_t>(i + 1) * n);
        double norm2 = 0.0;
        for (double c : v) norm2 += c * c;
        const double scale = 1.0 / std::sqrt(norm2 * sys.h);
        double mx = 0.0;
        for (double c : v) mx = std::max(mx, std::abs(c));
        const auto first = std::find_if(v.begin(), v.end(), [&](double c) { return std::abs(c) > 1e-3 * mx; });
        const double sign = (first != v.end() && *first < 0) ? -1.0 : 1.0;
        for (double& c : v) c *= sign * scale;
        g.node_counts.push_back(count_nodes(v));
        g.eigenvectors.push_back(std::move(v));
    }
    return g;
}

RefinedSpectrum refine_to(const std::function<double(double)>& V, const Interval& domain, int k, double tol,
                          int initial_points, int max_doublings) {
    RefinedSpectrum r;
    int N = initial_points;
    std::vector<double> prev_raw, prev_extrap;
    r.levels.resize(k);
    for (int stage = 0; stage <= max_doublings; ++stage) {
        const TridiagonalSystem sys = discretize(V, domain, N);
        const bool last_stage = stage == max_doublings;
        GridSpectrum g = eigen_lowest(sys, k, false);
        r.grid_points.push_back(sys.points);
        r.raw_history.push_back(g.eigenvalues);
        bool all = false;
        if (!prev_raw.empty()) {
            std::vector<double> extrap(k);
            for (int i = 0; i < k; ++i) extrap[i] = (4.0 * g.eigenvalues[i] - prev_raw[i]) / 3.0;
            if (!prev_extrap.empty()) {
                all = true;
                for (int i = 0; i < k; ++i) {
                    auto& lv = r.levels[i];
                    lv.energy = extrap[i];
                    lv.achieved_tol = std::abs(extrap[i] - prev_extrap[i]) / std::max(1.0, std::abs(extrap[i]));
                    lv.converged = lv.achieved_tol < tol;
                    all = all && lv.converged;
                }
            }
            prev_extrap = extrap;
        }
        prev_raw = g.eigenvalues;
        if (all || last_stage) {
            r.finest = eigen_lowest(sys, k, true);
            for (int i = 0; i < k; ++i) r.levels[i].node_count = r.finest.node_counts[i];
            r.certified = all;
            if (!all) r.notes.push_back("grid cap reached before every level met the tolerance");
            break;
        }
        N = 2 * sys.points + 1;
    }
    return r;
}

int default_oracle_points() {
    if (const char* env = std::getenv("QHJ_ORACLE_POINTS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 16 && v <= 10000000) return static_cast<int>(v);
    }
    return 2000;
}

namespace {

/// Walks from x0 toward the infinite end in direction dir until the decay
/// integral of sqrt(V - E) past the turning point reaches the target.
double march_to_decay(const std::function<double(double)>& V, double x0, int dir, double e_max, double target,
                      double cap, bool* capped) {
    double x = x0, integral = 0.0;
    *capped = false;
    while (std::abs(x - x0) < cap) {
        const double dx = 1e-3 * (1.0 + std::abs(x - x0));
        const double v = V(x + 0.5 * dir * dx);
        if (std::isfinite(v) && v > e_max) integral += std::sqrt(v - e_max) * dx;
        x += dir * dx;
        if (integral >= target) return x;
    }
    *capped = true;
    return x;
}

/// Smallest sampled V and its location over the well region of the domain.
double well_minimum(const PotentialSpec& spec, double* x_at) {
    const Interval d = spec.domain;
    const double a = std::isfinite(d.lo) ? d.lo : (std::isfinite(d.hi) ? d.hi - 40.0 : -20.0);
    const double b = std::isfinite(d.hi) ? d.hi : (std::isfinite(d.lo) ? d.lo + 40.0 : 20.0);
    double vmin = INFINITY;
    *x_at = 0.5 * (a + b);
    const int S = 20000;
    for (int i = 1; i < S; ++i) {
        const double x = a + (b - a) * i / S;
        const double v = spec.V(x);
        if (std::isfinite(v) && v < vmin) {
            vmin = v;
            *x_at = x;
        }
    }
    return vmin;
}

}  // namespace

Interval truncated_domain(const PotentialSpec& spec, double e_max, std::vector<std::string>* notes) {
    const Interval d = spec.domain;
    double x0 = 0.0;
    well_minimum(spec, &x0);
    Interval out = d;
    constexpr double kDecay = 20.0, kCap = 5000.0;
    bool capped = false;
    if (!std::isfinite(d.lo)) {
        out.lo = march_to_decay(spec.V, x0, -1, e_max, kDecay, kCap, &capped);
        if (capped && notes) notes->push_back("left truncation hit the distance cap");
    }
    if (!std::isfinite(d.hi)) {
        out.hi = march_to_decay(spec.V, x0, +1, e_max, kDecay, kCap, &capped);
        if (capped && notes) notes->push_back("right truncation hit the distance cap");
    }
    return out;
}

RefinedSpectrum oracle_spectrum(const PotentialSpec& spec, int k, double tol) {
    std::vector<std::string> notes;
    // The box for a trial e_max confines the levels, so its k-th level is an
    // upper estimate; rebuilding the box at that level settles quickly.
    double x_well = 0.0;
    double e_max = well_minimum(spec, &x_well) + 1.0;
    Interval box = truncated_domain(spec, e_max, nullptr);
    for (int it = 0; it < 12; ++it) {
        const GridSpectrum g = eigen_lowest(discretize(spec.V, box, 4000), k, false);
        const double top = g.eigenvalues.back();
        const double margin = 0.05 * std::max(1.0, std::abs(top));
        if (top + margin <= e_max) break;
        e_max = top + margin;
        box = truncated_domain(spec, e_max, &notes);
    }
    RefinedSpectrum r = refine_to(spec.V, box, k, tol, default_oracle_points());
    r.notes.insert(r.notes.begin(), notes.begin(), notes.end());
    return r;
}

void write_eigenfunction_csv(std::ostream& os, const GridSpectrum& g) {
    os << "x";
    for (std::size_t k = 0; k < g.eigenvectors.size(); ++k) os << ",psi_" << k;
    os << '\n';
    char buf[40];
    for (std::size_t i = 0; i < g.x.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.10g", g.x[i]);
        os << buf;
        for (const auto& v : g.eigenvectors) {
            std::snprintf(buf, sizeof buf, "%.10g", v[i]);
            os << ',' << buf;
        }
        os << '\n';
    }
}

}  // namespace qhj
