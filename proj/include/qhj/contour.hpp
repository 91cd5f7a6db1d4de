#pragma once

#include "qhj/catalog.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace qhj {

class ContourError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Rectangle [a, b] x [-h, h] traversed counterclockwise.
struct ContourSpec {
    double a = -1.0, b = 1.0, h = 0.5;
    int samples = 64;      // Gauss-Legendre points per edge to start with
    double delta = 1e-3;   // minimum distance between the path and any pole of psi'/psi
};

struct PoleSite {
    cplx x;              // location in the x-plane
    cplx y;              // root of P it comes from
    bool real = false;
    bool in_domain = false;
};

/// Zeros of psi in the window: preimages of the roots of P.  The prefactor
/// never vanishes away from its own singular points, so these are all of them.
std::vector<PoleSite> complex_pole_census(const ClosedFormState& state, double x_lo, double x_hi, double height);

/// Span: real nodes padded by 1 (or the classically allowed region when there
/// are none), clipped to the domain interior.  Height: half the distance to the
/// nearest off-axis pole, 0.5 when there is none.
ContourSpec default_contour(const ClosedFormState& state);

struct ActionResult {
    cplx J;
    int samples = 0;          // per edge at the accepted level
    double last_change = 0.0; // |J(2m) - J(m)| at acceptance
    int enclosed_zeros = 0;   // zeros of psi strictly inside the rectangle
    ContourSpec contour;      // after any adjustment away from poles
    std::vector<std::string> notes;
};

/// J = (1/2 pi) closed integral of p dx with p = -i psi'/psi.  The per-edge rule
/// doubles from c.samples until J changes by less than 1e-9.
ActionResult action_integral(const ClosedFormState& state, const ContourSpec& c);

/// Samples of the path and of p along it, one row per quadrature node.
void write_contour_csv(std::ostream& os, const ClosedFormState& state, const ContourSpec& c, int samples_per_edge = 200);

}  // namespace qhj
