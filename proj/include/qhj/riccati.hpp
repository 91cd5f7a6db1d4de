#pragma once

#include "qhj/poly.hpp"

#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qhj {

/// Residue of chi at a moving pole.  With p = -i psi'/psi the pole residue of p
/// is -i; chi = i p (times the Jacobian of the variable change, which is regular
/// there) therefore carries residue +1 at every zero of psi.
inline constexpr double kMovingPoleResidue = 1.0;

enum class SelectionReason {
    Unselected,
    SquareIntegrability,
    FinitenessAtOrigin,
    SuperpotentialLimit,
    ManualOverride,
};

std::string to_string(SelectionReason r);

/// The Riccati equation chi^2 + chi' + l(y) chi + R(y) = 0 in a transformed variable y.
struct RiccatiProblem {
    std::string variable_name = "y";
    RationalFunction rational_term;  // R(y)
    RationalFunction linear_term;    // l(y); zero for most problems
    std::vector<cplx> fixed_poles;
    int infinity_pole_order = 0;  // chi ~ y^m at infinity
};

/// Validates the invariants (every double-or-higher pole of R listed, l at most
/// simply singular, growth of R at infinity consistent with m) and returns the problem.
RiccatiProblem make_riccati_problem(std::string variable, RationalFunction R, std::vector<cplx> fixed_poles,
                                    int infinity_pole_order, RationalFunction linear_term = {});

class UnsupportedPoleOrder : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoNormalizableBranch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two candidate residues at one fixed pole and which one was kept.
/// For an irregular pole (chi has a pole of order M >= 2) each candidate carries
/// its whole principal part, leading coefficient first.
struct ResidueChoice {
    cplx pole{0.0, 0.0};
    int chi_pole_order = 1;
    std::array<cplx, 2> candidates{};                // {b+, b-}
    std::array<std::vector<cplx>, 2> principal_parts;  // only for chi_pole_order >= 2
    cplx r2{0.0, 0.0};   // order -2 coefficient of R (simple-pole case)
    cplx l1{0.0, 0.0};   // residue of l at the pole
    int selected = -1;   // index into candidates
    SelectionReason reason = SelectionReason::Unselected;

    bool is_selected() const { return selected == 0 || selected == 1; }
    cplx value() const;
    ResidueChoice& select(int index, SelectionReason why);
    ResidueChoice& select_nearest(cplx target, SelectionReason why);
    ResidueChoice& select_larger_real(SelectionReason why);
    ResidueChoice& select_smaller_real(SelectionReason why);
};

/// Candidates at a fixed pole where chi has (at most) a simple pole:
/// roots of b^2 + (l_{-1} - 1) b + r2 = 0, returned as (1 - l_{-1} +/- sqrt(disc)) / 2.
ResidueChoice fixed_pole_residues(const RiccatiProblem& prob, cplx pole);

/// Candidates at a fixed pole where R has a pole of even order 2M >= 4, so chi
/// has a pole of order M.  The two candidates follow the two signs of the leading
/// coefficient (+ is the principal square root of -R_{-2M}).
ResidueChoice irregular_pole_residues(const RiccatiProblem& prob, cplx pole);

/// Picks the irregular-pole candidate whose exp(int chi) decays as y approaches the
/// pole along the ray pole + r e^{i theta}, r -> 0+.
void select_by_decay(ResidueChoice& choice, double theta);

/// How to choose the sign of chi's leading coefficient at infinity.
struct DecayRule {
    /// Arguments of y along which psi = exp(int chi dy) must decay as |y| -> infinity.
    std::vector<double> directions;
    /// Nonzero: take +1 or -1 times the principal root regardless of decay.
    int forced_sign = 0;
    SelectionReason reason = SelectionReason::SquareIntegrability;
};

struct InfinityBehavior {
    int m = 0;
    /// [a_m, a_{m-1}, ..., a_0]: the polynomial part of chi at infinity.
    std::vector<cplx> leading_coeffs;
    /// Coefficient of 1/y in chi at infinity.
    cplx inverse_coefficient{0.0, 0.0};
    /// Minus the coefficient of 1/y: the quantity entering the residue sum.
    cplx residue_at_infinity{0.0, 0.0};
    /// Sign of the leading coefficient relative to the principal root (+1 / -1).
    int sign = 1;
    /// True when R decays like 1/y^2 so chi ~ d/y and d solves a quadratic.
    bool regular_singular = false;
    std::array<cplx, 2> regular_candidates{};
    SelectionReason reason = SelectionReason::Unselected;
    /// Largest surviving coefficient among y^{2m} ... y^{m-1} after substituting
    /// the truncated chi back into the equation, relative to the size of R there.
    double balance_residual = 0.0;
};

InfinityBehavior infinity_behavior(const RiccatiProblem& prob, const DecayRule& rule);

/// Sum of selected fixed residues + n_moving + residue at infinity.
cplx quantization_residue_sum(const std::vector<ResidueChoice>& fixed, int n_moving, const InfinityBehavior& inf);

/// Everything needed to evaluate the residue sum at a trial energy.
struct RiccatiFamily {
    std::function<RiccatiProblem(double E)> problem;
    /// Computes candidates at every fixed pole of the problem and applies the
    /// per-pole selection rules.
    std::function<std::vector<ResidueChoice>(const RiccatiProblem&)> select_fixed;
    DecayRule infinity_rule;
    /// Moving poles per excitation quantum in the chosen variable (2 when zeros pair up as +/- y_k).
    int moving_multiplier = 1;
};

/// Residue-sum residual at energy E; throws NoNormalizableBranch when no decaying branch exists.
cplx quantization_residual(const RiccatiFamily& family, int n, double E);

struct EnergyScan {
    std::vector<double> energies;   // sorted
    std::vector<double> residuals;  // |residual| at each energy
    double lo = 0.0, hi = 0.0;
    int samples = 0;
    int valid_samples = 0;
    std::string report;
};

inline constexpr int kEnergyScanSamples = 10000;

/// Real roots of the residue-sum residual in [lo, hi], bracketed on a uniform
/// sample grid and refined by bisection; accepted roots satisfy |residual| < 1e-10.
EnergyScan solve_energy(const RiccatiFamily& family, int n, double lo, double hi,
                        int samples = kEnergyScanSamples);

}  // namespace qhj
