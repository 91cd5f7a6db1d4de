#pragma once

#include "qhj/poly.hpp"
#include "qhj/riccati.hpp"

#include <json.hpp>

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qhj {

using ParamSet = std::map<std::string, double>;

class OutOfSpectrum : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotQES : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameters : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class RecursionBreakdown : public std::runtime_error {
public:
    RecursionBreakdown(const std::string& what, int index) : std::runtime_error(what), index(index) {}
    int index;
};

struct ParamInfo {
    std::string name;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool lo_strict = false;
    bool hi_strict = false;
    bool integer = false;
    std::string meaning;
    std::optional<double> default_value;
};

struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool contains(double x) const { return x > lo && x < hi; }
};

/// x -> y, analytic so it can be evaluated on complex contours.
struct VariableMap {
    std::string formula;
    std::function<cplx(cplx)> y;    // y(x)
    std::function<cplx(cplx)> dy;   // dy/dx
    std::function<cplx(cplx)> d2y;  // d2y/dx2
    std::function<double(double)> x_of_y;  // inverse on the physical branch
};

/// a2 P'' + a1 P' + a0 P = 0
struct PolyOde {
    Polynomial a2, a1, a0;
    Polynomial apply(const Polynomial& p) const;
};

/// (y - location)^exponent; on the real axis |y - location| is used.
struct ExponentFactor {
    cplx location;
    double exponent;
};

/// psi(x) = exp(Q(y)) * prod (y - c_j)^{e_j} * P(y) with y = y(x).
struct ClosedFormState {
    int n = 0;
    double energy = 0.0;
    std::vector<ExponentFactor> exponent_factors;
    Polynomial exp_polynomial;  // Q
    Polynomial polynomial;      // P
    VariableMap map;
    std::function<double(double)> potential;
    Interval domain;

    /// psi'/psi in x, for complex x.
    cplx log_derivative(cplx x) const;
    /// psi and its first two x-derivatives on the real axis.
    void evaluate(double x, double& psi, double& dpsi, double& d2psi) const;
    double psi(double x) const;
    /// max |-psi'' + (V - E) psi| / max |psi| over the sample points.
    double schrodinger_residual(const std::vector<double>& xs) const;
    /// Real zeros of P mapped back to x inside the domain, sorted.
    std::vector<double> nodes() const;
    /// Solutions of y(x) = c found by Newton from a grid of seeds over the window.
    std::vector<cplx> preimages(cplx c, double x_lo, double x_hi, double height) const;
    /// Locations in the x-plane where the prefactor is singular and the
    /// log-derivative has poles: preimages of y = c_j near the given x-window.
    std::vector<cplx> prefactor_singularities(double x_lo, double x_hi, double height) const;
};

/// Printed orientation of the quantization condition: printed = factor * canonical.
struct PrintedQuantization {
    std::string text;
    cplx factor{1.0, 0.0};
};

struct PotentialSpec {
    std::string id;
    std::string title;
    std::vector<ParamInfo> schema;
    ParamSet params;
    Interval domain;
    std::string potential_formula;
    std::string variable_formula;
    std::string riccati_form;  // "phi" keeps the linear term, "chi" removes it
    std::function<double(double)> V;
    VariableMap variable_map;

    /// Schrodinger equation in y: J2 psi_yy + K psi_y + (E - V(y)) psi = 0.
    RationalFunction inv_J2;  // 1 / (dy/dx)^2 as a function of y
    Polynomial K;             // d2y/dx2 as a function of y
    RationalFunction V_of_y;

    /// Selection rules, sign conventions and moving-pole bookkeeping; several
    /// entries when the printed condition ranges over undetermined signs.
    std::vector<RiccatiFamily> branches;
    std::vector<std::pair<std::string, std::string>> residue_rules;  // pole label -> rule
    PrintedQuantization printed_quantization;

    std::function<double(int)> spectrum;  // empty when there is no closed form
    std::function<int()> bound_state_count;  // -1 for infinitely many
    std::function<std::pair<double, double>(int)> energy_window;
    std::function<PolyOde(int, double)> printed_ode;  // empty when no reference ODE is known

    bool qes = false;
    std::function<double(int)> qes_condition;  // |left - right| of the printed condition
    std::string qes_condition_text;

    bool has_closed_form() const { return static_cast<bool>(spectrum); }
    /// Riccati problem at energy E (from the first branch).
    RiccatiProblem riccati(double E) const { return branches.front().problem(E); }
};

std::vector<std::string> catalog_list();
bool catalog_has(const std::string& id);
/// Parameter schema for an id, with defaults where the entry has sensible ones.
std::vector<ParamInfo> catalog_schema(const std::string& id);
/// Builds a validated entry; missing parameters take their defaults.
PotentialSpec make_potential(const std::string& id, const ParamSet& params = {});

double closed_form_energy(const PotentialSpec& spec, int n);
PolyOde polynomial_ode(const PotentialSpec& spec, int n, double E);
/// Degree-n monic polynomial solution by top-down coefficient recursion.
Polynomial polynomial_ode_solve(const PotentialSpec& spec, int n, double E);
Polynomial solve_hypergeometric_ode(const PolyOde& ode, int n);
double qes_condition_residual(const PotentialSpec& spec, int n);

/// Residue-sum residual at energy E, minimised over the admissible branches.
double quantization_residual_min(const PotentialSpec& spec, int n, double E);
/// Energies from the residue sum (first branch), scanned over the entry's window.
EnergyScan solve_energy(const PotentialSpec& spec, int n);

/// Closed-form state assembled from the engine residues at E = closed form.
ClosedFormState closed_form_state(const PotentialSpec& spec, int n);
/// Factor data psi = exp(Q) prod (y-c)^e from the selected residues at energy E.
void prefactor_from_residues(const PotentialSpec& spec, double E, std::vector<ExponentFactor>& factors,
                             Polynomial& exp_poly);
/// ODE for P obtained by substituting psi = F P into the Schrodinger equation in y.
PolyOde reduce_to_polynomial_ode(const PotentialSpec& spec, double E, const std::vector<ExponentFactor>& factors,
                                 const Polynomial& exp_poly);

/// V(x) recovered from the Riccati data at energy E: E - J2 (R + l^2/4 + l'/2) in
/// chi-form entries, E - J2 R in phi-form entries.
double reconstructed_potential(const PotentialSpec& spec, double x, double E = 0.0);

nlohmann::json catalog_json(const PotentialSpec& spec);
std::string params_hash(const ParamSet& params);

}  // namespace qhj
