#pragma once

#include "qhj/catalog.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace qhj {

/// The sector operator does not map degree <= n polynomials into themselves.
class SectorLeakage : public std::runtime_error {
public:
    SectorLeakage(const std::string& what, std::vector<double> overflow)
        : std::runtime_error(what), overflow(std::move(overflow)) {}
    std::vector<double> overflow;  // |coefficient| of y^{n+1}, y^{n+2}, ... produced by y^n
};

class DegenerateConfiguration : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// psi = F(y) P(y) in the sector variable y; H[P] = -J2 (F P)''/F - K (F P)'/F + V P.
struct SectorGauge {
    VariableMap map;
    RationalFunction J2;
    Polynomial K;
    RationalFunction V_of_y;
    std::vector<ExponentFactor> factors;
    Polynomial exp_polynomial;
    /// Coefficients of P'', P', P in H[P]; all polynomial for a QES gauge.
    Polynomial c2, c1, c0;
};

SectorGauge sector_gauge(const PotentialSpec& spec);

/// Copy of the entry's parameters moved onto the degree-n QES stratum by
/// adjusting its sector label (alpha for sextic, mu for hyperbolic_qes).
ParamSet stratum_params(const PotentialSpec& spec, int n);

struct SectorMatrix {
    int n = 0;
    Eigen::MatrixXd matrix;     // column j = coefficients of H[y^j] up to degree n
    Eigen::MatrixXd overflow;   // rows: degrees n+1 .. n+max_raise
    std::string potential_id;
    ParamSet params;
    std::string variable;       // "x" or "xi"
    /// Largest |M_ij| with |i - j| beyond the band implied by the ODE degrees.
    double band_violation = 0.0;
    int lower_band = 0, upper_band = 0;
};

/// Throws SectorLeakage when the QES condition fails for this n.
SectorMatrix build_sector_matrix(const PotentialSpec& spec, int n);

struct ZeroCounts {
    int real_zeros = 0;     // physical nodes: real x inside the domain
    int complex_zeros = 0;  // everything else, with multiplicity
    int total = 0;
};

struct SectorState {
    ClosedFormState state;
    std::vector<cplx> roots;  // of P in the sector variable
    ZeroCounts zeros;
    int parity = 0;           // +1 even, -1 odd, 0 when the potential has no reflection symmetry
    bool degenerate = false;
    double eigen_residual = 0.0;   // |M v - E v| / |v|
    double bethe_residual = -1.0;  // negative when not applicable
    double energy_formula_residual = -1.0;
};

struct AlgebraicSector {
    int n = 0;
    std::string potential_id;
    ParamSet params;
    std::vector<SectorState> states;  // sorted by energy
    std::vector<std::string> notes;
    bool has_degeneracy = false;
};

AlgebraicSector solve_sector(const PotentialSpec& spec, const SectorMatrix& m);
/// Convenience: build + solve, attaching root-equation and energy-formula checks.
AlgebraicSector algebraic_sector(const PotentialSpec& spec, int n);

/// Max residual of the root equations of the hyperbolic sector polynomial (in xi).
double bethe_check(const PotentialSpec& spec, const ClosedFormState& state);
/// |E - (-4(s1+s2-1/2)^2 - 8 s1 [q1/2 + sum 1/xi_k])|
double sector_energy_formula_check(const PotentialSpec& spec, const ClosedFormState& state);

ZeroCounts count_zeros(const ClosedFormState& state, std::vector<cplx>* roots = nullptr);

void write_zero_atlas_csv(std::ostream& os, const std::vector<AlgebraicSector>& sectors, bool header = true);

}  // namespace qhj
