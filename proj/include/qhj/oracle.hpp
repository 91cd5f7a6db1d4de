#pragma once

#include "qhj/catalog.hpp"

#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace qhj {

class OracleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// -psi'' + V psi = E psi on the interior nodes of [lo, hi] with Dirichlet walls at both ends.
struct TridiagonalSystem {
    Interval domain;
    int points = 0;  // interior nodes
    double h = 0.0;
    std::vector<double> x, diag, offdiag;
};

/// Falls back to N+1 nodes once when V is not finite at some node.
TridiagonalSystem discretize(const std::function<double(double)>& V, const Interval& domain, int N);

struct GridSpectrum {
    Interval domain;
    int points = 0;
    std::vector<double> x;
    std::vector<double> eigenvalues;                 // ascending
    std::vector<std::vector<double>> eigenvectors;   // unit L2 norm on the grid; empty unless requested
    std::vector<int> node_counts;
};

GridSpectrum eigen_lowest(const TridiagonalSystem& sys, int k, bool with_vectors = true);

/// Sign changes, skipping samples with |psi| below rel * max|psi|.
int count_nodes(const std::vector<double>& psi, double rel = 1e-8);

struct LevelCertificate {
    double energy = 0.0;        // Richardson value from the two finest grids
    double achieved_tol = 0.0;  // |change of the extrapolated value| / max(1, |E|)
    bool converged = false;
    int node_count = -1;
};

struct RefinedSpectrum {
    GridSpectrum finest;
    std::vector<LevelCertificate> levels;
    std::vector<int> grid_points;                 // interior nodes per refinement stage
    std::vector<std::vector<double>> raw_history; // raw eigenvalues per stage
    bool certified = false;
    std::vector<std::string> notes;
};

/// Doubles the grid (N -> 2N+1, which halves h) until every extrapolated level
/// moves by less than tol * max(1, |E|) or max_doublings is reached.
RefinedSpectrum refine_to(const std::function<double(double)>& V, const Interval& domain, int k, double tol,
                          int initial_points, int max_doublings = 7);

/// Grid size used when callers do not specify one; QHJ_ORACLE_POINTS overrides it.
int default_oracle_points();

/// Finite domain ends stay put; infinite ends are cut where the WKB decay
/// exponent beyond the turning point of e_max reaches 20.
Interval truncated_domain(const PotentialSpec& spec, double e_max, std::vector<std::string>* notes = nullptr);

/// Lowest k levels of a catalog potential on an automatically sized box.
RefinedSpectrum oracle_spectrum(const PotentialSpec& spec, int k, double tol = 1e-7);

void write_eigenfunction_csv(std::ostream& os, const GridSpectrum& g);

}  // namespace qhj
