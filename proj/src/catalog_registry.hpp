#pragma once

#include "qhj/catalog.hpp"

#include <functional>
#include <string>
#include <vector>

namespace qhj::detail {

struct CatalogEntry {
    std::string id;
    std::vector<ParamInfo> schema;
    /// Builds the entry from a complete, range-checked parameter set; throws
    /// InvalidParameters for constraints that couple several parameters.
    std::function<PotentialSpec(const ParamSet&)> build;
};

const std::vector<CatalogEntry>& catalog_entries();

/// l_phi = K / J2, the linear coefficient of the log-derivative equation in y.
RationalFunction phi_linear_term(const PotentialSpec& spec);

/// R(E) of the Riccati problem built from the Schrodinger equation in y.  In chi
/// form the linear term is removed by the shift chi = phi + l/2.
std::function<RiccatiProblem(double)> riccati_builder(const PotentialSpec& spec, std::vector<cplx> fixed_poles,
                                                      int infinity_pole_order);

/// Smallest value of V on a sample grid covering the well region of the domain.
double sampled_minimum(const std::function<double(double)>& V, const Interval& domain);

}  // namespace qhj::detail
