#pragma once

// State functionals: purity, entropy, trace distance and the quadrature
// coherence scale C^2.

#include "repcol/fock.hpp"

#include <iosfwd>

#include "json.hpp"

namespace repcol {

class GaussianState;

// Tr(rho^2), clamped to (0, 1 + 1e-10].
double purity(const DensityMatrix& rho);

// -sum p ln p over eigenvalues p >= 1e-14. Eigenvalues below -1e-8 are
// rejected as unphysical.
double von_neumann_entropy(const DensityMatrix& rho);

// (||[rho, X]||_F^2 + ||[rho, P]||_F^2) / (2 Tr rho^2) with
// X = (a + a^dag)/sqrt2, P = i(a^dag - a)/sqrt2. The top four Fock levels
// may hold at most 1e-8 of the population.
double qcs_squared(const DensityMatrix& rho);

// Tr(V^-1) / 2.
double qcs_gaussian(const GaussianState& g);

// Half the trace norm of rho1 - rho2.
double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2);

struct MeasureReport {
    double purity;
    double entropy;
    double qcs_squared;
    double mean_photon;
};

MeasureReport measure_report(const DensityMatrix& rho);

// Fixed field order: purity, entropy, qcs_squared, mean_photon.
void write_measure_csv_header(std::ostream& out);
void write_measure_csv_row(const MeasureReport& r, std::ostream& out);
nlohmann::ordered_json to_json(const MeasureReport& r);

}  // namespace repcol
