#pragma once

// Truncated Fock-space states and operators for one or two bosonic modes.
//
// Basis ordering is fixed: Fock index ascending within a mode, and for two
// modes the joint index is a * (n_max_b + 1) + b (a is the slow index).

#include "repcol/linalg.hpp"

#include <array>
#include <iosfwd>
#include <string>

#include "json.hpp"

namespace repcol {

class FockCutoff {
public:
    // Highest retained level; the space has n_max + 1 states. n_max >= 1.
    explicit FockCutoff(int n_max);

    int n_max() const noexcept { return n_max_; }
    int dim() const noexcept { return n_max_ + 1; }

    friend bool operator==(FockCutoff, FockCutoff) = default;

private:
    int n_max_;
};

// Largest joint dimension that tensor_product and dense two-mode builders
// will allocate. 4096 unless REPCOL_MAX_DIM is set.
int max_joint_dim();

// Dense Hermitian unit-trace matrix on one or two truncated modes.
// Construction checks Hermiticity (1e-12 entrywise) and trace (1e-10);
// positivity costs an eigendecomposition and is checked on request.
class DensityMatrix {
public:
    static constexpr double kHermiticityTol = 1e-12;
    static constexpr double kTraceTol = 1e-10;
    static constexpr double kPositivityTol = 1e-10;

    static DensityMatrix single_mode(CMatrix m, FockCutoff cutoff);
    static DensityMatrix two_mode(CMatrix m, FockCutoff a, FockCutoff b);

    const CMatrix& matrix() const noexcept { return m_; }
    int dim() const noexcept { return static_cast<int>(m_.rows()); }
    int mode_count() const noexcept { return modes_; }
    FockCutoff cutoff(int mode = 0) const { return cutoffs_.at(static_cast<std::size_t>(mode)); }

    double min_eigenvalue() const;
    // Throws ErrorKind::Unphysical when min_eigenvalue() < -tol.
    void check_positive(double tol = kPositivityTol) const;

private:
    DensityMatrix(CMatrix m, int modes, std::array<FockCutoff, 2> cutoffs);

    CMatrix m_;
    int modes_;
    std::array<FockCutoff, 2> cutoffs_;
};

struct ModeOperators {
    CMatrix annihilate;
    CMatrix create;
    CMatrix number;
};

ModeOperators mode_operators(FockCutoff cutoff);

// exp(z a^dag - conj(z) a) on the truncated space.
CMatrix displacement_matrix(cplx z, FockCutoff cutoff);

DensityMatrix fock_state(int n, FockCutoff cutoff);

// Z^-1 exp(-beta n), renormalised on the truncated space. Rejects cutoffs
// whose untruncated tail mass exp(-beta (n_max+1)) exceeds 1e-8.
DensityMatrix thermal_state(double beta, FockCutoff cutoff);

// Inverse temperature whose thermal state has mean photon number nbar.
double thermal_beta(double nbar);

// |alpha><alpha|. Requires |alpha|^2 <= n_max / 4 and a Poisson tail mass
// beyond n_max of at most 1e-8.
DensityMatrix coherent_state(cplx alpha, FockCutoff cutoff);

DensityMatrix tensor_product(const DensityMatrix& rho_a, const DensityMatrix& rho_b);
DensityMatrix partial_trace_b(const DensityMatrix& rho_ab);

// D(alpha) rho D(alpha)^dag for a single-mode state.
DensityMatrix displace(const DensityMatrix& rho, cplx alpha);

double mean_photon_number(const DensityMatrix& rho);

// Total population of the top `levels` Fock levels of a single-mode state.
double top_level_occupation(const DensityMatrix& rho, int levels);

// {dim, mode_count, n_max, re, im}; n_max is an integer for one mode and
// [n_max_a, n_max_b] for two. Rows are outer arrays.
nlohmann::json to_json(const DensityMatrix& rho);
DensityMatrix density_matrix_from_json(const nlohmann::json& j);

}  // namespace repcol
