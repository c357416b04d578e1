#pragma once

// Beam-splitter collision channel L(rho) = Tr_b S (rho x sigma) S^dag with
// S = exp(lambda (a^dag b - a b^dag)), and its iteration.

#include "repcol/fock.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace repcol {

class ChannelParams {
public:
    // 0 < lambda <= pi/2.
    ChannelParams(double lambda, FockCutoff cutoff);

    double lambda() const noexcept { return lambda_; }
    double s() const noexcept { return s_; }
    double c() const noexcept { return c_; }
    double transmittance() const noexcept { return c_; }
    FockCutoff cutoff() const noexcept { return cutoff_; }

private:
    double lambda_;
    double s_;
    double c_;
    FockCutoff cutoff_;
};

// sin/cos of the coupling with cos(pi/2) snapped to exactly 0.
double coupling_sin(double lambda);
double coupling_cos(double lambda);

// Eigensystems of the number-conserving blocks of the generator
// a^dag b - a b^dag. They do not depend on lambda, so one spectrum serves
// every coupling in a schedule.
class BeamSplitterSpectrum {
public:
    explicit BeamSplitterSpectrum(FockCutoff cutoff);

    FockCutoff cutoff() const noexcept { return cutoff_; }
    int block_count() const noexcept { return static_cast<int>(vectors_.size()); }
    int block_first(int total) const noexcept;
    int block_size(int total) const noexcept;

    // exp(lambda * T_N) for the block of total photon number N.
    RMatrix block_exponential(int total, double lambda) const;

private:
    FockCutoff cutoff_;
    std::vector<RMatrix> vectors_;
    std::vector<RVector> values_;
};

// S restricted to the truncated two-mode space, stored as one real block
// per total photon number N = m + n. Block rows/columns are indexed by the
// a-mode level m from block_first(N). Any finite lambda is accepted here,
// including 0 (identity) for limit studies.
class BeamSplitter {
public:
    BeamSplitter(double lambda, FockCutoff cutoff);
    BeamSplitter(const BeamSplitterSpectrum& spectrum, double lambda);

    double lambda() const noexcept { return lambda_; }
    FockCutoff cutoff() const noexcept { return cutoff_; }
    int block_count() const noexcept { return static_cast<int>(blocks_.size()); }
    int block_first(int total) const noexcept;
    const RMatrix& block(int total) const { return blocks_.at(static_cast<std::size_t>(total)); }

    // <m, n| S |p, q>; zero unless m + n == p + q.
    double amplitude(int m, int n, int p, int q) const;

    // Dense (n_max+1)^2 square matrix in the joint basis; guarded by
    // max_joint_dim().
    CMatrix dense() const;

private:
    double lambda_;
    FockCutoff cutoff_;
    std::vector<RMatrix> blocks_;
};

CMatrix beam_splitter_unitary(const ChannelParams& params);

// max |S^dag (a x 1) S - (c a x 1 + s 1 x b)| over input basis states with
// total photon number <= n_max - 1, where truncation is exact. With
// exact_subspace_only = false every column is included.
double heisenberg_check(const ChannelParams& params, bool exact_subspace_only = true);

// The channel for a fixed reservoir state. Stationary (diagonal) sigma
// gives a phase-covariant map that is applied band by band through real
// transfer matrices; any other sigma goes through banded Kraus operators
// built from its eigendecomposition.
class CollisionChannel {
public:
    CollisionChannel(const BeamSplitter& splitter, const DensityMatrix& sigma);
    CollisionChannel(const DensityMatrix& sigma, const ChannelParams& params);

    DensityMatrix apply(const DensityMatrix& rho) const;

    bool phase_covariant() const noexcept { return !transfer_.empty(); }
    std::size_t kraus_count() const noexcept { return kraus_.size(); }
    FockCutoff cutoff() const noexcept { return cutoff_; }

private:
    struct Diagonal {
        int offset;   // column - row
        int m_begin;  // first row
        std::vector<cplx> values;
    };
    struct Kraus {
        std::vector<Diagonal> diagonals;
        int row_lo;
        int row_hi;  // exclusive
    };

    void build_transfer(const BeamSplitter& splitter, const DensityMatrix& sigma);
    void build_kraus(const BeamSplitter& splitter, const DensityMatrix& sigma);
    CMatrix apply_transfer(const CMatrix& rho) const;
    CMatrix apply_kraus(const CMatrix& rho) const;

    FockCutoff cutoff_;
    std::vector<RMatrix> transfer_;  // band delta: (d - delta) square
    std::vector<Kraus> kraus_;
};

DensityMatrix apply_channel(const DensityMatrix& rho, const DensityMatrix& sigma,
                            const ChannelParams& params);

// Occupation allowed on the top two Fock levels of any state fed to or
// produced by the channel.
inline constexpr double kChannelTailGuard = 1e-6;

struct IterationOptions {
    double tol = 1e-9;
    int max_steps = 10000;
    bool keep_states = false;
};

// ρ_0 ... ρ_K. When keep_states is false `states` holds only the first and
// last iterate; the per-step series always cover every step.
struct RelaxationTrajectory {
    std::vector<DensityMatrix> states;
    std::vector<double> distances;     // trace distance rho_k -> rho_{k+1}
    std::vector<double> mean_photon;   // per state
    std::vector<double> purity;        // per state
    std::optional<int> converged_at;

    int steps() const noexcept { return static_cast<int>(distances.size()); }
    const DensityMatrix& final_state() const { return states.back(); }
};

RelaxationTrajectory iterate_to_fixed_point(const DensityMatrix& rho0, const DensityMatrix& sigma,
                                            const ChannelParams& params,
                                            const IterationOptions& options = {});

enum class ScheduleKind { Constant, VanHoveFixedK, VanHoveRunning };

struct CouplingSchedule {
    ScheduleKind kind;
    std::vector<double> values;  // lambda_k for k = 0 .. K-1

    static CouplingSchedule constant(double lambda, int steps);
    // K steps of lambda = 1/sqrt(K).
    static CouplingSchedule van_hove_fixed(int k);
    // lambda_k = 1/sqrt(k + 1), k = 0 .. steps-1.
    static CouplingSchedule van_hove_running(int steps);
};

RelaxationTrajectory run_schedule(const DensityMatrix& rho0, const DensityMatrix& sigma,
                                  const CouplingSchedule& schedule, FockCutoff cutoff,
                                  bool keep_states = false);

// step, trace_distance_to_next, mean_photon_number, purity
void write_trajectory_csv(const RelaxationTrajectory& trajectory, std::ostream& out);

}  // namespace repcol
