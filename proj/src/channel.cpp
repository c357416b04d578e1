#include "repcol/channel.hpp"

#include "repcol/error.hpp"
#include "repcol/format.hpp"
#include "repcol/kernels.hpp"
#include "repcol/measures.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

namespace repcol {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
// Kraus entries below this magnitude are dropped.
constexpr double kKrausDrop = 1e-18;
// Relative eigenvalue floor when decomposing a non-stationary sigma.
constexpr double kSigmaRankTol = 1e-15;
constexpr double kStationaryTol = 1e-15;

int first_in_block(int total, int n_max) { return std::max(0, total - n_max); }
int size_of_block(int total, int n_max) {
    return std::min(total, n_max) - first_in_block(total, n_max) + 1;
}

void check_tail(const DensityMatrix& rho, const char* what) {
    const double top = top_level_occupation(rho, 2);
    if (top > kChannelTailGuard)
        fail(ErrorKind::Cutoff, std::string(what) + ": occupation " + format_number(top) +
                                    " of the top two Fock levels exceeds " +
                                    format_number(kChannelTailGuard) + "; raise n_max");
}

}  // namespace

double coupling_sin(double lambda) {
    return std::abs(lambda - kHalfPi) < 1e-15 ? 1.0 : std::sin(lambda);
}

double coupling_cos(double lambda) {
    return std::abs(lambda - kHalfPi) < 1e-15 ? 0.0 : std::cos(lambda);
}

ChannelParams::ChannelParams(double lambda, FockCutoff cutoff)
    : lambda_(lambda), s_(coupling_sin(lambda)), c_(coupling_cos(lambda)), cutoff_(cutoff) {
    if (!(lambda > 0.0) || lambda > kHalfPi + 1e-15)
        fail(ErrorKind::InvalidArgument,
             "coupling lambda must lie in (0, pi/2], got " + format_number(lambda));
}

// --- spectrum -------------------------------------------------------------

BeamSplitterSpectrum::BeamSplitterSpectrum(FockCutoff cutoff) : cutoff_(cutoff) {
    const int n_max = cutoff.n_max();
    const int blocks = 2 * n_max + 1;
    vectors_.reserve(blocks);
    values_.reserve(blocks);
    for (int total = 0; total < blocks; ++total) {
        const int first = first_in_block(total, n_max);
        const int size = size_of_block(total, n_max);
        // The generator block is antisymmetric tridiagonal with couplings
        // t_k = sqrt(m+1) sqrt(N-m). Conjugating by diag(i^k) turns it into
        // -i times the symmetric tridiagonal matrix with the same t_k.
        RVector diag = RVector::Zero(size);
        RVector sub(std::max(size - 1, 0));
        for (int k = 0; k + 1 < size; ++k) {
            const int m = first + k;
            sub[k] = std::sqrt(static_cast<double>(m + 1)) * std::sqrt(static_cast<double>(total - m));
        }
        if (size == 1) {
            vectors_.push_back(RMatrix::Ones(1, 1));
            values_.push_back(RVector::Zero(1));
            continue;
        }
        Eigen::SelfAdjointEigenSolver<RMatrix> eig;
        eig.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
        if (eig.info() != Eigen::Success)
            fail(ErrorKind::Numerical, "beam splitter block eigensolver failed");
        vectors_.push_back(eig.eigenvectors());
        values_.push_back(eig.eigenvalues());
    }
}

int BeamSplitterSpectrum::block_first(int total) const noexcept {
    return first_in_block(total, cutoff_.n_max());
}

int BeamSplitterSpectrum::block_size(int total) const noexcept {
    return size_of_block(total, cutoff_.n_max());
}

RMatrix BeamSplitterSpectrum::block_exponential(int total, double lambda) const {
    const RMatrix& q = vectors_.at(static_cast<std::size_t>(total));
    const RVector& w = values_.at(static_cast<std::size_t>(total));
    const auto size = q.rows();
    // exp(lambda T) = J Q exp(-i lambda W) Q^T J^-1, J = diag(i^k).
    RVector cosw(size), sinw(size);
    for (Eigen::Index j = 0; j < size; ++j) {
        cosw[j] = std::cos(lambda * w[j]);
        sinw[j] = std::sin(lambda * w[j]);
    }
    const RMatrix re = q * cosw.asDiagonal() * q.transpose();
    const RMatrix im = q * sinw.asDiagonal() * q.transpose();  // coefficient of -i
    RMatrix out(size, size);
    for (Eigen::Index b = 0; b < size; ++b) {
        for (Eigen::Index a = 0; a < size; ++a) {
            // i^(a-b) (re - i im), real part.
            switch (((a - b) % 4 + 4) % 4) {
                case 0: out(a, b) = re(a, b); break;
                case 1: out(a, b) = im(a, b); break;
                case 2: out(a, b) = -re(a, b); break;
                default: out(a, b) = -im(a, b); break;
            }
        }
    }
    return out;
}

// --- beam splitter --------------------------------------------------------

BeamSplitter::BeamSplitter(double lambda, FockCutoff cutoff)
    : BeamSplitter(BeamSplitterSpectrum(cutoff), lambda) {}

BeamSplitter::BeamSplitter(const BeamSplitterSpectrum& spectrum, double lambda)
    : lambda_(lambda), cutoff_(spectrum.cutoff()) {
    if (!std::isfinite(lambda)) fail(ErrorKind::InvalidArgument, "beam splitter angle must be finite");
    blocks_.reserve(static_cast<std::size_t>(spectrum.block_count()));
    for (int total = 0; total < spectrum.block_count(); ++total)
        blocks_.push_back(spectrum.block_exponential(total, lambda));
}

int BeamSplitter::block_first(int total) const noexcept {
    return first_in_block(total, cutoff_.n_max());
}

double BeamSplitter::amplitude(int m, int n, int p, int q) const {
    const int total = m + n;
    if (total != p + q) return 0.0;
    const int n_max = cutoff_.n_max();
    if (m < 0 || n < 0 || p < 0 || q < 0 || m > n_max || n > n_max || p > n_max || q > n_max) return 0.0;
    const int first = block_first(total);
    return blocks_[static_cast<std::size_t>(total)](m - first, p - first);
}

CMatrix BeamSplitter::dense() const {
    const int d = cutoff_.dim();
    const long joint = static_cast<long>(d) * d;
    if (joint > max_joint_dim())
        fail(ErrorKind::Resource, "dense beam splitter of dimension " + std::to_string(joint) +
                                      " exceeds limit " + std::to_string(max_joint_dim()));
    CMatrix s = CMatrix::Zero(joint, joint);
    const int n_max = cutoff_.n_max();
    for (int total = 0; total < block_count(); ++total) {
        const int first = block_first(total);
        const RMatrix& blk = blocks_[static_cast<std::size_t>(total)];
        for (Eigen::Index i = 0; i < blk.rows(); ++i) {
            const int m = first + static_cast<int>(i);
            for (Eigen::Index j = 0; j < blk.cols(); ++j) {
                const int p = first + static_cast<int>(j);
                s(m * (n_max + 1) + (total - m), p * (n_max + 1) + (total - p)) = blk(i, j);
            }
        }
    }
    return s;
}

CMatrix beam_splitter_unitary(const ChannelParams& params) {
    return BeamSplitter(params.lambda(), params.cutoff()).dense();
}

double heisenberg_check(const ChannelParams& params, bool exact_subspace_only) {
    const FockCutoff cutoff = params.cutoff();
    const int d = cutoff.dim();
    const CMatrix s = beam_splitter_unitary(params);
    const ModeOperators ops = mode_operators(cutoff);
    const CMatrix id = CMatrix::Identity(d, d);
    CMatrix a_sys(d * d, d * d), b_res(d * d, d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            a_sys.block(i * d, j * d, d, d) = ops.annihilate(i, j) * id;
            b_res.block(i * d, j * d, d, d) = id(i, j) * ops.annihilate;
        }
    const CMatrix residual = s.adjoint() * a_sys * s - (params.c() * a_sys + params.s() * b_res);
    double worst = 0.0;
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) {
            if (exact_subspace_only && m + n > cutoff.n_max() - 1) continue;
            worst = std::max(worst, residual.col(m * d + n).cwiseAbs().maxCoeff());
        }
    return worst;
}

// --- channel --------------------------------------------------------------

CollisionChannel::CollisionChannel(const DensityMatrix& sigma, const ChannelParams& params)
    : CollisionChannel(BeamSplitter(params.lambda(), params.cutoff()), sigma) {}

CollisionChannel::CollisionChannel(const BeamSplitter& splitter, const DensityMatrix& sigma)
    : cutoff_(splitter.cutoff()) {
    if (sigma.mode_count() != 1) fail(ErrorKind::Shape, "reservoir state must be single-mode");
    if (sigma.cutoff() != cutoff_)
        fail(ErrorKind::Shape, "reservoir cutoff " + std::to_string(sigma.cutoff().n_max()) +
                                   " differs from channel cutoff " + std::to_string(cutoff_.n_max()));
    if (is_diagonal(sigma.matrix(), kStationaryTol))
        build_transfer(splitter, sigma);
    else
        build_kraus(splitter, sigma);
}

void CollisionChannel::build_transfer(const BeamSplitter& splitter, const DensityMatrix& sigma) {
    const int n_max = cutoff_.n_max();
    const int d = cutoff_.dim();
    std::vector<std::pair<int, double>> weights;
    for (int q = 0; q < d; ++q) {
        const double w = sigma.matrix()(q, q).real();
        if (w > 0.0) weights.emplace_back(q, w);
    }
    // Band delta collects rho(m, m - delta), m = delta .. n_max. Output
    // entry (m, m-delta) receives sum_q w_q S(m,n;p,q) S(m-delta,n;p-delta,q)
    // rho(p, p-delta) with n = p + q - m fixed by number conservation.
    transfer_.resize(static_cast<std::size_t>(d));
    for (int delta = 0; delta < d; ++delta) {
        const int len = d - delta;
        RMatrix t = RMatrix::Zero(len, len);
        for (int pi = 0; pi < len; ++pi) {
            const int p = pi + delta;
            for (int mi = 0; mi < len; ++mi) {
                const int m = mi + delta;
                double acc = 0.0;
                for (const auto& [q, w] : weights) {
                    const int n = p + q - m;
                    if (n < 0 || n > n_max) continue;
                    acc += w * splitter.amplitude(m, n, p, q) * splitter.amplitude(m - delta, n, p - delta, q);
                }
                t(mi, pi) = acc;
            }
        }
        transfer_[static_cast<std::size_t>(delta)] = std::move(t);
    }
}

void CollisionChannel::build_kraus(const BeamSplitter& splitter, const DensityMatrix& sigma) {
    const int n_max = cutoff_.n_max();
    const int d = cutoff_.dim();
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(sigma.matrix());
    if (eig.info() != Eigen::Success) fail(ErrorKind::Numerical, "reservoir eigensolver failed");
    const double top = eig.eigenvalues().maxCoeff();
    for (Eigen::Index j = 0; j < eig.eigenvalues().size(); ++j) {
        const double w = eig.eigenvalues()[j];
        if (w < -DensityMatrix::kPositivityTol)
            fail(ErrorKind::Unphysical, "reservoir state has negative eigenvalue " + format_number(w));
        if (w <= kSigmaRankTol * top) continue;
        const CVector psi = std::sqrt(w) * eig.eigenvectors().col(j);
        // K_n = <n|_b S |psi>_b; its diagonal with offset o = n - q carries
        // psi_q S(m, n; m + o, q).
        for (int n = 0; n < d; ++n) {
            Kraus k{{}, d, 0};
            for (int q = 0; q < d; ++q) {
                if (std::abs(psi[q]) <= kKrausDrop) continue;
                const int offset = n - q;
                const int m_lo = std::max(0, -offset);
                const int m_hi = std::min(n_max, n_max - offset);
                int first = -1, last = -1;
                std::vector<cplx> vals;
                for (int m = m_lo; m <= m_hi; ++m) {
                    const cplx v = psi[q] * splitter.amplitude(m, n, m + offset, q);
                    vals.push_back(v);
                    if (std::abs(v) > kKrausDrop) {
                        if (first < 0) first = m;
                        last = m;
                    }
                }
                if (first < 0) continue;
                Diagonal diag{offset, first,
                              std::vector<cplx>(vals.begin() + (first - m_lo), vals.begin() + (last - m_lo) + 1)};
                k.row_lo = std::min(k.row_lo, first);
                k.row_hi = std::max(k.row_hi, last + 1);
                k.diagonals.push_back(std::move(diag));
            }
            if (!k.diagonals.empty()) kraus_.push_back(std::move(k));
        }
    }
}

CMatrix CollisionChannel::apply_transfer(const CMatrix& rho) const {
    const int d = cutoff_.dim();
    CMatrix out = CMatrix::Zero(d, d);
    std::vector<cplx> in_band(static_cast<std::size_t>(d)), out_band(static_cast<std::size_t>(d));
    for (int delta = 0; delta < d; ++delta) {
        const int len = d - delta;
        bool any = false;
        for (int i = 0; i < len; ++i) {
            in_band[static_cast<std::size_t>(i)] = rho(i + delta, i);
            any = any || in_band[static_cast<std::size_t>(i)] != cplx(0.0, 0.0);
        }
        if (!any) continue;
        const RMatrix& t = transfer_[static_cast<std::size_t>(delta)];
        kernels::rgemv_cplx(static_cast<std::size_t>(len), static_cast<std::size_t>(len), t.data(),
                            static_cast<std::size_t>(t.rows()), in_band.data(), out_band.data());
        for (int i = 0; i < len; ++i) {
            const cplx v = out_band[static_cast<std::size_t>(i)];
            if (delta == 0) {
                out(i, i) = v.real();
            } else {
                out(i + delta, i) = v;
                out(i, i + delta) = std::conj(v);
            }
        }
    }
    return out;
}

CMatrix CollisionChannel::apply_kraus(const CMatrix& rho) const {
    const int d = cutoff_.dim();
    const auto ud = static_cast<std::size_t>(d);
    CMatrix out = CMatrix::Zero(d, d);
    CMatrix t = CMatrix::Zero(d, d);
    for (const Kraus& k : kraus_) {
        const int rows = k.row_hi - k.row_lo;
        t.middleRows(k.row_lo, rows).setZero();
        // t = K rho, one diagonal at a time, column by column.
        for (const Diagonal& dg : k.diagonals) {
            const auto len = dg.values.size();
            for (int col = 0; col < d; ++col)
                kernels::cmul_acc(dg.values.data(), &rho(dg.m_begin + dg.offset, col), &t(dg.m_begin, col), len);
        }
        // out += t K^dag: column m' gathers conj(K(m', m'+o)) t(:, m'+o).
        for (const Diagonal& dg : k.diagonals) {
            for (std::size_t i = 0; i < dg.values.size(); ++i) {
                const int mp = dg.m_begin + static_cast<int>(i);
                kernels::caxpy(std::conj(dg.values[i]), &t(k.row_lo, mp + dg.offset), &out(k.row_lo, mp),
                               static_cast<std::size_t>(rows));
            }
        }
    }
    (void)ud;
    return 0.5 * (out + out.adjoint());
}

DensityMatrix CollisionChannel::apply(const DensityMatrix& rho) const {
    if (rho.mode_count() != 1) fail(ErrorKind::Shape, "channel input must be single-mode");
    if (rho.cutoff() != cutoff_)
        fail(ErrorKind::Shape, "channel input cutoff " + std::to_string(rho.cutoff().n_max()) +
                                   " differs from channel cutoff " + std::to_string(cutoff_.n_max()));
    CMatrix out = phase_covariant() ? apply_transfer(rho.matrix()) : apply_kraus(rho.matrix());
    return DensityMatrix::single_mode(std::move(out), cutoff_);
}

DensityMatrix apply_channel(const DensityMatrix& rho, const DensityMatrix& sigma, const ChannelParams& params) {
    if (rho.mode_count() != 1 || sigma.mode_count() != 1)
        fail(ErrorKind::Shape, "apply_channel needs single-mode states");
    if (rho.cutoff() != params.cutoff() || sigma.cutoff() != params.cutoff())
        fail(ErrorKind::Shape, "apply_channel: cutoff mismatch between states and parameters");
    check_tail(rho, "apply_channel input");
    check_tail(sigma, "apply_channel reservoir");
    if (mean_photon_number(rho) + mean_photon_number(sigma) >= params.cutoff().n_max())
        fail(ErrorKind::Cutoff, "apply_channel: combined mean photon number reaches n_max");
    return CollisionChannel(sigma, params).apply(rho);
}

// --- iteration ------------------------------------------------------------

namespace {

struct Recorder {
    RelaxationTrajectory traj;
    bool keep;

    void start(const DensityMatrix& rho0) {
        traj.states.push_back(rho0);
        traj.mean_photon.push_back(mean_photon_number(rho0));
        traj.purity.push_back(purity(rho0));
    }

    double step(const DensityMatrix& next) {
        const double dist = trace_distance(traj.states.back(), next);
        traj.distances.push_back(dist);
        traj.mean_photon.push_back(mean_photon_number(next));
        traj.purity.push_back(purity(next));
        if (keep || traj.states.size() == 1)
            traj.states.push_back(next);
        else
            traj.states.back() = next;
        return dist;
    }
};

}  // namespace

RelaxationTrajectory iterate_to_fixed_point(const DensityMatrix& rho0, const DensityMatrix& sigma,
                                            const ChannelParams& params, const IterationOptions& options) {
    if (!(options.tol >= 1e-12)) fail(ErrorKind::InvalidArgument, "iteration tolerance must be >= 1e-12");
    if (options.max_steps < 1) fail(ErrorKind::InvalidArgument, "max_steps must be positive");
    if (rho0.mode_count() != 1 || sigma.mode_count() != 1)
        fail(ErrorKind::Shape, "iterate_to_fixed_point needs single-mode states");
    if (rho0.cutoff() != params.cutoff() || sigma.cutoff() != params.cutoff())
        fail(ErrorKind::Shape, "iterate_to_fixed_point: cutoff mismatch");
    check_tail(rho0, "initial state");
    check_tail(sigma, "reservoir state");

    const CollisionChannel channel(sigma, params);
    Recorder rec{{}, options.keep_states};
    rec.start(rho0);
    DensityMatrix current = rho0;
    for (int k = 0; k < options.max_steps; ++k) {
        DensityMatrix next = channel.apply(current);
        check_tail(next, ("iterate " + std::to_string(k + 1)).c_str());
        const double dist = rec.step(next);
        current = std::move(next);
        if (dist < options.tol) {
            rec.traj.converged_at = k + 1;
            break;
        }
    }
    return std::move(rec.traj);
}

CouplingSchedule CouplingSchedule::constant(double lambda, int steps) {
    if (steps < 1) fail(ErrorKind::InvalidArgument, "schedule needs at least one step");
    return {ScheduleKind::Constant, std::vector<double>(static_cast<std::size_t>(steps), lambda)};
}

CouplingSchedule CouplingSchedule::van_hove_fixed(int k) {
    if (k < 1) fail(ErrorKind::InvalidArgument, "van Hove K must be positive");
    return {ScheduleKind::VanHoveFixedK,
            std::vector<double>(static_cast<std::size_t>(k), 1.0 / std::sqrt(static_cast<double>(k)))};
}

CouplingSchedule CouplingSchedule::van_hove_running(int steps) {
    if (steps < 1) fail(ErrorKind::InvalidArgument, "schedule needs at least one step");
    std::vector<double> v(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) v[static_cast<std::size_t>(k)] = 1.0 / std::sqrt(k + 1.0);
    return {ScheduleKind::VanHoveRunning, std::move(v)};
}

RelaxationTrajectory run_schedule(const DensityMatrix& rho0, const DensityMatrix& sigma,
                                  const CouplingSchedule& schedule, FockCutoff cutoff, bool keep_states) {
    if (schedule.values.empty()) fail(ErrorKind::InvalidArgument, "schedule is empty");
    for (double lambda : schedule.values)
        if (!(lambda > 0.0) || lambda > kHalfPi + 1e-15)
            fail(ErrorKind::InvalidArgument, "schedule coupling " + format_number(lambda) + " outside (0, pi/2]");
    if (rho0.cutoff() != cutoff || sigma.cutoff() != cutoff)
        fail(ErrorKind::Shape, "run_schedule: cutoff mismatch");
    check_tail(rho0, "initial state");
    check_tail(sigma, "reservoir state");

    const BeamSplitterSpectrum spectrum(cutoff);
    std::optional<CollisionChannel> channel;
    double channel_lambda = NAN;
    Recorder rec{{}, keep_states};
    rec.start(rho0);
    DensityMatrix current = rho0;
    for (std::size_t k = 0; k < schedule.values.size(); ++k) {
        const double lambda = schedule.values[k];
        if (!channel || lambda != channel_lambda) {
            channel.emplace(BeamSplitter(spectrum, lambda), sigma);
            channel_lambda = lambda;
        }
        DensityMatrix next = channel->apply(current);
        check_tail(next, ("schedule step " + std::to_string(k + 1)).c_str());
        rec.step(next);
        current = std::move(next);
    }
    return std::move(rec.traj);
}

void write_trajectory_csv(const RelaxationTrajectory& trajectory, std::ostream& out) {
    out << "step,trace_distance_to_next,mean_photon_number,purity\n";
    const std::size_t n = trajectory.mean_photon.size();
    for (std::size_t k = 0; k < n; ++k) {
        out << k << ',' << (k < trajectory.distances.size() ? format_number(trajectory.distances[k]) : "nan")
            << ',' << format_number(trajectory.mean_photon[k]) << ',' << format_number(trajectory.purity[k])
            << '\n';
    }
}

}  // namespace repcol
