#include "spinsync/perturbation.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "spinsync/error.hpp"

namespace spinsync {

namespace {

void require_eta(double eta) {
    if (!(eta > 0.0 && eta < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "threshold eta must lie in (0, 1)");
    }
}

/// Upper (k > 0) or lower (k < 0) triangle slots of sector k.
std::vector<std::pair<int, int>> slots_of(int k) {
    auto slots = sector_slots(std::abs(k));
    if (k < 0) {
        for (auto& [i, j] : slots) {
            std::swap(i, j);
        }
    }
    return slots;
}

Eigen::VectorXcd gather(const Matrix3& m, const std::vector<std::pair<int, int>>& slots) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(slots.size()));
    for (std::size_t s = 0; s < slots.size(); ++s) {
        v(static_cast<Eigen::Index>(s)) = m(slots[s].first, slots[s].second);
    }
    return v;
}

void scatter(Matrix3& m, const std::vector<std::pair<int, int>>& slots, const Eigen::VectorXcd& v) {
    for (std::size_t s = 0; s < slots.size(); ++s) {
        m(slots[s].first, slots[s].second) = v(static_cast<Eigen::Index>(s));
    }
}

constexpr int kSectors[] = {1, 2, -1, -2};

}  // namespace

Matrix3 apply_signal(const Matrix3& hext, const Matrix3& rho) {
    return Complex(0.0, -1.0) * (hext * rho - rho * hext);
}

PerturbativeSolver::PerturbativeSolver(const LimitCycleSpec& lc)
    : lc_(lc), liouvillian_(build_liouvillian(lc)), rho0_(steady_state(liouvillian_)) {
    Eigen::Matrix<Complex, 4, 3> a;
    a.topRows<3>() = liouvillian_.diag_block;
    a.row(3).setOnes();
    population_solver_.compute(a);
    for (int k : kSectors) {
        sectors_.push_back(factor_sector(k));
    }
}

PerturbativeSolver::SectorSolve PerturbativeSolver::factor_sector(int k) const {
    SectorSolve out;
    out.k = k;
    out.slots = slots_of(k);
    const Eigen::MatrixXcd block = liouvillian_.sector_block(k);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(block);
    const auto& sv = svd.singularValues();
    out.invertible = sv(sv.size() - 1) > 1e-12 * sv(0);
    if (out.invertible) {
        out.inverse = block.inverse();
    }
    return out;
}

Matrix3 PerturbativeSolver::solve_traceless(const Matrix3& rhs) const {
    Matrix3 x = Matrix3::Zero();

    // Populations: the block is rank deficient along rho^(0); the appended
    // trace row removes that freedom.
    Eigen::Matrix<Complex, 4, 1> b;
    b.head<3>() = rhs.diagonal();
    b(3) = 0.0;
    if (b.cwiseAbs().maxCoeff() > 0.0) {
        x.diagonal() = population_solver_.solve(b);
    }

    for (const auto& sector : sectors_) {
        const Eigen::VectorXcd source = gather(rhs, sector.slots);
        if (source.cwiseAbs().maxCoeff() == 0.0) {
            continue;
        }
        if (!sector.invertible) {
            throw Error(ErrorKind::SingularCoherenceBlock,
                        "signal drives an undamped coherence sector " + std::to_string(sector.k));
        }
        scatter(x, sector.slots, sector.inverse * source);
    }
    return x;
}

DensityMatrix PerturbativeSolver::first_order(const SignalSpec& signal) const {
    const Matrix3 source = apply_signal(build_hext(signal), rho0_.entries);
    DensityMatrix rho1;
    rho1.order = 1;
    rho1.entries = solve_traceless(-source);
    rho1.entries.diagonal().setZero();  // populations are untouched to first order
    return rho1;
}

std::vector<DensityMatrix> PerturbativeSolver::orders(const SignalSpec& signal, int max_order) const {
    if (max_order < 0) {
        throw Error(ErrorKind::InvalidArgument, "perturbative order must be nonnegative");
    }
    const Matrix3 h = build_hext(signal);
    std::vector<DensityMatrix> out;
    out.reserve(static_cast<std::size_t>(max_order) + 1);
    out.push_back(rho0_);
    for (int k = 1; k <= max_order; ++k) {
        DensityMatrix next;
        next.order = k;
        next.entries = solve_traceless(-apply_signal(h, out.back().entries));
        if (k == 1) {
            next.entries.diagonal().setZero();
        }
        out.push_back(next);
    }
    return out;
}

SyncResult PerturbativeSolver::sync(const SignalSpec& signal, double eta) const {
    require_eta(eta);
    SyncResult r;
    r.eta = eta;
    r.norm0 = rho0_.hs_norm();
    const Matrix3 h = build_hext(signal);
    const Matrix3 source = apply_signal(h, rho0_.entries);
    if (source.norm() <= 1e-14 * h.norm()) {
        r.rho1.order = 1;
        return r;
    }
    r.rho1 = first_order(signal);
    r.norm1 = r.rho1.hs_norm();
    if (r.norm1 == 0.0) {
        return r;
    }
    r.terms = phase_distribution_terms(r.rho1.entries);
    const PhasePeak peak = max_shifted_phase(r.terms);
    r.epsilon = eta * r.norm0 / r.norm1;
    r.s = *r.epsilon * peak.value;
    r.phi_star = peak.phi_star;
    return r;
}

DensityMatrix PerturbativeSolver::full_steady_state(const SignalSpec& signal, double epsilon) const {
    if (!std::isfinite(epsilon) || epsilon < 0.0) {
        throw Error(ErrorKind::InvalidArgument, "signal strength must be finite and nonnegative");
    }
    const SuperMatrix g = liouvillian_.full + epsilon * hamiltonian_superop(build_hext(signal));
    Eigen::JacobiSVD<SuperMatrix> svd(g, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (!(sv(7) > 1e-10 * sv(0))) {
        throw Error(ErrorKind::DegenerateSteadyState, "driven generator has more than one stationary state");
    }
    Matrix3 rho = unvectorize(svd.matrixV().col(8));
    rho /= rho.trace();
    DensityMatrix out;
    out.entries = 0.5 * (rho + rho.adjoint());
    out.order = DensityMatrix::kFull;
    return out;
}

DensityMatrix first_order(const LimitCycleSpec& lc, const SignalSpec& signal) {
    return PerturbativeSolver(lc).first_order(signal);
}

DensityMatrix kth_order(const LimitCycleSpec& lc, const SignalSpec& signal, int k) {
    return PerturbativeSolver(lc).orders(signal, k).back();
}

double epsilon_for_threshold(const DensityMatrix& rho0, const DensityMatrix& rho1, double eta) {
    require_eta(eta);
    const double n1 = rho1.hs_norm();
    if (n1 == 0.0) {
        throw Error(ErrorKind::ZeroResponse, "signal does not couple to first order; epsilon is unbounded");
    }
    return eta * rho0.hs_norm() / n1;
}

SyncResult sync_measure(const LimitCycleSpec& lc, const SignalSpec& signal, double eta) {
    return PerturbativeSolver(lc).sync(signal, eta);
}

DensityMatrix full_steady_state(const LimitCycleSpec& lc, const SignalSpec& signal, double epsilon) {
    return PerturbativeSolver(lc).full_steady_state(signal, epsilon);
}

double p_avg(const Matrix3& rho, const Matrix3& rho0) {
    return (spin_operators().sz * (rho - rho0)).trace().real();
}

double p_max(const Matrix3& rho, const Matrix3& rho0) {
    return (rho - rho0).diagonal().cwiseAbs().maxCoeff();
}

Matrix3 EigencoherenceDecomposition::reconstruct() const {
    Matrix3 rho = Matrix3::Zero();
    for (const auto& m : modes) {
        if (m.g != 0.0) {
            rho -= m.mu * (m.g / m.gamma);
        }
    }
    return rho;
}

double EigencoherenceDecomposition::mode_norm() const {
    double sum = 0.0;
    for (const auto& m : modes) {
        if (m.g != 0.0) {
            sum += std::norm(m.g / m.gamma);
        }
    }
    return std::sqrt(sum);
}

EigencoherenceDecomposition eigencoherences(const LimitCycleSpec& lc, const SignalSpec& signal) {
    const PerturbativeSolver solver(lc);
    const Matrix3 source = apply_signal(build_hext(signal), solver.rho0().entries);

    EigencoherenceDecomposition out;
    out.orthonormal = true;
    for (int k : kSectors) {
        const auto slots = slots_of(k);
        const Eigen::MatrixXcd block = solver.liouvillian().sector_block(k);
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(block);
        if (es.info() != Eigen::Success) {
            throw Error(ErrorKind::NonDiagonalizable, "eigensolver failed on sector " + std::to_string(k));
        }
        const Eigen::MatrixXcd v = es.eigenvectors();
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(v);
        const auto& sv = svd.singularValues();
        if (!(sv(sv.size() - 1) > 0.0) || sv(0) / sv(sv.size() - 1) > 1e8) {
            throw Error(ErrorKind::NonDiagonalizable,
                        "coherence block of sector " + std::to_string(k) + " is not diagonalizable");
        }
        const Eigen::Index n = v.cols();
        if ((v.adjoint() * v - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10) {
            out.orthonormal = false;
        }
        const Eigen::VectorXcd g = v.partialPivLu().solve(gather(source, slots));
        for (Eigen::Index l = 0; l < n; ++l) {
            Eigencoherence mode;
            mode.sector = k;
            mode.gamma = es.eigenvalues()(l);
            mode.mu = Matrix3::Zero();
            scatter(mode.mu, slots, v.col(l));
            mode.g = g(l);
            if (std::abs(mode.gamma) == 0.0 && std::abs(mode.g) > 0.0) {
                throw Error(ErrorKind::SingularCoherenceBlock, "driven eigencoherence does not decay");
            }
            out.modes.push_back(mode);
        }
    }
    return out;
}

}  // namespace spinsync
