#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "spinsync/lindblad.hpp"
#include "spinsync/signal.hpp"
#include "spinsync/spin_core.hpp"

namespace spinsync {

/// -i [H, rho]
Matrix3 apply_signal(const Matrix3& hext, const Matrix3& rho);

/// Synchronization measure and the data it was computed from.
struct SyncResult {
    double s = 0.0;
    double eta = kDefaultEta;
    double phi_star = 0.0;
    PhaseDistributionTerms terms;
    /// Empty when the signal does not couple to first order.
    std::optional<double> epsilon;
    double norm0 = 0.0;
    double norm1 = 0.0;
    DensityMatrix rho1;

    double s_over_eta() const { return s / eta; }
    bool zero_response() const { return !epsilon.has_value(); }
};

/// Limit cycle with its generator and target state computed once, for
/// repeated evaluation against many signals.
class PerturbativeSolver {
public:
    explicit PerturbativeSolver(const LimitCycleSpec& lc);

    const LimitCycleSpec& limit_cycle() const { return lc_; }
    const Liouvillian& liouvillian() const { return liouvillian_; }
    const DensityMatrix& rho0() const { return rho0_; }

    /// -(L_0^offdiag)^{-1} L_ext rho^(0), solved sector by sector.
    DensityMatrix first_order(const SignalSpec& signal) const;

    /// rho^(0) .. rho^(max_order).
    std::vector<DensityMatrix> orders(const SignalSpec& signal, int max_order) const;

    SyncResult sync(const SignalSpec& signal, double eta = kDefaultEta) const;

    /// Exact stationary state of L_0 + epsilon L_ext.
    DensityMatrix full_steady_state(const SignalSpec& signal, double epsilon) const;

private:
    struct SectorSolve {
        int k = 0;
        std::vector<std::pair<int, int>> slots;
        bool invertible = false;
        Eigen::MatrixXcd inverse;
    };

    SectorSolve factor_sector(int k) const;

    /// Solves L_0 X = rhs with Tr X = 0 for Hermitian rhs.
    Matrix3 solve_traceless(const Matrix3& rhs) const;

    LimitCycleSpec lc_;
    Liouvillian liouvillian_;
    DensityMatrix rho0_;
    Eigen::CompleteOrthogonalDecomposition<Eigen::Matrix<Complex, 4, 3>> population_solver_;
    std::vector<SectorSolve> sectors_;
};

DensityMatrix first_order(const LimitCycleSpec& lc, const SignalSpec& signal);
DensityMatrix kth_order(const LimitCycleSpec& lc, const SignalSpec& signal, int k);

/// eta ||rho0|| / ||rho1||; throws ZeroResponse for rho1 = 0.
double epsilon_for_threshold(const DensityMatrix& rho0, const DensityMatrix& rho1, double eta);

SyncResult sync_measure(const LimitCycleSpec& lc, const SignalSpec& signal, double eta = kDefaultEta);

DensityMatrix full_steady_state(const LimitCycleSpec& lc, const SignalSpec& signal, double epsilon);

/// Tr[S_z (rho - rho0)]
double p_avg(const Matrix3& rho, const Matrix3& rho0);
/// max_n |rho_nn - rho0_nn|
double p_max(const Matrix3& rho, const Matrix3& rho0);

struct Eigencoherence {
    int sector = 0;
    Complex gamma;
    Matrix3 mu;
    Complex g;
};

struct EigencoherenceDecomposition {
    std::vector<Eigencoherence> modes;
    /// Eigenmatrices orthonormal within every sector (normal blocks).
    bool orthonormal = false;

    /// -sum_l mu_l g_l / Gamma_l
    Matrix3 reconstruct() const;
    /// sqrt(sum_l |g_l / Gamma_l|^2)
    double mode_norm() const;
};

/// Eigenmodes of the coherence blocks and their drive projections. The
/// projections use the dual basis, so reconstruction holds for non-normal
/// blocks too; for normal blocks g_l = Tr[mu_l^+ L_ext rho^(0)].
EigencoherenceDecomposition eigencoherences(const LimitCycleSpec& lc, const SignalSpec& signal);

}  // namespace spinsync
