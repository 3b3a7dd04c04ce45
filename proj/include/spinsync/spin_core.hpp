#pragma once

#include <array>
#include <vector>

#include "spinsync/types.hpp"

namespace spinsync {

struct SpinOperators {
    Matrix3 sz;
    Matrix3 sp;
    Matrix3 sm;
    Matrix3 sx;
    Matrix3 sy;
};

/// Spin-1 operators in the (+1, 0, -1) basis.
const SpinOperators& spin_operators();

/// R_z(alpha) = exp(-i alpha S_z).
Matrix3 rotation_z(double alpha);

/// State of the spin together with the perturbative order it represents.
struct DensityMatrix {
    static constexpr int kFull = -1;

    Matrix3 entries = Matrix3::Zero();
    int order = kFull;

    Complex operator()(int i, int j) const { return entries(i, j); }
    double hs_norm() const { return entries.norm(); }
};

bool is_hermitian(const Matrix3& m, double tol = 1e-12);

/// Throws InvalidArgument when `m` is not Hermitian.
void require_hermitian(const Matrix3& m, const char* what);

/// Hermitian, unit trace and positive semidefinite (eigenvalues >= -tol).
bool is_physical(const Matrix3& m, double tol = 1e-12);

struct CoherentState {
    double theta = 0.0;
    double phi = 0.0;
    Eigen::Vector3cd amplitudes;
};

/// Spin-coherent state |theta, phi> obtained by rotating |+1>. The azimuth
/// is reduced to [0, 2 pi).
CoherentState coherent_state(double theta, double phi);

/// Q(theta, phi) = 3/(4 pi) <theta, phi| rho |theta, phi>.
double husimi_q(const Matrix3& rho, double theta, double phi);

/// Two-harmonic shifted phase distribution
/// S(phi) = a cos(phi + alpha1) + b cos(2 phi + alpha2).
struct PhaseDistributionTerms {
    double a = 0.0;
    double alpha1 = 0.0;
    double b = 0.0;
    double alpha2 = 0.0;

    double operator()(double phi) const;
    double derivative(double phi) const;
};

inline constexpr double kSpinFirstHarmonic = 0.26516504294495535;  // 3 / (8 sqrt 2)
inline constexpr double kSecondHarmonic = 1.0 / kTwoPi;
inline constexpr double kOscillatorFirstHarmonic = 1.0 / kTwoPi;

PhaseDistributionTerms phase_distribution_terms(const Matrix3& rho);

/// Same coherences read in the truncated Fock basis |2>, |1>, |0>.
PhaseDistributionTerms oscillator_phase_terms(const Matrix3& rho);

struct PhasePeak {
    double value = 0.0;
    double phi_star = 0.0;
};

PhasePeak max_shifted_phase(const PhaseDistributionTerms& terms);

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(int n);

/// Shifted phase distribution by direct theta-integration of the Husimi
/// function, Gauss-Legendre in cos(theta).
double shifted_phase_quadrature(const Matrix3& rho, double phi, int nodes = 64);

/// Integral of Q over the sphere; trapezoid in phi, Gauss-Legendre in cos(theta).
double husimi_integral(const Matrix3& rho, int theta_nodes = 64, int phi_points = 64);

/// Wrap an angle into [0, 2 pi).
double wrap_angle(double angle);

}  // namespace spinsync
