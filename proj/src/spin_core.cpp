#include "spinsync/spin_core.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "spinsync/error.hpp"

namespace spinsync {

namespace {

SpinOperators make_spin_operators() {
    const double s2 = std::sqrt(2.0);
    SpinOperators ops;
    ops.sz = Matrix3::Zero();
    ops.sz.diagonal() << 1.0, 0.0, -1.0;
    ops.sp = Matrix3::Zero();
    ops.sp(index_of(1), index_of(0)) = s2;
    ops.sp(index_of(0), index_of(-1)) = s2;
    ops.sm = ops.sp.adjoint();
    ops.sx = (ops.sp + ops.sm) / 2.0;
    ops.sy = (ops.sp - ops.sm) / Complex(0.0, 2.0);
    return ops;
}

}  // namespace

const SpinOperators& spin_operators() {
    static const SpinOperators ops = make_spin_operators();
    return ops;
}

Matrix3 rotation_z(double alpha) {
    Matrix3 r = Matrix3::Zero();
    for (int i = 0; i < 3; ++i) {
        r(i, i) = std::polar(1.0, -alpha * label_of(i));
    }
    return r;
}

std::string_view error_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::MixedSector: return "MixedSector";
        case ErrorKind::DegenerateLimitCycle: return "DegenerateLimitCycle";
        case ErrorKind::SingularCoherenceBlock: return "SingularCoherenceBlock";
        case ErrorKind::ZeroResponse: return "ZeroResponse";
        case ErrorKind::DegenerateSteadyState: return "DegenerateSteadyState";
        case ErrorKind::NonDiagonalizable: return "NonDiagonalizable";
        case ErrorKind::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

bool is_hermitian(const Matrix3& m, double tol) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

void require_hermitian(const Matrix3& m, const char* what) {
    if (!is_hermitian(m)) {
        throw Error(ErrorKind::InvalidArgument, std::string(what) + ": matrix is not Hermitian");
    }
}

bool is_physical(const Matrix3& m, double tol) {
    if (!is_hermitian(m, tol) || std::abs(m.trace() - 1.0) > tol) {
        return false;
    }
    Eigen::SelfAdjointEigenSolver<Matrix3> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol;
}

double wrap_angle(double angle) {
    double w = std::fmod(angle, kTwoPi);
    if (w < 0.0) {
        w += kTwoPi;
    }
    // fmod of a tiny negative value can round up to exactly 2 pi
    return w >= kTwoPi ? 0.0 : w;
}

CoherentState coherent_state(double theta, double phi) {
    if (!(theta >= 0.0 && theta <= kPi)) {
        throw Error(ErrorKind::InvalidArgument, "coherent_state: theta must lie in [0, pi]");
    }
    CoherentState cs;
    cs.theta = theta;
    cs.phi = wrap_angle(phi);
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    cs.amplitudes << std::polar(c * c, -cs.phi), Complex(std::sin(theta) / std::sqrt(2.0), 0.0),
        std::polar(s * s, cs.phi);
    return cs;
}

double husimi_q(const Matrix3& rho, double theta, double phi) {
    require_hermitian(rho, "husimi_q");
    const Eigen::Vector3cd ket = coherent_state(theta, phi).amplitudes;
    return (ket.adjoint() * rho * ket)(0, 0).real() * 3.0 / (4.0 * kPi);
}

double PhaseDistributionTerms::operator()(double phi) const {
    return a * std::cos(phi + alpha1) + b * std::cos(2.0 * phi + alpha2);
}

double PhaseDistributionTerms::derivative(double phi) const {
    return -a * std::sin(phi + alpha1) - 2.0 * b * std::sin(2.0 * phi + alpha2);
}

namespace {

PhaseDistributionTerms terms_from(Complex first, Complex second, double first_prefactor) {
    PhaseDistributionTerms t;
    t.a = first_prefactor * std::abs(first);
    t.alpha1 = t.a > 0.0 ? std::arg(first) : 0.0;
    t.b = kSecondHarmonic * std::abs(second);
    t.alpha2 = t.b > 0.0 ? std::arg(second) : 0.0;
    return t;
}

}  // namespace

PhaseDistributionTerms phase_distribution_terms(const Matrix3& rho) {
    const Complex first = rho(index_of(1), index_of(0)) + rho(index_of(0), index_of(-1));
    return terms_from(first, rho(index_of(1), index_of(-1)), kSpinFirstHarmonic);
}

PhaseDistributionTerms oscillator_phase_terms(const Matrix3& rho) {
    // Fock |2>, |1>, |0> occupy indices 0, 1, 2: rho^F_{1,0} = rho(1, 2),
    // rho^F_{2,1} = rho(0, 1), rho^F_{2,0} = rho(0, 2).
    const Complex first = rho(1, 2) + rho(0, 1);
    return terms_from(first, rho(0, 2), kOscillatorFirstHarmonic);
}

PhasePeak max_shifted_phase(const PhaseDistributionTerms& terms) {
    if (terms.a == 0.0 && terms.b == 0.0) {
        return {0.0, 0.0};
    }
    if (terms.b == 0.0) {
        return {terms.a, wrap_angle(-terms.alpha1)};
    }
    if (terms.a == 0.0) {
        return {terms.b, wrap_angle(-terms.alpha2 / 2.0)};
    }
    const double mismatch = std::remainder(2.0 * terms.alpha1 - terms.alpha2, kTwoPi);
    if (std::abs(mismatch) < 1e-14) {
        return {terms.a + terms.b, wrap_angle(-terms.alpha1)};
    }

    constexpr int kGrid = 1024;
    const double step = kTwoPi / kGrid;
    int best = 0;
    double best_value = terms(0.0);
    for (int i = 1; i < kGrid; ++i) {
        const double v = terms(i * step);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    // f' > 0 on the left of the peak and < 0 on its right.
    double lo = (best - 1) * step;
    double hi = (best + 1) * step;
    for (int iter = 0; iter < 200 && hi - lo > 1e-15; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (terms.derivative(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double phi = 0.5 * (lo + hi);
    return {std::max(terms(phi), best_value), wrap_angle(phi)};
}

namespace {

/// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if (n == 0) {
        return {1.0, 0.0};
    }
    return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

QuadratureRule gauss_legendre(int n) {
    if (n < 1) {
        throw Error(ErrorKind::InvalidArgument, "gauss_legendre: need at least one node");
    }
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            const auto [p, dp] = legendre(n, x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        const double dp = legendre(n, x).second;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

double shifted_phase_quadrature(const Matrix3& rho, double phi, int nodes) {
    const QuadratureRule rule = gauss_legendre(nodes);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        // Gauss-Legendre in theta itself; the integrand is a trigonometric
        // polynomial there, whereas in cos(theta) it carries sqrt(1 - u^2).
        const double theta = kPi / 2.0 * (rule.nodes[i] + 1.0);
        sum += kPi / 2.0 * rule.weights[i] * std::sin(theta) * husimi_q(rho, theta, phi);
    }
    return sum - 1.0 / kTwoPi;
}

double husimi_integral(const Matrix3& rho, int theta_nodes, int phi_points) {
    const QuadratureRule rule = gauss_legendre(theta_nodes);
    double sum = 0.0;
    const double dphi = kTwoPi / phi_points;
    for (int k = 0; k < phi_points; ++k) {
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double theta = kPi / 2.0 * (rule.nodes[i] + 1.0);
            sum += kPi / 2.0 * rule.weights[i] * std::sin(theta) * husimi_q(rho, theta, k * dphi) * dphi;
        }
    }
    return sum;
}

}  // namespace spinsync
