#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spinsync/grid.hpp"
#include "spinsync/lindblad.hpp"
#include "spinsync/perturbation.hpp"
#include "spinsync/signal.hpp"

namespace spinsync {

enum class Scenario { Equatorial, Vdp, AsymmetricEquatorial, Cooperativity };

std::string_view scenario_name(Scenario s);
Scenario parse_scenario(std::string_view name);

struct ScenarioId {
    Scenario kind = Scenario::Equatorial;
    double gamma_g = 1.0;
    double gamma_d = 1.0;
    /// Third decay channel S_z S_- of the asymmetric equatorial cycle.
    double gamma_dp = 0.0;
    /// Cooperativity of the ancilla-assisted pump.
    double cooperativity = 1.0;
    double gamma_10 = 1.0;
    double gamma_0m1 = 1.0;
    double detuning = 0.0;
};

LimitCycleSpec make_limit_cycle(const ScenarioId& id);

/// Closed-form limit-cycle populations (+1, 0, -1) of a scenario.
std::array<double, 3> closed_form_populations(const ScenarioId& id);

namespace operators {
Matrix3 equatorial_gain();      // S_+ S_z
Matrix3 equatorial_damping();   // S_- S_z
Matrix3 asymmetric_damping();   // S_z S_-
Matrix3 vdp_gain();             // S_z S_+ - S_+ S_z / sqrt 2
Matrix3 vdp_damping();          // S_-^2 / sqrt 2
Matrix3 fock_creation();        // a^+ on |2>, |1>, |0>
Matrix3 fock_two_photon_loss();  // a^2 on |2>, |1>, |0>
}  // namespace operators

struct EquivalenceReport {
    double gain_difference = 0.0;
    double damping_difference = 0.0;
    double second_harmonic_difference = 0.0;
    double first_harmonic_ratio = 0.0;
    double rho0_difference = 0.0;
    double rho1_difference = 0.0;

    bool passed(double tol = 1e-12) const;
};

/// Compares the spin van der Pol network with the truncated oscillator
/// (a^+ gain, a^2 loss, H = Delta a^+ a) under the same oscillator-normalized
/// drive.
EquivalenceReport vdp_oscillator_equivalence(double gamma_g = 1.0, double gamma_d = 10.0,
                                             double detuning = 0.3,
                                             const VdpSignalParams& drive = {1.0, 0.6, 0.4, 0.7});

/// Equatorial ratio r and phase alpha entering the closed-form measure.
struct EquatorialRates {
    double r = 1.0;
    double alpha = 0.0;
};
EquatorialRates equatorial_rates(double gamma_g, double gamma_d, double detuning);

double equatorial_s_closed(double zeta, double chi, double gamma_g, double gamma_d, double detuning,
                           double eta = kDefaultEta);

/// (chi, zeta) = (pi - alpha, arctan r).
std::pair<double, double> equatorial_optimal_angles(double gamma_g, double gamma_d, double detuning);

double vdp_squeeze_s_closed(double tau_ratio, double gamma_g, double gamma_d, double detuning,
                            double eta = kDefaultEta);
double vdp_optimal_squeeze_ratio(double gamma_g, double gamma_d, double detuning);

/// Semi-classical oscillator drive tau_{0,1} = tau_{-1,0} = 1 with a
/// squeezing tone |tau_{-1,1}| = tau_ratio.
SignalSpec vdp_semiclassical_squeeze(double tau_ratio, double squeeze_phase = 0.0);

/// Resonant deep-quantum optimum: zeta = arccot(sqrt2 gamma_d / 3 gamma_g),
/// chi = 0, tau_ratio = 2 sqrt2 / 3 pi.
VdpSignalParams vdp_asymptotic_optimum(double gamma_g, double gamma_d);

double blockade_s_closed(double gamma_g, double gamma_d, double detuning, double eta = kDefaultEta);

/// Equatorial tones with chi = 0 and zeta = arctan r.
SignalSpec blockade_signal(double gamma_g, double gamma_d, double detuning);

/// Rotates the squeezing tone so that the cos(2 phi) peak of rho^(1)
/// coincides with its cos(phi) peak. Signals without a squeezing tone, or
/// whose squeezing tone does not build a coherence, are returned unchanged.
SignalSpec auto_align_squeezing(const PerturbativeSolver& solver, const SignalSpec& signal);

enum class SignalFamily { EquatorialAngles, VdpGeneral };

std::string_view family_name(SignalFamily f);
SignalFamily parse_family(std::string_view name);

struct OptimizerOptions {
    int grid = 64;
    double tau_max = 4.0;
    double tolerance = 1e-8;
};

struct OptimumReport {
    SignalFamily family = SignalFamily::EquatorialAngles;
    double zeta = 0.0;
    double chi = 0.0;
    double tau_ratio = 0.0;
    SignalSpec signal;
    SyncResult result;
    long evaluations = 0;
};

/// Deterministic grid search over (zeta, chi, tau_ratio) followed by
/// coordinate-descent refinement. `detuning` replaces the one in `lc`.
OptimumReport optimize_signal(const LimitCycleSpec& lc, SignalFamily family, double detuning,
                              double eta = kDefaultEta, const OptimizerOptions& options = {});

/// Evaluates one point of a signal family (squeezing auto-aligned).
SignalSpec family_signal(const PerturbativeSolver& solver, SignalFamily family, double zeta, double chi,
                         double tau_ratio);

struct TongueGrid {
    std::vector<double> detunings;
    std::vector<double> strengths;
    std::vector<double> epsilon_max;  ///< per detuning
    /// Row-major [detuning][strength]; empty where the cell is in the forcing regime.
    std::vector<std::optional<double>> s;

    bool masked(std::size_t i, std::size_t j) const { return !s[i * strengths.size() + j].has_value(); }
    std::optional<double> at(std::size_t i, std::size_t j) const { return s[i * strengths.size() + j]; }
};

/// True when eps lies inside the synchronization regime. Strengths equal to the
/// threshold up to rounding count as inside.
inline bool within_tongue(double eps, double eps_max) { return eps <= eps_max * (1.0 + 1e-12); }

TongueGrid arnold_tongue(const LimitCycleSpec& lc, const SignalSpec& signal, const std::vector<double>& detunings,
                         const std::vector<double>& strengths, double eta = kDefaultEta,
                         bool align_squeezing = false);

/// eta / sqrt(1/(gamma_d^2 + Delta^2) + 1/(gamma_g^2 + Delta^2))
double equatorial_epsilon_max(double gamma_g, double gamma_d, double detuning, double eta = kDefaultEta);

struct BoundParams {
    double a = 1.0;
    double delta = 0.0;
    Complex b;
    Complex c;
};

struct BoundTerms {
    double norm_term = 0.0;
    double coherence_term = 0.0;
    double s = 0.0;
};

Matrix3 bound_rho0(const BoundParams& p);
Matrix3 bound_rho1(const BoundParams& p);

/// Throws InvalidArgument outside the triangle of physical populations or
/// for b = c = 0.
BoundTerms bound_terms(const BoundParams& p, double eta = kDefaultEta);

enum class PhaseSpace { Spin, Oscillator };

double smax(double eta, PhaseSpace space = PhaseSpace::Spin);

/// Optimal coherence ratio |b| / |c| = 3 pi / (4 sqrt 2).
inline constexpr double kOptimalCoherenceRatio = 1.666081101809387;

/// Tones of the tightness construction: equatorial optimal angles plus the
/// squeezing amplitude that sets the optimal coherence ratio.
SignalSpec tightness_signal(double gamma_g, double gamma_d, double gamma_dp, double detuning);

SyncResult tightness_scenario(double gamma_g, double gamma_d, double gamma_dp, double detuning,
                              double eta = kDefaultEta);

double tightness_s_closed(double gamma_g, double gamma_dp, double eta = kDefaultEta);

struct PmaxCurve {
    double r = 0.0;
    std::vector<double> epsilon;
    std::vector<double> p_max;
    bool interior_maximum = false;
    std::size_t max_index = 0;
    std::size_t min_index = 0;  ///< smallest value after the interior maximum
    double max_value = 0.0;
    double min_after_max = 0.0;
    double final_value = 0.0;
    bool monotonic = false;
};

/// p_max(epsilon) of the van der Pol cycle driven by t01 = r, tm10 = 1/sqrt2
/// on resonance, from exact stationary states.
std::vector<PmaxCurve> pmax_failure_sweep(const std::vector<double>& r_values, const std::vector<double>& epsilon,
                                          double gamma_g = 1.0, double gamma_d = 100.0);

}  // namespace spinsync
