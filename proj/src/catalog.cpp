#include "spinsync/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "spinsync/error.hpp"

namespace spinsync {

namespace {

const double kSqrt2 = std::sqrt(2.0);

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw Error(ErrorKind::InvalidArgument, std::string(what) + " must be positive");
    }
}

Matrix3 ket_bra(int m, int n) {
    Matrix3 op = Matrix3::Zero();
    op(index_of(m), index_of(n)) = 1.0;
    return op;
}

}  // namespace

std::string_view scenario_name(Scenario s) {
    switch (s) {
        case Scenario::Equatorial: return "equatorial";
        case Scenario::Vdp: return "vdp";
        case Scenario::AsymmetricEquatorial: return "asymmetric_equatorial";
        case Scenario::Cooperativity: return "cooperativity";
    }
    return "unknown";
}

Scenario parse_scenario(std::string_view name) {
    for (auto s : {Scenario::Equatorial, Scenario::Vdp, Scenario::AsymmetricEquatorial, Scenario::Cooperativity}) {
        if (scenario_name(s) == name) {
            return s;
        }
    }
    throw Error(ErrorKind::InvalidArgument, "unknown scenario '" + std::string(name) + "'");
}

namespace operators {

Matrix3 equatorial_gain() { return spin_operators().sp * spin_operators().sz; }
Matrix3 equatorial_damping() { return spin_operators().sm * spin_operators().sz; }
Matrix3 asymmetric_damping() { return spin_operators().sz * spin_operators().sm; }

Matrix3 vdp_gain() {
    const auto& s = spin_operators();
    return s.sz * s.sp - s.sp * s.sz / kSqrt2;
}

Matrix3 vdp_damping() {
    const auto& s = spin_operators();
    return s.sm * s.sm / kSqrt2;
}

Matrix3 fock_creation() {
    // rows/columns are |2>, |1>, |0>
    Matrix3 a = Matrix3::Zero();
    a(0, 1) = kSqrt2;  // <2|a^+|1>
    a(1, 2) = 1.0;     // <1|a^+|0>
    return a;
}

Matrix3 fock_two_photon_loss() {
    const Matrix3 annihilation = fock_creation().adjoint();
    return annihilation * annihilation;
}

}  // namespace operators

LimitCycleSpec make_limit_cycle(const ScenarioId& id) {
    LimitCycleSpec lc;
    lc.detuning = id.detuning;
    switch (id.kind) {
        case Scenario::Equatorial:
            require_positive(id.gamma_g, "gamma_g");
            require_positive(id.gamma_d, "gamma_d");
            lc.dissipators = {{operators::equatorial_gain(), id.gamma_g}, {operators::equatorial_damping(), id.gamma_d}};
            break;
        case Scenario::Vdp:
            require_positive(id.gamma_g, "gamma_g");
            require_positive(id.gamma_d, "gamma_d");
            lc.dissipators = {{operators::vdp_gain(), id.gamma_g}, {operators::vdp_damping(), id.gamma_d}};
            break;
        case Scenario::AsymmetricEquatorial:
            require_positive(id.gamma_g, "gamma_g");
            require_positive(id.gamma_d, "gamma_d");
            require_positive(id.gamma_dp, "gamma_dp");
            lc.dissipators = {{operators::equatorial_gain(), id.gamma_g},
                              {operators::equatorial_damping(), id.gamma_d},
                              {operators::asymmetric_damping(), id.gamma_dp}};
            break;
        case Scenario::Cooperativity:
            require_positive(id.cooperativity, "cooperativity");
            require_positive(id.gamma_10, "gamma_10");
            require_positive(id.gamma_0m1, "gamma_0m1");
            // natural decay down the ladder plus the effective ancilla-assisted pump |-1> -> |0>
            lc.dissipators = {{ket_bra(0, 1), id.gamma_10},
                              {ket_bra(-1, 0), id.gamma_0m1},
                              {ket_bra(0, -1), 4.0 * id.cooperativity * id.gamma_0m1}};
            break;
    }
    return lc;
}

std::array<double, 3> closed_form_populations(const ScenarioId& id) {
    switch (id.kind) {
        case Scenario::Equatorial: return {0.0, 1.0, 0.0};
        case Scenario::Vdp: {
            const double n = 3.0 * id.gamma_d + id.gamma_g;
            return {id.gamma_g / n, id.gamma_d / n, 2.0 * id.gamma_d / n};
        }
        case Scenario::AsymmetricEquatorial: {
            const double n = id.gamma_g + id.gamma_dp;
            return {0.0, id.gamma_g / n, id.gamma_dp / n};
        }
        case Scenario::Cooperativity: {
            const double n = 1.0 + 4.0 * id.cooperativity;
            return {0.0, 4.0 * id.cooperativity / n, 1.0 / n};
        }
    }
    return {0.0, 0.0, 0.0};
}

bool EquivalenceReport::passed(double tol) const {
    return gain_difference <= tol && damping_difference <= tol && second_harmonic_difference <= tol &&
           std::abs(first_harmonic_ratio - kOptimalCoherenceRatio) <= 1e-12 && rho0_difference <= 1e-10 &&
           rho1_difference <= 1e-10;
}

EquivalenceReport vdp_oscillator_equivalence(double gamma_g, double gamma_d, double detuning,
                                             const VdpSignalParams& drive) {
    EquivalenceReport rep;
    const Matrix3 gain = operators::fock_creation();
    const Matrix3 loss = operators::fock_two_photon_loss();
    rep.gain_difference = (operators::vdp_gain() - gain).cwiseAbs().maxCoeff();
    rep.damping_difference = (operators::vdp_damping() - loss).cwiseAbs().maxCoeff();

    ScenarioId id;
    id.kind = Scenario::Vdp;
    id.gamma_g = gamma_g;
    id.gamma_d = gamma_d;
    id.detuning = detuning;
    const PerturbativeSolver spin(make_limit_cycle(id));
    const DensityMatrix spin_rho1 = spin.first_order(from_vdp_params(drive));

    // Truncated oscillator: H_sys = Delta a^+ a, drive with tau-weighted a^+ elements.
    Matrix3 number = Matrix3::Zero();
    number.diagonal() << 2.0, 1.0, 0.0;
    Matrix3 p2 = Matrix3::Zero();
    p2(0, 0) = 1.0;
    Matrix3 p1 = Matrix3::Zero();
    p1(1, 1) = 1.0;
    const Complex tau01 = drive.c * std::cos(drive.zeta) * Complex(std::cos(drive.chi), std::sin(drive.chi));
    const Complex taum10 = drive.c * std::sin(drive.zeta);
    const Complex taum11 = drive.tau_ratio * drive.c;
    const Matrix3 raising = tau01 * p2 * gain + taum10 * p1 * gain + taum11 * gain * gain;
    const Matrix3 h_osc = raising + raising.adjoint();

    const SuperMatrix l0 = lindblad_generator(detuning * number, {{gain, gamma_g}, {loss, gamma_d}});
    Eigen::JacobiSVD<SuperMatrix> svd(l0, Eigen::ComputeFullV);
    Matrix3 osc_rho0 = unvectorize(svd.matrixV().col(8));
    osc_rho0 /= osc_rho0.trace();

    Eigen::Matrix<Complex, 10, 9> a;
    a.topRows<9>() = l0;
    a.row(9) = vectorize(Matrix3::Identity()).transpose();
    Eigen::Matrix<Complex, 10, 1> b;
    b.head<9>() = -vectorize(Complex(0.0, -1.0) * (h_osc * osc_rho0 - osc_rho0 * h_osc));
    b(9) = 0.0;
    const Matrix3 osc_rho1 = unvectorize(a.completeOrthogonalDecomposition().solve(b));

    rep.rho0_difference = (osc_rho0 - spin.rho0().entries).cwiseAbs().maxCoeff();
    rep.rho1_difference = (osc_rho1 - spin_rho1.entries).cwiseAbs().maxCoeff();

    const auto spin_terms = phase_distribution_terms(spin_rho1.entries);
    const auto osc_terms = oscillator_phase_terms(osc_rho1);
    rep.second_harmonic_difference = std::abs(spin_terms.b - osc_terms.b);
    rep.first_harmonic_ratio = osc_terms.a > 0.0 ? spin_terms.a / osc_terms.a : 0.0;
    return rep;
}

EquatorialRates equatorial_rates(double gamma_g, double gamma_d, double detuning) {
    EquatorialRates out;
    out.r = std::sqrt((gamma_g * gamma_g + detuning * detuning) / (gamma_d * gamma_d + detuning * detuning));
    out.alpha = std::arg(1.0 / (Complex(gamma_g, -detuning) * Complex(gamma_d, detuning)));
    return out;
}

double equatorial_s_closed(double zeta, double chi, double gamma_g, double gamma_d, double detuning, double eta) {
    const auto [r, alpha] = equatorial_rates(gamma_g, gamma_d, detuning);
    const double s = std::sin(zeta);
    const double c = std::cos(zeta);
    const double inner = 1.0 - 2.0 * s * c * std::cos(chi + alpha) / (r * c * c + s * s / r);
    return eta * 3.0 / 16.0 * std::sqrt(std::max(inner, 0.0));
}

std::pair<double, double> equatorial_optimal_angles(double gamma_g, double gamma_d, double detuning) {
    const auto [r, alpha] = equatorial_rates(gamma_g, gamma_d, detuning);
    return {wrap_angle(kPi - alpha), std::atan(r)};
}

double vdp_squeeze_s_closed(double tau_ratio, double gamma_g, double gamma_d, double detuning, double eta) {
    const double w = 9.0 * gamma_g * gamma_g + 4.0 * detuning * detuning;
    return eta * std::sqrt(5.0) / (48.0 * kPi) * (3.0 * kPi * gamma_d + 8.0 * tau_ratio * std::sqrt(w)) /
           std::sqrt(gamma_d * gamma_d + 2.0 * tau_ratio * tau_ratio * w);
}

double vdp_optimal_squeeze_ratio(double gamma_g, double gamma_d, double detuning) {
    return 4.0 * gamma_d / (3.0 * kPi * std::sqrt(9.0 * gamma_g * gamma_g + 4.0 * detuning * detuning));
}

SignalSpec vdp_semiclassical_squeeze(double tau_ratio, double squeeze_phase) {
    const Complex squeeze = tau_ratio * Complex(std::cos(squeeze_phase), std::sin(squeeze_phase));
    return {1.0, 1.0 / kSqrt2, squeeze / kSqrt2};
}

VdpSignalParams vdp_asymptotic_optimum(double gamma_g, double gamma_d) {
    VdpSignalParams p;
    p.c = 1.0;
    p.zeta = std::atan(3.0 * gamma_g / (kSqrt2 * gamma_d));
    p.chi = 0.0;
    p.tau_ratio = 2.0 * kSqrt2 / (3.0 * kPi);
    return p;
}

double blockade_s_closed(double gamma_g, double gamma_d, double detuning, double eta) {
    const double angle =
        std::atan((gamma_d - gamma_g) * detuning / (gamma_d * gamma_g + detuning * detuning));
    return eta * 3.0 / 16.0 * std::sqrt(std::max(1.0 - std::cos(angle), 0.0));
}

SignalSpec blockade_signal(double gamma_g, double gamma_d, double detuning) {
    return from_equatorial_angles(std::atan(equatorial_rates(gamma_g, gamma_d, detuning).r), 0.0);
}

SignalSpec auto_align_squeezing(const PerturbativeSolver& solver, const SignalSpec& signal) {
    if (signal.tm11 == 0.0) {
        return signal;
    }
    SignalSpec s = signal;
    s.tm11 = std::abs(signal.tm11);
    const auto terms = phase_distribution_terms(solver.first_order(s).entries);
    if (terms.a == 0.0 || terms.b == 0.0) {
        return s;
    }
    // rho_{+1,-1} is linear in tm11 alone, so this phase moves alpha2 onto 2 alpha1.
    const double shift = 2.0 * terms.alpha1 - terms.alpha2;
    s.tm11 *= Complex(std::cos(shift), std::sin(shift));
    return s;
}

std::string_view family_name(SignalFamily f) {
    return f == SignalFamily::EquatorialAngles ? "equatorial_angles" : "vdp_general";
}

SignalFamily parse_family(std::string_view name) {
    if (name == "equatorial_angles") {
        return SignalFamily::EquatorialAngles;
    }
    if (name == "vdp_general") {
        return SignalFamily::VdpGeneral;
    }
    throw Error(ErrorKind::InvalidArgument, "unknown signal family '" + std::string(name) + "'");
}

SignalSpec family_signal(const PerturbativeSolver& solver, SignalFamily family, double zeta, double chi,
                         double tau_ratio) {
    if (family == SignalFamily::EquatorialAngles) {
        return from_equatorial_angles(zeta, chi);
    }
    return auto_align_squeezing(solver, from_vdp_params({1.0, zeta, chi, tau_ratio}));
}

OptimumReport optimize_signal(const LimitCycleSpec& lc, SignalFamily family, double detuning, double eta,
                              const OptimizerOptions& options) {
    if (options.grid < 2) {
        throw Error(ErrorKind::InvalidArgument, "optimizer grid needs at least two points per axis");
    }
    LimitCycleSpec shifted = lc;
    shifted.detuning = detuning;
    const PerturbativeSolver solver(shifted);

    OptimumReport rep;
    rep.family = family;
    const bool squeezing = family == SignalFamily::VdpGeneral;

    auto evaluate = [&](double zeta, double chi, double tau) {
        ++rep.evaluations;
        return solver.sync(family_signal(solver, family, zeta, chi, tau), eta).s;
    };

    const int n = options.grid;
    const double zeta_step = (kPi / 2.0) / (n - 1);
    const double chi_step = kTwoPi / n;
    const int tau_points = squeezing ? n : 1;
    const double tau_step = squeezing ? options.tau_max / (n - 1) : 0.0;

    double best = -1.0;
    double zeta = 0.0;
    double chi = 0.0;
    double tau = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < tau_points; ++k) {
                const double v = evaluate(i * zeta_step, j * chi_step, k * tau_step);
                if (v > best) {
                    best = v;
                    zeta = i * zeta_step;
                    chi = j * chi_step;
                    tau = k * tau_step;
                }
            }
        }
    }

    // Compass search: try +-h on each coordinate, halve h once no move helps.
    double h_zeta = zeta_step;
    double h_chi = chi_step;
    double h_tau = squeezing ? std::max(tau_step, 1e-3) : 0.0;
    const double min_step = 1e-9;
    while (h_zeta > min_step || h_chi > min_step || (squeezing && h_tau > min_step)) {
        bool moved = false;
        for (double sign : {1.0, -1.0}) {
            const double z = std::clamp(zeta + sign * h_zeta, 0.0, kPi / 2.0);
            const double v = evaluate(z, chi, tau);
            if (v > best + options.tolerance * 1e-6 * eta) {
                best = v;
                zeta = z;
                moved = true;
            }
        }
        // Cartesian moves in (zeta cos chi, zeta sin chi) so the search can leave zeta = 0,
        // where chi alone has no effect
        for (const auto& [dx, dy] : {std::pair{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}}) {
            const double x = zeta * std::cos(chi) + dx * h_zeta;
            const double y = zeta * std::sin(chi) + dy * h_zeta;
            const double z = std::min(std::hypot(x, y), kPi / 2.0);
            const double c = z > 0.0 ? wrap_angle(std::atan2(y, x)) : chi;
            const double v = evaluate(z, c, tau);
            if (v > best + options.tolerance * 1e-6 * eta) {
                best = v;
                zeta = z;
                chi = c;
                moved = true;
            }
        }
        for (double sign : {1.0, -1.0}) {
            const double c = wrap_angle(chi + sign * h_chi);
            const double v = evaluate(zeta, c, tau);
            if (v > best + options.tolerance * 1e-6 * eta) {
                best = v;
                chi = c;
                moved = true;
            }
        }
        if (squeezing) {
            for (double sign : {1.0, -1.0}) {
                const double t = std::max(tau + sign * h_tau, 0.0);
                const double v = evaluate(zeta, chi, t);
                if (v > best + options.tolerance * 1e-6 * eta) {
                    best = v;
                    tau = t;
                    moved = true;
                }
            }
        }
        if (!moved) {
            h_zeta /= 2.0;
            h_chi /= 2.0;
            h_tau /= 2.0;
        }
    }

    rep.zeta = zeta;
    rep.chi = chi;
    rep.tau_ratio = tau;
    rep.signal = family_signal(solver, family, zeta, chi, tau);
    rep.result = solver.sync(rep.signal, eta);
    return rep;
}

double equatorial_epsilon_max(double gamma_g, double gamma_d, double detuning, double eta) {
    const double d2 = detuning * detuning;
    return eta / std::sqrt(1.0 / (gamma_d * gamma_d + d2) + 1.0 / (gamma_g * gamma_g + d2));
}

TongueGrid arnold_tongue(const LimitCycleSpec& lc, const SignalSpec& signal, const std::vector<double>& detunings,
                         const std::vector<double>& strengths, double eta, bool align_squeezing) {
    TongueGrid grid;
    grid.detunings = detunings;
    grid.strengths = strengths;
    grid.epsilon_max.reserve(detunings.size());
    grid.s.reserve(detunings.size() * strengths.size());
    for (double delta : detunings) {
        LimitCycleSpec shifted = lc;
        shifted.detuning = delta;
        const PerturbativeSolver solver(shifted);
        const SignalSpec s = align_squeezing ? auto_align_squeezing(solver, signal) : signal;
        const SyncResult r = solver.sync(s, eta);
        const double eps_max = r.epsilon.value_or(std::numeric_limits<double>::infinity());
        // S grows linearly in epsilon inside the synchronization regime
        const double slope = r.epsilon ? r.s / *r.epsilon : 0.0;
        grid.epsilon_max.push_back(eps_max);
        for (double eps : strengths) {
            if (within_tongue(eps, eps_max)) {
                grid.s.emplace_back(eps * slope);
            } else {
                grid.s.emplace_back(std::nullopt);
            }
        }
    }
    return grid;
}

Matrix3 bound_rho0(const BoundParams& p) {
    Matrix3 rho = Matrix3::Zero();
    rho.diagonal() << (1.0 - p.a - p.delta) / 2.0, p.a, (1.0 - p.a + p.delta) / 2.0;
    return rho;
}

Matrix3 bound_rho1(const BoundParams& p) {
    Matrix3 rho;
    rho << 0.0, p.b, p.c, std::conj(p.b), 0.0, p.b, std::conj(p.c), std::conj(p.b), 0.0;
    return rho;
}

BoundTerms bound_terms(const BoundParams& p, double eta) {
    if (!(p.a >= 0.0 && p.a <= 1.0) || 1.0 - p.a - p.delta < 0.0 || 1.0 - p.a + p.delta < 0.0) {
        throw Error(ErrorKind::InvalidArgument, "bound parameters outside the physical population triangle");
    }
    const double n1 = bound_rho1(p).norm();
    if (n1 == 0.0) {
        throw Error(ErrorKind::InvalidArgument, "bound needs a nonzero coherence");
    }
    BoundTerms t;
    t.norm_term = eta * bound_rho0(p).norm();
    t.coherence_term = (kSpinFirstHarmonic * std::abs(2.0 * p.b) + kSecondHarmonic * std::abs(p.c)) / n1;
    t.s = t.norm_term * t.coherence_term;
    return t;
}

double smax(double eta, PhaseSpace space) {
    if (space == PhaseSpace::Spin) {
        return eta * std::sqrt(2.0 * (16.0 + 9.0 * kPi * kPi)) / (16.0 * kPi);
    }
    return eta * std::sqrt(3.0) / (2.0 * kSqrt2 * kPi);
}

SignalSpec tightness_signal(double gamma_g, double gamma_d, double gamma_dp, double detuning) {
    require_positive(gamma_dp, "gamma_dp");
    const auto [chi, zeta] = equatorial_optimal_angles(gamma_g, gamma_d, detuning);
    SignalSpec s = from_equatorial_angles(zeta, chi);
    const double d2 = detuning * detuning;
    s.tm11 = 4.0 / (3.0 * kPi) *
             std::sqrt(((gamma_g + gamma_d) * (gamma_g + gamma_d) + 4.0 * d2) /
                       (gamma_d * gamma_d + gamma_g * gamma_g + 2.0 * d2)) *
             gamma_g / gamma_dp;
    return s;
}

SyncResult tightness_scenario(double gamma_g, double gamma_d, double gamma_dp, double detuning, double eta) {
    ScenarioId id;
    id.kind = Scenario::AsymmetricEquatorial;
    id.gamma_g = gamma_g;
    id.gamma_d = gamma_d;
    id.gamma_dp = gamma_dp;
    id.detuning = detuning;
    const PerturbativeSolver solver(make_limit_cycle(id));
    return solver.sync(auto_align_squeezing(solver, tightness_signal(gamma_g, gamma_d, gamma_dp, detuning)), eta);
}

double tightness_s_closed(double gamma_g, double gamma_dp, double eta) {
    const double sum = gamma_g + gamma_dp;
    return smax(eta) * std::sqrt((gamma_g * gamma_g + gamma_dp * gamma_dp) / (sum * sum));
}

std::vector<PmaxCurve> pmax_failure_sweep(const std::vector<double>& r_values, const std::vector<double>& epsilon,
                                          double gamma_g, double gamma_d) {
    ScenarioId id;
    id.kind = Scenario::Vdp;
    id.gamma_g = gamma_g;
    id.gamma_d = gamma_d;
    const PerturbativeSolver solver(make_limit_cycle(id));
    const Matrix3& rho0 = solver.rho0().entries;

    std::vector<PmaxCurve> curves;
    for (double r : r_values) {
        PmaxCurve c;
        c.r = r;
        c.epsilon = epsilon;
        const SignalSpec s{r, 1.0 / kSqrt2, 0.0};
        for (double eps : epsilon) {
            c.p_max.push_back(p_max(solver.full_steady_state(s, eps).entries, rho0));
        }
        const auto& p = c.p_max;
        constexpr double kNoise = 1e-12;
        c.monotonic = true;
        for (std::size_t i = 1; i < p.size(); ++i) {
            if (p[i] < p[i - 1] - kNoise) {
                c.monotonic = false;
            }
        }
        for (std::size_t i = 1; i + 1 < p.size(); ++i) {
            if (p[i] > p[i - 1] + kNoise && p[i] > p[i + 1] + kNoise) {
                c.interior_maximum = true;
                c.max_index = i;
                c.max_value = p[i];
                const auto it = std::min_element(p.begin() + static_cast<std::ptrdiff_t>(i), p.end());
                c.min_index = static_cast<std::size_t>(it - p.begin());
                c.min_after_max = *it;
                break;
            }
        }
        c.final_value = p.empty() ? 0.0 : p.back();
        curves.push_back(std::move(c));
    }
    return curves;
}

}  // namespace spinsync
