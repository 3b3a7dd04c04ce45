#include "spinsync/signal.hpp"

#include <cmath>

#include "spinsync/spin_core.hpp"

namespace spinsync {

namespace {

Complex phasor(double magnitude, double phase) { return magnitude * Complex(std::cos(phase), std::sin(phase)); }

}  // namespace

bool SignalSpec::is_zero() const { return t01 == 0.0 && tm10 == 0.0 && tm11 == 0.0; }

Matrix3 build_hext(const SignalSpec& signal) {
    const auto& s = spin_operators();
    const Matrix3 raising = signal.t01 * s.sz * s.sp - signal.tm10 * s.sp * s.sz + signal.tm11 * s.sp * s.sp;
    return raising + raising.adjoint();
}

SignalSpec semiclassical(double phase) {
    const Complex t = std::polar(0.5, phase);
    return {t, t, 0.0};
}

SignalSpec from_vdp_params(const VdpSignalParams& p, double squeeze_phase) {
    const double s2 = std::sqrt(2.0);
    const Complex tau01 = phasor(p.c * std::cos(p.zeta), p.chi);
    const Complex taum10 = p.c * std::sin(p.zeta);
    const Complex taum11 = phasor(p.tau_ratio * p.c, squeeze_phase);
    return {tau01, taum10 / s2, taum11 / s2};
}

SignalSpec from_equatorial_angles(double zeta, double chi) {
    return {phasor(std::cos(zeta), chi), std::sin(zeta), 0.0};
}

}  // namespace spinsync
