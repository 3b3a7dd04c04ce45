#pragma once

#include "spinsync/types.hpp"

namespace spinsync {

/// Dimensionless tone amplitudes; the strength epsilon is applied separately.
struct SignalSpec {
    Complex t01;   ///< |0> <-> |+1>
    Complex tm10;  ///< |-1> <-> |0>
    Complex tm11;  ///< squeezing tone |-1> <-> |+1>

    SignalSpec scaled(Complex factor) const { return {t01 * factor, tm10 * factor, tm11 * factor}; }
    bool is_zero() const;
};

/// H = t01 S_z S_+ - tm10 S_+ S_z + tm11 S_+^2 + h.c.
Matrix3 build_hext(const SignalSpec& signal);

/// (e^{i phase}/2, e^{i phase}/2, 0), i.e. H = cos(phase) S_x - sin(phase) S_y.
SignalSpec semiclassical(double phase);

struct VdpSignalParams {
    double c = 1.0;
    double zeta = 0.0;
    double chi = 0.0;
    double tau_ratio = 0.0;
};

/// Oscillator-normalized tones tau_{0,1} = c cos(zeta) e^{i chi},
/// tau_{-1,0} = c sin(zeta), |tau_{-1,1}| = tau_ratio c with phase
/// `squeeze_phase`, renormalized onto the spin tones.
SignalSpec from_vdp_params(const VdpSignalParams& params, double squeeze_phase = 0.0);

/// (cos(zeta) e^{i chi}, sin(zeta), 0).
SignalSpec from_equatorial_angles(double zeta, double chi);

}  // namespace spinsync
