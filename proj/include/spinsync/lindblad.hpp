#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "spinsync/spin_core.hpp"
#include "spinsync/types.hpp"

namespace spinsync {

struct Dissipator {
    Matrix3 op;
    double rate = 0.0;
};

/// Dissipative network of a limit cycle plus the detuning Delta = w0 - w_ext
/// of the frame rotating at the signal frequency.
struct LimitCycleSpec {
    std::vector<Dissipator> dissipators;
    double detuning = 0.0;
};

/// Unique k with <m|O|n> != 0 only for m - n = k. Entries below 1e-14 of the
/// largest magnitude count as zero. Throws MixedSector otherwise.
int sector_of(const Matrix3& op);

/// D[O] rho = O rho O^+ - {O^+ O, rho} / 2.
Matrix3 dissipator_apply(const Matrix3& op, const Matrix3& rho);

SuperVector vectorize(const Matrix3& m);
Matrix3 unvectorize(const SuperVector& v);

/// X -> A X
SuperMatrix left_multiplication(const Matrix3& a);
/// X -> X A
SuperMatrix right_multiplication(const Matrix3& a);
/// X -> -i [H, X]
SuperMatrix hamiltonian_superop(const Matrix3& h);
SuperMatrix dissipator_superop(const Matrix3& op);

/// -i [H, .] + sum_j rate_j D[O_j]; no sector validation.
SuperMatrix lindblad_generator(const Matrix3& hamiltonian, const std::vector<Dissipator>& dissipators);

/// Slots (i, j) of the upper-triangle coherences in sector k > 0, in block order.
std::vector<std::pair<int, int>> sector_slots(int k);

struct Liouvillian {
    SuperMatrix full;
    /// Populations (rho_{+1,+1}, rho_{0,0}, rho_{-1,-1}).
    Eigen::Matrix3cd diag_block;
    /// Sector +1 on (rho_{+1,0}, rho_{0,-1}).
    Eigen::Matrix2cd sector1_block;
    /// Sector +2 on rho_{+1,-1}.
    Complex sector2_block;

    /// Block of sector k in {-2, -1, 1, 2}; negative sectors are conjugates.
    Eigen::MatrixXcd sector_block(int k) const;

    Matrix3 apply(const Matrix3& rho) const { return unvectorize(full * vectorize(rho)); }
};

/// Throws InvalidArgument for negative rates or an empty network and
/// MixedSector for operators imposing a phase preference.
void validate(const LimitCycleSpec& lc);

Liouvillian build_liouvillian(const LimitCycleSpec& lc);

/// Limit-cycle state from the population block's null space. Throws
/// DegenerateLimitCycle when that null space is not one-dimensional.
DensityMatrix steady_state(const Liouvillian& liouvillian);

}  // namespace spinsync
