#include "spinsync/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/SVD>

#include "spinsync/error.hpp"

namespace spinsync {

int sector_of(const Matrix3& op) {
    const double scale = op.cwiseAbs().maxCoeff();
    if (!(scale > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "sector_of: zero operator");
    }
    std::set<int> sectors;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (std::abs(op(i, j)) > 1e-14 * scale) {
                // <m|O|n> with m the row label and n the column label
                sectors.insert(label_of(i) - label_of(j));
            }
        }
    }
    if (sectors.size() != 1) {
        throw Error(ErrorKind::MixedSector,
                    "operator couples more than one coherence sector and imposes a phase preference");
    }
    return *sectors.begin();
}

Matrix3 dissipator_apply(const Matrix3& op, const Matrix3& rho) {
    const Matrix3 odo = op.adjoint() * op;
    return op * rho * op.adjoint() - 0.5 * (odo * rho + rho * odo);
}

SuperVector vectorize(const Matrix3& m) { return Eigen::Map<const SuperVector>(m.data()); }

Matrix3 unvectorize(const SuperVector& v) { return Eigen::Map<const Matrix3>(v.data()); }

SuperMatrix left_multiplication(const Matrix3& a) {
    // vec(A X) = (I kron A) vec(X)
    SuperMatrix s = SuperMatrix::Zero();
    for (int j = 0; j < 3; ++j) {
        s.block<3, 3>(3 * j, 3 * j) = a;
    }
    return s;
}

SuperMatrix right_multiplication(const Matrix3& a) {
    // vec(X A) = (A^T kron I) vec(X)
    SuperMatrix s = SuperMatrix::Zero();
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            s.block<3, 3>(3 * r, 3 * c) = a(c, r) * Matrix3::Identity();
        }
    }
    return s;
}

SuperMatrix hamiltonian_superop(const Matrix3& h) {
    return Complex(0.0, -1.0) * (left_multiplication(h) - right_multiplication(h));
}

SuperMatrix dissipator_superop(const Matrix3& op) {
    const Matrix3 odo = op.adjoint() * op;
    return left_multiplication(op) * right_multiplication(op.adjoint()) -
           0.5 * (left_multiplication(odo) + right_multiplication(odo));
}

SuperMatrix lindblad_generator(const Matrix3& hamiltonian, const std::vector<Dissipator>& dissipators) {
    SuperMatrix l = hamiltonian_superop(hamiltonian);
    for (const auto& d : dissipators) {
        l += d.rate * dissipator_superop(d.op);
    }
    return l;
}

std::vector<std::pair<int, int>> sector_slots(int k) {
    switch (k) {
        case 1: return {{index_of(1), index_of(0)}, {index_of(0), index_of(-1)}};
        case 2: return {{index_of(1), index_of(-1)}};
        default: throw Error(ErrorKind::InvalidArgument, "sector_slots: sector must be 1 or 2");
    }
}

Eigen::MatrixXcd Liouvillian::sector_block(int k) const {
    switch (k) {
        case 1: return sector1_block;
        case -1: return sector1_block.conjugate();
        case 2: return Eigen::MatrixXcd::Constant(1, 1, sector2_block);
        case -2: return Eigen::MatrixXcd::Constant(1, 1, std::conj(sector2_block));
        default: throw Error(ErrorKind::InvalidArgument, "sector_block: sector must be +-1 or +-2");
    }
}

void validate(const LimitCycleSpec& lc) {
    bool any_positive = false;
    for (const auto& d : lc.dissipators) {
        if (!(d.rate >= 0.0) || !std::isfinite(d.rate)) {
            throw Error(ErrorKind::InvalidArgument, "dissipator rates must be finite and nonnegative");
        }
        sector_of(d.op);
        any_positive = any_positive || d.rate > 0.0;
    }
    if (!any_positive) {
        throw Error(ErrorKind::InvalidArgument, "limit cycle needs at least one dissipator with positive rate");
    }
    if (!std::isfinite(lc.detuning)) {
        throw Error(ErrorKind::InvalidArgument, "detuning must be finite");
    }
}

Liouvillian build_liouvillian(const LimitCycleSpec& lc) {
    validate(lc);
    Liouvillian l;
    l.full = lindblad_generator(lc.detuning * spin_operators().sz, lc.dissipators);

    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            l.diag_block(a, b) = l.full(vec_index(a, a), vec_index(b, b));
        }
    }
    const auto s1 = sector_slots(1);
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            l.sector1_block(r, c) =
                l.full(vec_index(s1[r].first, s1[r].second), vec_index(s1[c].first, s1[c].second));
        }
    }
    const auto s2 = sector_slots(2).front();
    l.sector2_block = l.full(vec_index(s2.first, s2.second), vec_index(s2.first, s2.second));
    return l;
}

DensityMatrix steady_state(const Liouvillian& liouvillian) {
    Eigen::JacobiSVD<Eigen::Matrix3cd> svd(liouvillian.diag_block, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (!(sv(1) > 1e-10 * sv(0))) {
        throw Error(ErrorKind::DegenerateLimitCycle,
                    "population dynamics has more than one stationary state");
    }
    Eigen::Vector3cd p = svd.matrixV().col(2);
    p /= p.sum();

    DensityMatrix rho;
    rho.order = 0;
    double total = 0.0;
    for (int i = 0; i < 3; ++i) {
        double v = p(i).real();
        if (v < 1e-15) {
            if (v < -1e-12) {
                throw Error(ErrorKind::DegenerateLimitCycle, "stationary populations are not positive");
            }
            v = 0.0;
        }
        rho.entries(i, i) = v;
        total += v;
    }
    rho.entries /= total;
    return rho;
}

}  // namespace spinsync
