#include <cmath>
#include <random>

#include "doctest.h"
#include "spinsync/signal.hpp"
#include "spinsync/spin_core.hpp"

using namespace spinsync;

namespace {

Matrix3 ket_bra(int m, int n) {
    Matrix3 op = Matrix3::Zero();
    op(index_of(m), index_of(n)) = 1.0;
    return op;
}

}  // namespace

TEST_CASE("signal Hamiltonian matrix elements") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> n;
    for (int k = 0; k < 20; ++k) {
        const SignalSpec s{{n(rng), n(rng)}, {n(rng), n(rng)}, {n(rng), n(rng)}};
        const Matrix3 h = build_hext(s);
        // written from the transition picture
        Matrix3 raising = std::sqrt(2.0) * s.t01 * ket_bra(1, 0) + std::sqrt(2.0) * s.tm10 * ket_bra(0, -1) +
                          2.0 * s.tm11 * ket_bra(1, -1);
        CHECK((h - raising - raising.adjoint()).norm() < 1e-12);
        CHECK(h.diagonal().norm() == 0.0);
        CHECK(is_hermitian(h));
    }
}

TEST_CASE("semi-classical drive") {
    const auto& s = spin_operators();
    CHECK((build_hext({0.5, 0.5, 0.0}) - s.sx).norm() < 1e-14);
    const SignalSpec pi = semiclassical(kPi);
    CHECK(std::abs(pi.t01 - Complex(-0.5, 0.0)) < 1e-15);
    CHECK(std::abs(pi.tm10 - Complex(-0.5, 0.0)) < 1e-15);
    // tones e^{i phi}/2 give cos(phi) S_x - sin(phi) S_y
    CHECK((build_hext(semiclassical(kPi / 2.0)) + s.sy).norm() < 1e-14);
    for (double phi : {0.3, 1.7, -2.2}) {
        CHECK((build_hext(semiclassical(phi)) - std::cos(phi) * s.sx + std::sin(phi) * s.sy).norm() < 1e-14);
    }
}

TEST_CASE("pure squeezing tone") {
    const Matrix3 h = build_hext({0.0, 0.0, 1.0});
    CHECK(std::abs(h(0, 2) - 2.0) < 1e-14);
    CHECK(std::abs(h(2, 0) - 2.0) < 1e-14);
    Matrix3 rest = h;
    rest(0, 2) = rest(2, 0) = 0.0;
    CHECK(rest.norm() == 0.0);
}

TEST_CASE("van der Pol parametrization") {
    const SignalSpec lower = from_vdp_params({1.0, kPi / 2.0, 0.0, 0.0});
    CHECK(std::abs(lower.t01) < 1e-15);
    CHECK(lower.tm10.real() == doctest::Approx(1.0 / std::sqrt(2.0)));
    const SignalSpec direct = from_vdp_params({1.0, 0.0, 0.0, 1.0}, 0.4);
    CHECK(direct.t01 == Complex(1.0, 0.0));
    CHECK(std::abs(direct.tm11 - std::polar(1.0 / std::sqrt(2.0), 0.4)) < 1e-15);
    // equal oscillator tones give t01 = sqrt2 tm10
    const SignalSpec semi = from_vdp_params({1.0, kPi / 4.0, 0.0, 0.0});
    CHECK(std::abs(semi.t01 - std::sqrt(2.0) * semi.tm10) < 1e-15);
}

TEST_CASE("equatorial parametrization") {
    const SignalSpec a = from_equatorial_angles(kPi / 4.0, 0.0);
    CHECK(std::abs(a.t01 - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(a.tm10 - 1.0 / std::sqrt(2.0)) < 1e-15);
    const SignalSpec b = from_equatorial_angles(kPi / 4.0, kPi);
    CHECK(std::abs(b.t01 + 1.0 / std::sqrt(2.0)) < 1e-15);
    const SignalSpec c = from_equatorial_angles(0.0, 1.1);
    CHECK(std::abs(c.t01 - std::polar(1.0, 1.1)) < 1e-15);
    CHECK(c.tm10 == 0.0);
}

TEST_CASE("scaling and zero detection") {
    const SignalSpec s{1.0, 2.0, Complex(0.0, 1.0)};
    const SignalSpec t = s.scaled(Complex(0.0, 2.0));
    CHECK(t.tm11 == Complex(-2.0, 0.0));
    CHECK((build_hext(s.scaled(3.0)) - 3.0 * build_hext(s)).norm() < 1e-13);
    CHECK(SignalSpec{}.is_zero());
    CHECK_FALSE(s.is_zero());
}
