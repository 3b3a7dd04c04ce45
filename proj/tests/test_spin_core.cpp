#include <cmath>
#include <random>

#include "doctest.h"
#include "spinsync/error.hpp"
#include "spinsync/spin_core.hpp"

using namespace spinsync;

namespace {

Matrix3 random_state(std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    Matrix3 g;
    for (int i = 0; i < 9; ++i) {
        g(i / 3, i % 3) = Complex(n(rng), n(rng));
    }
    const Matrix3 rho = g * g.adjoint();
    return rho / rho.trace();
}

double brute_max(const PhaseDistributionTerms& t) {
    double best = -1e300;
    for (int k = 0; k < 200000; ++k) {
        best = std::max(best, t(-kPi + kTwoPi * k / 200000.0));
    }
    return best;
}

}  // namespace

TEST_CASE("spin-1 operators satisfy the angular momentum algebra") {
    const auto& s = spin_operators();
    const Complex i(0.0, 1.0);
    CHECK((s.sx * s.sy - s.sy * s.sx - i * s.sz).norm() < 1e-14);
    CHECK((s.sy * s.sz - s.sz * s.sy - i * s.sx).norm() < 1e-14);
    const Matrix3 casimir = s.sx * s.sx + s.sy * s.sy + s.sz * s.sz;
    CHECK((casimir - 2.0 * Matrix3::Identity()).norm() < 1e-14);
    CHECK(s.sp(0, 1).real() == doctest::Approx(std::sqrt(2.0)));
    CHECK(s.sp(1, 2).real() == doctest::Approx(std::sqrt(2.0)));
    CHECK(s.sz(0, 0).real() == 1.0);
    CHECK(s.sz(2, 2).real() == -1.0);
}

TEST_CASE("index conventions") {
    CHECK(index_of(1) == 0);
    CHECK(index_of(-1) == 2);
    CHECK(label_of(1) == 0);
    CHECK(sector_of_slot(0, 2) == 2);
    CHECK(vec_index(2, 1) == 5);
}

TEST_CASE("coherent states") {
    const CoherentState north = coherent_state(0.0, 0.3);
    CHECK(std::abs(north.amplitudes(0)) == doctest::Approx(1.0));
    CHECK(std::abs(coherent_state(kPi, 0.0).amplitudes(2)) == doctest::Approx(1.0));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> th(0.0, kPi);
    for (int k = 0; k < 50; ++k) {
        CHECK(coherent_state(th(rng), 2.0 * th(rng)).amplitudes.norm() == doctest::Approx(1.0));
    }
    CHECK_THROWS_AS(coherent_state(-0.1, 0.0), Error);
    CHECK_THROWS_AS(coherent_state(3.2, 0.0), Error);
}

TEST_CASE("Husimi Q of the equatorial state and normalization") {
    Matrix3 zero = Matrix3::Zero();
    zero(1, 1) = 1.0;
    // |<theta phi|0>|^2 = sin^2(theta)/2
    CHECK(husimi_q(zero, kPi / 2.0, 0.7) == doctest::Approx(3.0 / (8.0 * kPi)));
    CHECK(husimi_q(zero, 0.0, 0.0) == doctest::Approx(0.0));
    std::mt19937_64 rng(11);
    for (int k = 0; k < 20; ++k) {
        CHECK(husimi_integral(random_state(rng)) == doctest::Approx(1.0).epsilon(1e-12));
    }
    Matrix3 bad = zero;
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS(husimi_q(bad, 0.3, 0.2), Error);
}

TEST_CASE("closed-form phase distribution matches quadrature") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> phase(-kPi, kPi);
    for (int k = 0; k < 30; ++k) {
        const Matrix3 rho = random_state(rng);
        const auto t = phase_distribution_terms(rho);
        for (int j = 0; j < 8; ++j) {
            const double phi = phase(rng);
            CHECK(t(phi) == doctest::Approx(shifted_phase_quadrature(rho, phi)).epsilon(1e-10));
        }
    }
}

TEST_CASE("phase distribution of a diagonal state vanishes") {
    Matrix3 rho = Matrix3::Zero();
    rho.diagonal() << 0.2, 0.5, 0.3;
    const auto t = phase_distribution_terms(rho);
    CHECK(t.a == 0.0);
    CHECK(t.b == 0.0);
    CHECK(max_shifted_phase(t).value == 0.0);
}

TEST_CASE("phase maximum agrees with a dense scan") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 40; ++k) {
        PhaseDistributionTerms t{u(rng), kTwoPi * u(rng), u(rng), kTwoPi * u(rng)};
        const PhasePeak p = max_shifted_phase(t);
        CHECK(p.value == doctest::Approx(brute_max(t)).epsilon(1e-9));
        CHECK(t(p.phi_star) == doctest::Approx(p.value).epsilon(1e-14));
        CHECK(std::abs(t.derivative(p.phi_star)) < 1e-9);
    }
    SUBCASE("aligned harmonics add") {
        PhaseDistributionTerms t{0.3, 0.4, 0.1, 0.8};
        const PhasePeak p = max_shifted_phase(t);
        CHECK(p.value == doctest::Approx(0.4));
        CHECK(p.phi_star == doctest::Approx(kTwoPi - 0.4));
    }
}

TEST_CASE("rotation about z shifts the phase distribution") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> phase(-kPi, kPi);
    for (int k = 0; k < 20; ++k) {
        const Matrix3 rho = random_state(rng);
        const double alpha = phase(rng);
        const Matrix3 r = rotation_z(alpha);
        const auto t = phase_distribution_terms(rho);
        const auto rotated = phase_distribution_terms(r * rho * r.adjoint());
        const double phi = phase(rng);
        CHECK(rotated(phi) == doctest::Approx(t(phi - alpha)).epsilon(1e-12));
        CHECK(max_shifted_phase(rotated).value == doctest::Approx(max_shifted_phase(t).value).epsilon(1e-12));
    }
}

TEST_CASE("oscillator phase terms use the oscillator prefactors") {
    Matrix3 rho = Matrix3::Zero();
    rho(0, 1) = Complex(0.1, 0.2);
    rho(1, 2) = Complex(0.05, 0.0);
    rho(0, 2) = Complex(0.0, 0.3);
    const auto t = oscillator_phase_terms(rho);
    CHECK(t.a == doctest::Approx(std::abs(rho(0, 1) + rho(1, 2)) / kTwoPi));
    CHECK(t.b == doctest::Approx(0.3 / kTwoPi));
}

TEST_CASE("Gauss-Legendre rule is exact to degree 2n-1") {
    for (int n : {1, 2, 5, 16, 64}) {
        const QuadratureRule rule = gauss_legendre(n);
        REQUIRE(rule.nodes.size() == static_cast<std::size_t>(n));
        for (int p = 0; p <= 2 * n - 1; ++p) {
            double sum = 0.0;
            for (int i = 0; i < n; ++i) {
                sum += rule.weights[i] * std::pow(rule.nodes[i], p);
            }
            const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
            CHECK(sum == doctest::Approx(exact).epsilon(1e-12));
        }
    }
}

TEST_CASE("density matrix helpers") {
    DensityMatrix d;
    d.entries = Matrix3::Identity() / 3.0;
    CHECK(d.hs_norm() == doctest::Approx(1.0 / std::sqrt(3.0)));
    CHECK(is_physical(d.entries));
    Matrix3 neg = Matrix3::Zero();
    neg.diagonal() << 1.5, -0.5, 0.0;
    CHECK_FALSE(is_physical(neg));
    CHECK(wrap_angle(3.0 * kPi) == doctest::Approx(kPi).epsilon(1e-12));
    CHECK(std::abs(wrap_angle(-kTwoPi)) < 1e-15);
}
