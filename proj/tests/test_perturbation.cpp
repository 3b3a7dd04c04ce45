#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "spinsync/error.hpp"
#include "spinsync/perturbation.hpp"

using namespace spinsync;

namespace {

const double kSqrt2 = std::sqrt(2.0);

LimitCycleSpec equatorial(double gg, double gd, double delta) {
    const auto& s = spin_operators();
    return {{{s.sp * s.sz, gg}, {s.sm * s.sz, gd}}, delta};
}

LimitCycleSpec vdp(double gg, double gd, double delta) {
    const auto& s = spin_operators();
    return {{{s.sz * s.sp - s.sp * s.sz / kSqrt2, gg}, {s.sm * s.sm / kSqrt2, gd}}, delta};
}

Complex random_complex(std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    return {n(rng), n(rng)};
}

SignalSpec random_signal(std::mt19937_64& rng) { return {random_complex(rng), random_complex(rng), random_complex(rng)}; }

LimitCycleSpec random_cycle(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> rate(0.1, 10.0);
    std::uniform_real_distribution<double> detuning(-3.0, 3.0);
    return rng() % 2 ? equatorial(rate(rng), rate(rng), detuning(rng)) : vdp(rate(rng), rate(rng), detuning(rng));
}

// Tones whose two harmonics share a peak, aligned by hand.
SignalSpec auto_align_squeezing_free(const PerturbativeSolver& solver) {
    SignalSpec s{1.0, 0.5, 0.4};
    const auto t = phase_distribution_terms(solver.first_order(s).entries);
    s.tm11 *= std::polar(1.0, 2.0 * t.alpha1 - t.alpha2);
    return s;
}

}  // namespace

TEST_CASE("equatorial first-order coherences") {
    const double gg = 0.7;
    const double gd = 2.5;
    const double delta = 0.9;
    const SignalSpec s{Complex(0.3, -0.4), Complex(1.1, 0.2), 0.0};
    const Matrix3 rho1 = first_order(equatorial(gg, gd, delta), s).entries;
    const Complex i(0.0, 1.0);
    CHECK(std::abs(rho1(0, 1) - (-i * kSqrt2 * s.t01 / (gd + i * delta))) < 1e-12);
    CHECK(std::abs(rho1(1, 2) - (i * kSqrt2 * s.tm10 / (gg + i * delta))) < 1e-12);
    CHECK(std::abs(rho1(0, 2)) < 1e-15);
}

TEST_CASE("equatorial cycle ignores a pure squeezing tone") {
    const SyncResult r = sync_measure(equatorial(1.0, 3.0, 0.2), {0.0, 0.0, 1.0});
    CHECK(r.rho1.entries.norm() == 0.0);
    CHECK(r.s == 0.0);
    CHECK(r.zero_response());
    CHECK_THROWS_AS(epsilon_for_threshold(r.rho1, r.rho1, 0.1), Error);
}

TEST_CASE("zero signal gives zero corrections") {
    const PerturbativeSolver solver(vdp(1.0, 4.0, 0.3));
    for (int k = 1; k <= 3; ++k) {
        CHECK(solver.orders({}, 3)[k].entries.norm() == 0.0);
    }
    const auto dec = eigencoherences(vdp(1.0, 4.0, 0.3), {});
    for (const auto& m : dec.modes) {
        CHECK(std::abs(m.g) == 0.0);
    }
}

TEST_CASE("first order solves the linear response equation") {
    std::mt19937_64 rng(31);
    for (int k = 0; k < 50; ++k) {
        const LimitCycleSpec lc = random_cycle(rng);
        const SignalSpec s = random_signal(rng);
        const PerturbativeSolver solver(lc);
        const Matrix3 rho0 = solver.rho0().entries;
        const Matrix3 rho1 = solver.first_order(s).entries;
        const Matrix3 residual = solver.liouvillian().apply(rho1) + apply_signal(build_hext(s), rho0);
        CHECK(residual.norm() < 1e-11 * (1.0 + rho1.norm()));
        CHECK(rho1.diagonal().norm() == 0.0);
        CHECK(is_hermitian(rho1));
        CHECK(solver.rho0().hs_norm() >= 1.0 / std::sqrt(3.0) - 1e-12);
        CHECK(solver.rho0().hs_norm() <= 1.0 + 1e-12);
    }
}

TEST_CASE("higher orders follow the recursion with zero trace") {
    std::mt19937_64 rng(37);
    for (int k = 0; k < 20; ++k) {
        const LimitCycleSpec lc = random_cycle(rng);
        const SignalSpec s = random_signal(rng);
        const PerturbativeSolver solver(lc);
        const auto rho = solver.orders(s, 4);
        REQUIRE(rho.size() == 5);
        for (int n = 1; n <= 4; ++n) {
            const Matrix3 lhs = solver.liouvillian().apply(rho[n].entries);
            const Matrix3 rhs = -apply_signal(build_hext(s), rho[n - 1].entries);
            CHECK((lhs - rhs).norm() < 1e-10 * (1.0 + rhs.norm()));
            CHECK(std::abs(rho[n].entries.trace()) < 1e-12 * (1.0 + rho[n].entries.norm()));
            CHECK(rho[n].order == n);
        }
        CHECK((kth_order(lc, s, 3).entries - rho[3].entries).norm() < 1e-12 * (1.0 + rho[3].entries.norm()));
    }
}

TEST_CASE("second order moves population evenly to the extremal states") {
    const Matrix3 rho2 = kth_order(equatorial(1.0, 1.0, 0.0), semiclassical(0.0), 2).entries;
    CHECK(rho2(0, 0).real() > 0.0);
    CHECK(rho2(0, 0).real() == doctest::Approx(rho2(2, 2).real()));
    CHECK(rho2(1, 1).real() == doctest::Approx(-2.0 * rho2(0, 0).real()));
}

TEST_CASE("signal strength from the threshold rule") {
    const SyncResult balanced = sync_measure(equatorial(1.0, 1.0, 0.0), semiclassical(0.0), 0.1);
    REQUIRE(balanced.epsilon);
    CHECK(*balanced.epsilon == doctest::Approx(0.1 / kSqrt2).epsilon(1e-12));
    CHECK(balanced.s < 1e-15);
    const SyncResult ten = sync_measure(equatorial(1.0, 10.0, 0.0), semiclassical(0.0), 0.1);
    CHECK(*ten.epsilon == doctest::Approx(0.1 * 10.0 / std::sqrt(101.0)).epsilon(1e-12));
    CHECK(ten.s_over_eta() == doctest::Approx(27.0 / (16.0 * std::sqrt(101.0))).epsilon(1e-12));
    const SyncResult doubled = sync_measure(equatorial(1.0, 10.0, 0.0), semiclassical(0.0).scaled(2.0), 0.1);
    CHECK(*doubled.epsilon == doctest::Approx(*ten.epsilon / 2.0));
    CHECK(*doubled.epsilon * doubled.norm1 == doctest::Approx(*ten.epsilon * ten.norm1));
    CHECK_THROWS_AS(sync_measure(equatorial(1.0, 1.0, 0.0), semiclassical(0.0), 1.5), Error);
    CHECK_THROWS_AS(sync_measure(equatorial(1.0, 1.0, 0.0), semiclassical(0.0), 0.0), Error);
}

TEST_CASE("semi-classical measure approaches 3/16 for imbalanced rates") {
    CHECK(sync_measure(equatorial(1.0, 1e6, 0.0), semiclassical(0.0)).s_over_eta() ==
          doctest::Approx(3.0 / 16.0).epsilon(1e-5));
}

TEST_CASE("measure is invariant under rescaling of the signal") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> scale(1e-3, 1e3);
    for (int k = 0; k < 50; ++k) {
        const PerturbativeSolver solver(random_cycle(rng));
        const SignalSpec s = random_signal(rng);
        const SyncResult a = solver.sync(s);
        const SyncResult b = solver.sync(s.scaled(scale(rng)));
        CHECK(std::abs(a.s - b.s) < 1e-12);
        CHECK(a.s <= 0.1 * std::sqrt(2.0 * (16.0 + 9.0 * kPi * kPi)) / (16.0 * kPi) + 1e-12);
        CHECK(a.s == doctest::Approx(*a.epsilon * max_shifted_phase(a.terms).value).epsilon(1e-12));
        // a complex factor is harmless while only one harmonic is driven
        const SignalSpec single{s.t01, s.tm10, 0.0};
        const Complex lambda = random_complex(rng);
        CHECK(std::abs(solver.sync(single).s - solver.sync(single.scaled(lambda)).s) < 1e-12);
    }
}

TEST_CASE("a global phase changes the measure once both harmonics are driven") {
    // alpha1 and alpha2 both move by the phase of lambda, so their relative
    // alignment 2 alpha1 - alpha2 does not survive
    const PerturbativeSolver solver(vdp(1.0, 5.0, 0.0));
    const SignalSpec s = auto_align_squeezing_free(solver);
    const double aligned = solver.sync(s).s;
    CHECK(solver.sync(s.scaled(Complex(0.0, 1.0))).s < aligned - 1e-4);
    CHECK(solver.sync(s.scaled(-1.0)).s < aligned - 1e-4);
}

TEST_CASE("rotating the tones shifts the locked phase") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    for (int k = 0; k < 30; ++k) {
        const PerturbativeSolver solver(random_cycle(rng));
        const SignalSpec s = random_signal(rng);
        const double alpha = angle(rng);
        const Complex e1 = std::polar(1.0, alpha);
        const SyncResult a = solver.sync(s);
        const SyncResult b = solver.sync({s.t01 * e1, s.tm10 * e1, s.tm11 * e1 * e1});
        CHECK(b.s == doctest::Approx(a.s).epsilon(1e-10));
        CHECK(std::abs(std::remainder(b.phi_star - (a.phi_star - alpha), kTwoPi)) < 1e-7);
        CHECK(a.phi_star >= 0.0);
        CHECK(a.phi_star < kTwoPi);
    }
}

TEST_CASE("exact stationary state") {
    const LimitCycleSpec lc = vdp(1.0, 5.0, 0.4);
    const SignalSpec s{0.6, Complex(0.2, 0.5), 0.3};
    const PerturbativeSolver solver(lc);
    CHECK((solver.full_steady_state(s, 0.0).entries - solver.rho0().entries).norm() < 1e-12);
    for (double eps : {0.1, 1.0, 10.0}) {
        const DensityMatrix rho = solver.full_steady_state(s, eps);
        CHECK(std::abs(rho.entries.trace() - 1.0) < 1e-12);
        CHECK(is_physical(rho.entries, 1e-10));
        const Matrix3 residual = solver.liouvillian().apply(rho.entries) + eps * apply_signal(build_hext(s), rho.entries);
        CHECK(residual.norm() < 1e-11);
    }
    SUBCASE("partial sums converge with the next power of epsilon") {
        const auto orders = solver.orders(s, 2);
        std::vector<double> r;
        for (double eps : {1e-2, 1e-3}) {
            const Matrix3 tail = solver.full_steady_state(s, eps).entries - orders[0].entries - eps * orders[1].entries -
                                 eps * eps * orders[2].entries;
            r.push_back(tail.norm());
        }
        CHECK(std::log10(r[0] / r[1]) == doctest::Approx(3.0).epsilon(0.05));
    }
    SUBCASE("second-order residual scaled by eps^2 stays bounded") {
        const auto rho1 = solver.first_order(s).entries;
        const double a = (solver.full_steady_state(s, 1e-3).entries - solver.rho0().entries - 1e-3 * rho1).norm() / 1e-6;
        const double b = (solver.full_steady_state(s, 1e-4).entries - solver.rho0().entries - 1e-4 * rho1).norm() / 1e-8;
        CHECK(b == doctest::Approx(a).epsilon(0.05));
    }
}

TEST_CASE("average occupation is blind to symmetric transfer") {
    Matrix3 rho0 = Matrix3::Zero();
    rho0(1, 1) = 1.0;
    const PerturbativeSolver solver(equatorial(1.0, 1.0, 0.0));
    for (double eps : {0.05, 1.0, 20.0}) {
        const Matrix3 rho = solver.full_steady_state(semiclassical(0.0), eps).entries;
        CHECK(std::abs(p_avg(rho, rho0)) < 1e-12);
        CHECK(p_max(rho, rho0) > 0.0);
    }
    // large strength: the shifted phase distribution has two maxima
    const Matrix3 strong = solver.full_steady_state(semiclassical(0.0), 20.0).entries;
    const auto t = phase_distribution_terms(strong);
    CHECK(t.b > t.a);

    Matrix3 transfer = Matrix3::Zero();
    transfer.diagonal() << 0.1, -0.2, 0.1;
    CHECK(p_avg(rho0 + transfer, rho0) == doctest::Approx(0.0));
    CHECK(p_max(rho0 + transfer, rho0) == doctest::Approx(0.2));
    CHECK(p_avg(rho0, rho0) == 0.0);
    const Matrix3 first = rho0 + 0.1 * solver.first_order(semiclassical(0.3)).entries;
    CHECK(p_avg(first, rho0) == 0.0);
    CHECK(p_max(first, rho0) == 0.0);
}

TEST_CASE("eigencoherences of the equatorial cycle") {
    const double gg = 1.5;
    const double gd = 0.4;
    const double delta = 0.8;
    const LimitCycleSpec lc = equatorial(gg, gd, delta);
    const SignalSpec s{Complex(0.3, 0.1), 0.7, Complex(0.0, 0.2)};
    const auto dec = eigencoherences(lc, s);
    CHECK(dec.orthonormal);
    std::vector<Complex> sector1;
    for (const auto& m : dec.modes) {
        if (m.sector == 1) {
            sector1.push_back(m.gamma);
        }
    }
    REQUIRE(sector1.size() == 2);
    const Complex i(0.0, 1.0);
    auto has = [&](Complex z) {
        return std::any_of(sector1.begin(), sector1.end(), [&](Complex g) { return std::abs(g - z) < 1e-12; });
    };
    CHECK(has(-gd - i * delta));
    CHECK(has(-gg - i * delta));
    const Matrix3 rho1 = first_order(lc, s).entries;
    CHECK((dec.reconstruct() - rho1).norm() < 1e-10);
    CHECK(dec.mode_norm() == doctest::Approx(rho1.norm()).epsilon(1e-12));
    const Matrix3 drive = apply_signal(build_hext(s), PerturbativeSolver(lc).rho0().entries);
    for (const auto& m : dec.modes) {
        CHECK(std::abs(m.g - (m.mu.adjoint() * drive).trace()) < 1e-12);
    }
}

TEST_CASE("eigencoherences reconstruct non-normal blocks") {
    std::mt19937_64 rng(47);
    for (int k = 0; k < 20; ++k) {
        std::uniform_real_distribution<double> rate(0.2, 8.0);
        const LimitCycleSpec lc = vdp(rate(rng), rate(rng), rate(rng) - 4.0);
        const SignalSpec s = random_signal(rng);
        const auto dec = eigencoherences(lc, s);
        CHECK((dec.reconstruct() - first_order(lc, s).entries).norm() < 1e-10);
        for (const auto& m : dec.modes) {
            CHECK(m.gamma.real() < 0.0);
        }
    }
}
