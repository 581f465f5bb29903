#include <doctest.h>

#include <cmath>

#include "../oracles/frozen_oracles.hpp"
#include "qprab/errors.hpp"
#include "qprab/qfrac.hpp"

using namespace qprab;
using doctest::Approx;

namespace {
const QContext kHalf(0.5);
const QFunction kOne([](double) { return 1.0; });
const QFunction kPoly([](double t) { return 1.0 - 0.5 * t + 2.0 * t * t; });
const PrabhakarParams kP(0.9, 0.6, 0.4, 0.05);

QFunction monomial(const QContext& ctx, double lambda) {
    return QFunction([ctx, lambda](double t) { return q_power_frac(ctx, t, 0.0, lambda); });
}
}  // namespace

TEST_CASE("rl_q_integral") {
    for (double x : {0.3, 1.0})
        CHECK(rl_q_integral(kHalf, 1.0, 0.25 * x, kPoly, x).value ==
              Approx(q_integral(kHalf, kPoly, 0.25 * x, x).value).epsilon(1e-14));
    CHECK(rl_q_integral(kHalf, 0.7, 0.0, monomial(kHalf, 1.3), 1.0).value ==
          Approx(oracle::kRLInt_a0p7_l1p3).epsilon(1e-12));
    for (double x : {0.25, 0.8})
        CHECK(rl_q_integral(kHalf, 0.7, 0.0, kOne, x).value ==
              Approx(std::pow(x, 0.7) / q_gamma(kHalf, 1.7).value).epsilon(1e-13));
    CHECK_THROWS_AS(rl_q_integral(kHalf, 0.0, 0.0, kOne, 1.0), DomainError);
    CHECK_THROWS_AS(rl_q_integral(kHalf, 0.5, -0.1, kOne, 1.0), DomainError);
}

TEST_CASE("rl_q_derivative") {
    CHECK(rl_q_derivative(kHalf, 1.0, 0.0, QFunction([](double t) { return t; }), 0.6) == Approx(1.0).epsilon(1e-13));
    const QFunction inner = FracOperatorSpec::rl_integral(0.5, 0.0).bind(kHalf, kPoly);
    const QFunction i07 = FracOperatorSpec::rl_integral(0.7, 0.0).bind(kHalf, kPoly);
    for (int k = 0; k < 4; ++k) {
        const double x = std::pow(0.5, k);
        CHECK(rl_q_derivative(kHalf, 0.5, 0.0, inner, x) == Approx(kPoly(x)).epsilon(1e-9));
        CHECK(rl_q_derivative(kHalf, 0.3, 0.0, i07, x) ==
              Approx(rl_q_integral(kHalf, 0.4, 0.0, kPoly, x).value).epsilon(1e-8));
    }
}

TEST_CASE("rl_bound_constant") {
    CHECK(rl_bound_constant(kHalf, 1.0, 0.0, 1.7) == Approx(1.7).epsilon(1e-15));
    CHECK(rl_bound_constant(kHalf, 0.5, 0.0, 1.0) == Approx(oracle::kRLBound_a0p5).epsilon(1e-14));
    CHECK(rl_bound_constant(kHalf, 1.0, 0.25, 1.0) == Approx(0.875).epsilon(1e-15));
    CHECK_THROWS_AS(rl_bound_constant(kHalf, 1.0, 1.0, 0.5), DomainError);
}

TEST_CASE("prabhakar_q_integral") {
    // omega = 0 collapses to the RL integral of order beta.
    for (double x : {0.4, 1.0})
        CHECK(prabhakar_q_integral(kHalf, PrabhakarParams(0.9, 0.6, 3.0, 0.0), 0.0, kPoly, x).value ==
              Approx(rl_q_integral(kHalf, 0.6, 0.0, kPoly, x).value).epsilon(1e-13));
    // f = 1: x^beta e^gamma_{alpha,beta+1}[omega x^alpha] and the brute-force mpmath Jackson sum.
    const double closed = q_prabhakar(kHalf, 0.9, 1.6, 0.4, 0.05).value;
    const SeriesValue v = prabhakar_q_integral(kHalf, kP, 0.0, kOne, 1.0);
    CHECK(v.converged);
    CHECK(v.value == Approx(closed).epsilon(1e-12));
    CHECK(v.value == Approx(oracle::kPI_one_direct).epsilon(1e-12));
    CHECK(prabhakar_q_integral(kHalf, kP, 0.0, QFunction([](double t) { return t; }), 0.5).value ==
          Approx(oracle::kPI_linear_direct).epsilon(1e-12));
    // Kernel action on the g-family with omega' = q^gamma omega.
    const double wp = omega_prime(kHalf, kP);
    const double mu = 0.8, sigma = -0.3;
    const QFunction fam([wp, mu, sigma](double t) { return kernel_g(QContext(0.5), 0.9, mu, sigma, wp, t, 0.0); });
    for (double x : {0.25, 1.0})
        CHECK(prabhakar_q_integral(kHalf, kP, 0.0, fam, x).value ==
              Approx(kernel_g(kHalf, 0.9, 0.6 + mu, 0.4 + sigma, 0.05, x, 0.0).value).epsilon(1e-10));
}

TEST_CASE("prabhakar_q_derivative") {
    // g^{alpha,beta}_{gamma,w}(., a/q) is annihilated when w = q^-gamma omega.
    const double wi = inverse_omega(kHalf, kP);
    for (double a : {0.0, 0.125}) {
        const QFunction g([wi, a](double t) {
            return t <= a ? SeriesValue::exact(0.0) : kernel_g(QContext(0.5), 0.9, 0.6, 0.4, wi, t, a / 0.5);
        });
        CHECK(std::abs(prabhakar_q_derivative(kHalf, kP, a, g, 0.5)) < 1e-10);
    }
    // beta = 1, gamma = 0, omega = 0: plain Jackson derivative.
    const QFunction cube([](double t) { return t * t * t; });
    CHECK(prabhakar_q_derivative(kHalf, PrabhakarParams(0.9, 1.0, 0.0, 0.0), 0.0, cube, 0.6) ==
          Approx(q_derivative(kHalf, cube, 0.6)).epsilon(1e-13));
    // beta = 1 with gamma omega != 0: the inner order-zero integral is not the identity.
    const double plain = q_derivative(kHalf, cube, 0.6);
    const double full = prabhakar_q_derivative(kHalf, PrabhakarParams(0.9, 1.0, 0.4, 0.3), 0.0, cube, 0.6);
    CHECK(std::abs(full - plain) > 1e-4);
}

TEST_CASE("omega shifts") {
    CHECK(omega_prime(kHalf, PrabhakarParams(0.9, 0.6, 0.0, 0.3)) == 0.3);
    CHECK(omega_prime(kHalf, PrabhakarParams(0.9, 0.6, 0.4, 0.0)) == 0.0);
    CHECK(omega_prime(kHalf, PrabhakarParams(0.9, 0.6, 2.0, 1.0)) == Approx(0.25).epsilon(1e-15));
    CHECK(inverse_omega(kHalf, PrabhakarParams(0.9, 0.6, 2.0, 1.0)) == Approx(4.0).epsilon(1e-15));
    CHECK(lambda_shift(kHalf, kP, 1).omega() == omega_prime(kHalf, kP));
    CHECK(lambda_shift(kHalf, PrabhakarParams(0.9, 0.6, 0.0, 0.3), 3).omega() == 0.3);
    CHECK(lambda_shift(kHalf, PrabhakarParams(0.9, 0.6, 1.0, 1.0), 2).omega() == Approx(0.25).epsilon(1e-15));
    CHECK(companion_omega(kHalf, kP, Companion::OmegaPrime) == omega_prime(kHalf, kP));
    CHECK(companion_omega(kHalf, kP, Companion::InverseOmega) == inverse_omega(kHalf, kP));
}

TEST_CASE("prabhakar_bound_constant") {
    const PrabhakarParams p(0.9, 0.6, 0.4, 0.1);
    CHECK(prabhakar_bound_constant(kHalf, p.with_omega(0.0), 0.25, 1.0).value ==
          Approx(q_power_frac(kHalf, 1.0, 0.125, 0.6).value / q_gamma(kHalf, 1.6).value).epsilon(1e-14));
    CHECK(prabhakar_bound_constant(kHalf, p, 0.0, 1.0).value ==
          Approx(q_mittag_leffler(kHalf, 0.9, 1.6, 0.1).value).epsilon(1e-14));
    CHECK(prabhakar_bound_constant(kHalf, p, 0.25, 1.0).value == Approx(oracle::kPrabBound_q05).epsilon(1e-13));
    CHECK(prabhakar_bound_constant(kHalf, p.with_omega(-0.1), 0.25, 1.0).value ==
          Approx(oracle::kPrabBound_q05).epsilon(1e-13));
    CHECK_THROWS_AS(prabhakar_bound_constant(kHalf, p.with_gamma(1.0), 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(prabhakar_bound_constant(kHalf, p.with_omega(5.0), 0.0, 1.0), ConvergenceDomainError);
}

TEST_CASE("FracOperatorSpec") {
    const FracOperatorSpec ri = FracOperatorSpec::rl_integral(0.7, 0.0);
    CHECK(ri.kind() == OperatorKind::RlIntegral);
    CHECK(std::string(to_string(ri.kind())) == "RL_INTEGRAL");
    CHECK(FracOperatorSpec::rl_derivative(1.3, 0.0).derivative_steps() == 2);
    CHECK(FracOperatorSpec::prabhakar_derivative(kP, 0.0).derivative_steps() == 1);
    CHECK(FracOperatorSpec::prabhakar_integral(kP, 0.25).lower_limit() == 0.25);
    CHECK(ri.apply(kHalf, kOne, 0.5).value == Approx(rl_q_integral(kHalf, 0.7, 0.0, kOne, 0.5).value));
    const QFunction bound = ri.bind(kHalf, kOne);
    CHECK(bound(0.5) == Approx(rl_q_integral(kHalf, 0.7, 0.0, kOne, 0.5).value));
    CHECK_THROWS_AS(FracOperatorSpec::rl_integral(-1.0, 0.0), DomainError);
}

TEST_CASE("semigroup") {
    const double mu = 0.8, sigma = -0.3;
    CHECK(check_semigroup(kHalf, kP, mu, sigma, 0.0, kOne, 1.0) < 1e-6);
    CHECK(prabhakar_q_integral(kHalf, PrabhakarParams(0.9, 1.4, 0.1, 0.05), 0.0, kOne, 1.0).value ==
          Approx(oracle::kPI_semigroup_rhs).epsilon(1e-12));
    // sigma = -gamma: the composition is the RL integral of order beta + mu.
    const QFunction inner =
        FracOperatorSpec::prabhakar_integral(PrabhakarParams(0.9, mu, -0.4, omega_prime(kHalf, kP)), 0.0).bind(kHalf, kPoly);
    const double lhs = prabhakar_q_integral(kHalf, kP, 0.0, inner, 1.0).value;
    CHECK(lhs == Approx(rl_q_integral(kHalf, 0.6 + mu, 0.0, kPoly, 1.0).value).epsilon(1e-9));
    // omega = 0: RL semigroup.
    CHECK(check_semigroup(kHalf, kP.with_omega(0.0), mu, sigma, 0.0, kPoly, 0.5) < 1e-9);
    CHECK(check_semigroup(kHalf, kP, mu, sigma, 0.125, kPoly, 1.0) < 1e-6);
}

TEST_CASE("inverse identities") {
    const QFunction h([](double t) { return 1.0 + t; });
    for (double a : {0.0, 0.125}) {
        CHECK(check_right_inverse(kHalf, kP, a, kPoly, 1.0, Companion::InverseOmega) < 1e-6);
        const QFunction f = FracOperatorSpec::prabhakar_integral(kP.with_omega(inverse_omega(kHalf, kP)), a).bind(kHalf, h);
        CHECK(check_left_inverse_with_initial(kHalf, kP, a, f, 1.0, Companion::InverseOmega) < 1e-6);
    }
    const double wi = inverse_omega(kHalf, kP);
    const QFunction g([wi](double t) { return kernel_g(QContext(0.5), 0.9, 0.6, 0.4, wi, t, 0.0); });
    CHECK(check_left_inverse_with_initial(kHalf, kP, 0.0, g, 0.5, Companion::InverseOmega) < 1e-6);
    // The classical case: I_q D_q f = f - f(a).
    const PrabhakarParams classical(0.9, 1.0, 0.0, 0.0);
    CHECK(check_left_inverse_with_initial(kHalf, classical, 0.25, kPoly, 1.0) < 1e-9);
    CHECK(check_right_inverse(kHalf, classical, 0.0, kPoly, 0.5) < 1e-9);
    // With omega' = q^gamma omega on the integral side the composition is not the identity.
    CHECK(check_right_inverse(kHalf, kP, 0.0, kPoly, 1.0, Companion::OmegaPrime) > 1e-3);
}

TEST_CASE("initial_value") {
    // (PI^{alpha,1-beta,-gamma,omega} g)(0+) = 1 for g = g^{alpha,beta}_{gamma,q^-gamma omega}(., 0).
    const double wi = inverse_omega(kHalf, kP);
    const QFunction g([wi](double t) { return kernel_g(QContext(0.5), 0.9, 0.6, 0.4, wi, t, 0.0); });
    const SeriesValue v = initial_value(kHalf, kP, 0.0, g, 1.0);
    CHECK(v.converged);
    CHECK(v.value == Approx(1.0).epsilon(1e-6));
    // A Prabhakar integral has zero initial value.
    const QFunction f = FracOperatorSpec::prabhakar_integral(kP.with_omega(wi), 0.0).bind(kHalf, kOne);
    CHECK(std::abs(initial_value(kHalf, kP, 0.0, f, 1.0).value) < 1e-6);
    CHECK_THROWS_AS(initial_value(kHalf, kP.with_beta(1.5), 0.0, f, 1.0), DomainError);
}
