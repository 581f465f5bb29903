#include <doctest.h>

#include <cmath>

#include "../oracles/frozen_oracles.hpp"
#include "qprab/errors.hpp"
#include "qprab/qspecial.hpp"

using namespace qprab;
using doctest::Approx;

namespace {
const QContext kHalf(0.5);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(PrabhakarParams(0.0, 0.6, 0.4, 0.1), DomainError);
    CHECK_THROWS_AS(PrabhakarParams(0.9, -0.1, 0.4, 0.1), DomainError);
    CHECK_THROWS_AS(PrabhakarParams(0.9, 0.6, std::nan(""), 0.1), DomainError);
    CHECK_NOTHROW(PrabhakarParams(0.9, 0.6, -3.0, -2.0));
    CHECK_THROWS_AS(q_mittag_leffler(kHalf, -1.0, 1.0, 0.1), DomainError);
}

TEST_CASE("q_mittag_leffler") {
    CHECK(q_mittag_leffler(kHalf, 0.8, 1.7, 0.0).value == Approx(1.0 / q_gamma(kHalf, 1.7).value).epsilon(1e-15));
    const SeriesValue v = q_mittag_leffler(kHalf, 1.0, 1.0, 0.5);
    CHECK(v.converged);
    CHECK(v.value == Approx(oracle::kML_q05_a1_b1_z0p5).epsilon(1e-14));
    // 100-term brute force using q_gamma.
    double brute = 0.0;
    for (int n = 0; n < 100; ++n) brute += std::pow(0.5, n) / q_gamma(kHalf, n + 1.0).value;
    CHECK(v.value == Approx(brute).epsilon(1e-14));
    CHECK(q_mittag_leffler(kHalf, 0.5, 1.0, 1.0).value == Approx(oracle::kML_q05_a0p5_b1_z1).epsilon(1e-13));
    // |z| (1-q)^alpha = 1.2
    CHECK_THROWS_AS(q_mittag_leffler(kHalf, 1.0, 1.0, 2.4), ConvergenceDomainError);
    CHECK_THROWS_AS(q_mittag_leffler(kHalf, 1.0, 1.0, -2.0), ConvergenceDomainError);
}

TEST_CASE("q_prabhakar") {
    CHECK(q_prabhakar(kHalf, 0.9, 0.6, 0.0, 0.7).value == Approx(1.0 / q_gamma(kHalf, 0.6).value).epsilon(1e-15));
    for (double z : {-0.9, 0.2, 1.1})
        CHECK(q_prabhakar(kHalf, 0.7, 1.2, 1.0, z).value == Approx(q_mittag_leffler(kHalf, 0.7, 1.2, z).value).epsilon(1e-14));
    CHECK(q_prabhakar(kHalf, 0.9, 0.6, 0.4, 0.3).value == Approx(oracle::kPrab_q05_a0p9_b0p6_g0p4_z0p3).epsilon(1e-14));
    CHECK(q_prabhakar(QContext(0.3), 1.5, 2.0, -1.5, -0.8).value ==
          Approx(oracle::kPrab_q03_a1p5_b2_gm1p5_zm0p8).epsilon(1e-14));
    CHECK_THROWS_AS(q_prabhakar(kHalf, 0.9, 0.6, 0.4, 5.0), ConvergenceDomainError);
}

TEST_CASE("q_prabhakar_generalized") {
    const PrabhakarParams p(0.9, 0.6, 0.4, 1.0);
    CHECK(q_prabhakar_generalized(kHalf, p, GeneralizedArgs(1.0, 0.3, 0.0)).value ==
          Approx(q_prabhakar(kHalf, 0.9, 0.6, 0.4, 0.3).value).epsilon(1e-14));
    CHECK(q_prabhakar_generalized(kHalf, p.with_omega(0.0), GeneralizedArgs(0.9, 1.0, 0.25)).value ==
          Approx(1.0 / q_gamma(kHalf, 0.6).value).epsilon(1e-15));
    CHECK(q_prabhakar_generalized(kHalf, p.with_omega(0.2), GeneralizedArgs(0.9, 1.0, 0.25)).value ==
          Approx(oracle::kGenPrab_q05).epsilon(1e-13));
    CHECK_THROWS_AS(GeneralizedArgs(0.9, 0.2, 0.5), DomainError);
    CHECK_THROWS_AS(q_prabhakar_generalized(kHalf, p.with_omega(50.0), GeneralizedArgs(1.0, 1.0, 0.0)),
                    ConvergenceDomainError);
}

TEST_CASE("kernel_g") {
    CHECK(kernel_g(kHalf, 0.9, 1.0, 0.0, 0.3, 0.8, 0.2).value == Approx(1.0).epsilon(1e-15));
    const double w0 = q_power_frac(kHalf, 1.0, 0.5 * 0.25, -0.4).value / q_gamma(kHalf, 0.6).value;
    CHECK(kernel_g(kHalf, 0.9, 0.6, 0.4, 0.0, 1.0, 0.25).value == Approx(w0).epsilon(1e-14));
    CHECK(kernel_g(kHalf, 0.9, 0.6, 0.4, 0.2, 1.0, 0.25).value == Approx(oracle::kKernelG_q05).epsilon(1e-13));
    CHECK(kernel_g(QContext(0.9), 0.7, 1.8, -0.6, -0.3, 0.8, 0.3).value ==
          Approx(oracle::kKernelG_q09_neg).epsilon(1e-12));
    CHECK_THROWS_AS(kernel_g(kHalf, 0.9, 0.6, 0.4, 0.2, 0.1, 0.5), DomainError);
    CHECK_THROWS_AS(kernel_g(kHalf, 0.9, 0.6, 0.4, 0.2, 0.0, 0.0), DomainError);
    CHECK_THROWS_AS(kernel_g(kHalf, 0.9, 0.0, 0.4, 0.2, 1.0, 0.0), DomainError);
}

TEST_CASE("PrabhakarKernel agrees with kernel_g and handles the order-zero kernel") {
    PrabhakarKernel k(kHalf, 0.9, 0.6, 0.4, 0.2);
    for (double s : {0.0, 0.125, 0.5})
        CHECK(k(1.0, s).value == Approx(kernel_g(kHalf, 0.9, 0.6, 0.4, 0.2, 1.0, s).value).epsilon(1e-15));
    PrabhakarKernel z0(kHalf, 0.9, 0.0, 0.0, 0.2);
    CHECK(z0(1.0, 0.25).value == 0.0);
    PrabhakarKernel zw(kHalf, 0.9, 0.0, 0.4, 0.0);
    CHECK(zw(1.0, 0.25).value == 0.0);
    // First term of the regular part: (sigma)_1 omega (x - qs)^(alpha-1) / Gamma_q(alpha) for small omega.
    PrabhakarKernel reg(kHalf, 0.9, 0.0, 0.4, 1e-6);
    const double first = q_pochhammer(kHalf, 0.4, 1) * 1e-6 * q_power_frac(kHalf, 1.0, 0.0, -0.1).value /
                         q_gamma(kHalf, 0.9).value;
    CHECK(reg(1.0, 0.0).value == Approx(first).epsilon(1e-5));
}
