#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "../oracles/frozen_oracles.hpp"
#include "qprab/errors.hpp"
#include "qprab/qsolve.hpp"

using namespace qprab;
using doctest::Approx;

namespace {
const QContext kHalf(0.5);
const PrabhakarParams kP(0.9, 0.6, 0.4, 0.05);

Rhs linear(double lambda) {
    return [lambda](double, double y) { return lambda * y; };
}

SolverConfig config(double h) {
    SolverConfig cfg;
    cfg.h = h;
    return cfg;
}

double sup_diff(const SolverReport& a, const SolverReport& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) d = std::max(d, std::abs(a.values[i] - b.values[i]));
    return d;
}
}  // namespace

TEST_CASE("CauchyProblem validation") {
    CHECK_THROWS_AS(CauchyProblem(kP.with_beta(1.2), 0.0, 1.0, 1.0, linear(0.3)), DomainError);
    CHECK_THROWS_AS(CauchyProblem(kP, 0.0, 1.0, 0.0, linear(0.3)), DomainError);
    CHECK_THROWS_AS(CauchyProblem(kP, 1.0, 0.5, 1.0, linear(0.3)), DomainError);
    CHECK_THROWS_AS(CauchyProblem(kP, -0.1, 0.5, 1.0, linear(0.3)), DomainError);
    CHECK_THROWS_AS(CauchyProblem(kP, 0.0, 1.0, 1.0, Rhs{}), DomainError);
    CHECK_THROWS_AS(CauchyProblem(kP, 0.0, 1.0, 1.0, linear(0.3), -1.0), DomainError);
    const CauchyProblem bad(kP, 0.0, 1.0, 1.0, [](double, double y) {
        if (y > 5.0) throw std::runtime_error("too large");
        return std::log(y);
    });
    CHECK_THROWS_AS(bad.eval_rhs(0.5, 6.0), RhsDomainError);
    CHECK_THROWS_AS(bad.eval_rhs(0.5, -1.0), RhsDomainError);
    CHECK(bad.eval_rhs(0.5, 1.0) == 0.0);
    CHECK(bad.with_xi0(2.0).xi0() == 2.0);
}

TEST_CASE("working lattice") {
    const CauchyProblem p0(kP, 0.0, 1.0, 1.0, linear(0.3));
    const WorkingLattice l0(kHalf, p0, config(0.5));
    CHECK(l0.size() == 64);
    CHECK(l0.nodes().front() == 0.5);
    CHECK(l0.index_of(0.125) == 2);
    CHECK(l0.index_of(0.3) == -1);
    const CauchyProblem pa(kP, 0.125, 1.0, 1.0, linear(0.3));
    const WorkingLattice la(kHalf, pa, config(1.0));
    CHECK(la.size() == 4);
    CHECK(la.nodes().back() == 0.125);
    CHECK_THROWS_AS(WorkingLattice(kHalf, CauchyProblem(kP, 0.3, 1.0, 1.0, linear(0.3)), config(1.0)), DomainError);
    CHECK_THROWS_AS(WorkingLattice(kHalf, p0, config(2.0)), DomainError);
}

TEST_CASE("contraction constant") {
    CHECK(contraction_constant(kHalf, CauchyProblem(kP, 0.0, 1.0, 1.0, linear(0.0), 0.0), 0.5) == 0.0);
    const CauchyProblem p0(kP.with_omega(0.0), 0.0, 1.0, 1.0, linear(1.0), 1.0);
    CHECK(contraction_constant(kHalf, p0, 0.5) == Approx(std::pow(0.5, 0.6) / q_gamma(kHalf, 1.6).value).epsilon(1e-14));
    const CauchyProblem p(kP, 0.0, 1.0, 1.0, linear(1.0), 1.0);
    const double d_inv = contraction_constant(kHalf, p, 0.5, KernelOmega::Inverse);
    CHECK(d_inv == Approx(oracle::kDelta1_Inverse).epsilon(1e-13));
    CHECK(d_inv < 1.0);
    CHECK(contraction_constant(kHalf, p, 0.5, KernelOmega::AsStated) == Approx(oracle::kDelta1_AsStated).epsilon(1e-13));
    // Without a Lipschitz constant it is estimated from rhs samples.
    const CauchyProblem est(kP, 0.0, 1.0, 1.0, linear(0.3));
    const ContractionEstimate e = contraction_estimate(kHalf, est, config(0.5));
    CHECK(e.heuristic);
    CHECK(e.delta1 == Approx(0.3 * oracle::kDelta1_Inverse).epsilon(1e-6));
}

TEST_CASE("initial iterate") {
    const CauchyProblem p(kP, 0.0, 1.0, 2.0, linear(0.3));
    CHECK(initial_iterate(kHalf, p)(0.5) == Approx(2.0 * oracle::kInitialIterate_Inverse).epsilon(1e-13));
    CHECK(initial_iterate(kHalf, p, KernelOmega::AsStated)(0.5) ==
          Approx(2.0 * oracle::kInitialIterate_AsStated).epsilon(1e-13));
    const CauchyProblem classical(PrabhakarParams(0.9, 1.0, 0.0, 0.0), 0.0, 1.0, 1.5, linear(0.3));
    for (double x : {0.1, 0.7}) CHECK(initial_iterate(kHalf, classical)(x) == Approx(1.5).epsilon(1e-15));
}

TEST_CASE("picard_step") {
    const CauchyProblem zero(kP, 0.0, 1.0, 1.0, [](double, double) { return 0.0; });
    const QFunction y0 = initial_iterate(kHalf, zero);
    const QFunction y1 = picard_step(kHalf, zero, config(0.5), y0);
    for (double x : {0.5, 0.125}) CHECK(y1(x) == Approx(y0(x)).epsilon(1e-15));
    // Constant rhs: y0 + c x^beta e^gamma_{alpha,beta+1}[w x^alpha], w the kernel omega.
    const double c = 0.7;
    const CauchyProblem cst(kP, 0.0, 1.0, 1.0, [c](double, double) { return c; });
    const double w = kernel_omega(kHalf, cst);
    const QFunction s1 = picard_step(kHalf, cst, config(0.5), initial_iterate(kHalf, cst));
    for (double x : {0.5, 0.25})
        CHECK(s1(x) == Approx(initial_iterate(kHalf, cst)(x) +
                              c * std::pow(x, 0.6) * q_prabhakar(kHalf, 0.9, 1.6, 0.4, w * std::pow(x, 0.9)).value)
                           .epsilon(1e-10));
    // Linear rhs, one step: y0 + lambda PI^{alpha,beta,gamma,w} y0, compared with a direct evaluation.
    const double lambda = 0.3;
    const CauchyProblem lin(kP, 0.0, 1.0, 1.0, linear(lambda));
    const QFunction y0l = initial_iterate(kHalf, lin);
    const QFunction l1 = picard_step(kHalf, lin, config(0.5), y0l);
    for (double x : {0.5, 0.25})
        CHECK(l1(x) == Approx(y0l(x) + lambda * prabhakar_q_integral(kHalf, kP.with_omega(w), 0.0, y0l, x).value)
                           .epsilon(1e-10));
}

TEST_CASE("solve") {
    SUBCASE("zero rhs converges immediately") {
        const CauchyProblem zero(kP, 0.0, 1.0, 1.0, [](double, double) { return 0.0; }, 0.0);
        const SolverReport r = solve(kHalf, zero, config(0.5));
        CHECK(r.converged);
        CHECK(r.iterations == 1);
        CHECK(volterra_residual(kHalf, zero, config(0.5), r.solution) < 1e-12);
        CHECK(initial_condition_value(kHalf, zero, config(0.5), r.solution) == Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("linear rhs") {
        const CauchyProblem lin(kP, 0.0, 1.0, 1.0, linear(0.3), 0.3);
        const SolverConfig cfg = config(0.5);
        const SolverReport r = solve(kHalf, lin, cfg);
        REQUIRE(r.converged);
        CHECK(r.contraction_ok);
        CHECK(r.truncated_at_h);
        CHECK(r.delta1 == Approx(0.3 * oracle::kDelta1_Inverse).epsilon(1e-12));
        for (std::size_t m = 1; m < r.residual_history.size(); ++m)
            if (r.residual_history[m - 1] > 1e-13)
                CHECK(r.residual_history[m] / r.residual_history[m - 1] <= r.delta1 + 1e-3);
        CHECK(volterra_residual(kHalf, lin, cfg, r.solution) <= 10 * cfg.tol);
        CHECK(std::abs(initial_condition_value(kHalf, lin, cfg, r.solution) - 1.0) <= 1e-5);
        CHECK(differential_residual(kHalf, lin, cfg, r.solution) <= 1e-4);
        // Self-consistency across tolerances.
        SolverConfig loose = cfg;
        loose.tol = 1e-8;
        CHECK(sup_diff(solve(kHalf, lin, loose), r) <= 1e-7);
        // Linearity in xi0.
        const SolverReport r2 = solve(kHalf, lin.with_xi0(2.0), cfg);
        for (std::size_t i = 0; i < r.values.size(); i += 7) CHECK(r2.values[i] == Approx(2.0 * r.values[i]).epsilon(1e-9));
        // Uniqueness: the zero starting iterate reaches the same fixed point.
        SolverConfig zero_start = cfg;
        zero_start.start = StartIterate::Zero;
        CHECK(sup_diff(solve(kHalf, lin, zero_start), r) <= 10 * cfg.tol);
    }
    SUBCASE("volterra residual of y0 equals sup |PI f(., y0)|") {
        const CauchyProblem cst(kP, 0.0, 1.0, 1.0, [](double, double) { return 0.7; });
        const SolverConfig cfg = config(0.5);
        const double expected = 0.7 * std::pow(0.5, 0.6) *
                                q_prabhakar(kHalf, 0.9, 1.6, 0.4, kernel_omega(kHalf, cst) * std::pow(0.5, 0.9)).value;
        CHECK(volterra_residual(kHalf, cst, cfg, initial_iterate(kHalf, cst)) == Approx(expected).epsilon(1e-10));
    }
    SUBCASE("positive lower limit with beta = 1") {
        const CauchyProblem p(kP.with_beta(1.0), 0.125, 1.0, 1.0, linear(0.3), 0.3);
        const SolverConfig cfg = config(1.0);
        const SolverReport r = solve(kHalf, p, cfg);
        REQUIRE(r.converged);
        CHECK(volterra_residual(kHalf, p, cfg, r.solution) <= 10 * cfg.tol);
        CHECK(std::abs(initial_condition_value(kHalf, p, cfg, r.solution) - 1.0) <= 1e-5);
        CHECK(differential_residual(kHalf, p, cfg, r.solution) <= 1e-4);
    }
    SUBCASE("iteration cap reports non-convergence") {
        const CauchyProblem lin(kP, 0.0, 1.0, 1.0, linear(0.3), 0.3);
        SolverConfig cfg = config(0.5);
        cfg.max_iter = 2;
        const SolverReport r = solve(kHalf, lin, cfg);
        CHECK_FALSE(r.converged);
        CHECK(r.iterations == 2);
    }
}
