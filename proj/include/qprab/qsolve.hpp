#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "qprab/qfrac.hpp"

namespace qprab {

/// Right-hand side f(x, y) of the Cauchy-type problem.
using Rhs = std::function<double(double, double)>;

/// PD^{alpha,beta,gamma,omega} y = f(x, y) on (a, b],
/// (PI^{alpha,1-beta,-gamma,omega} y)(a+) = xi0, with 0 < beta <= 1.
class CauchyProblem {
public:
    CauchyProblem(const PrabhakarParams& params, double a, double b, double xi0, Rhs rhs,
                  std::optional<double> lipschitz_A = std::nullopt);

    const PrabhakarParams& params() const noexcept { return params_; }
    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    double xi0() const noexcept { return xi0_; }
    const Rhs& rhs() const noexcept { return rhs_; }
    const std::optional<double>& lipschitz_A() const noexcept { return lipschitz_; }

    /// rhs(x, y), with thrown exceptions and non-finite values reported as RhsDomainError.
    double eval_rhs(double x, double y) const;

    CauchyProblem with_xi0(double xi0) const;

private:
    PrabhakarParams params_;
    double a_;
    double b_;
    double xi0_;
    Rhs rhs_;
    std::optional<double> lipschitz_;
};

/// Which omega the Volterra kernel and the initial iterate use.
enum class KernelOmega {
    Inverse,   ///< q^(-gamma) omega: the kernel that inverts PD^{alpha,beta,gamma,omega}
    AsStated,  ///< q^gamma omega
};

enum class StartIterate { Initial, Zero };

struct SolverConfig {
    double h = 0.0;                 ///< working right endpoint, a < h <= b
    std::size_t max_iter = 200;
    double tol = 1e-10;             ///< sup-lattice stopping tolerance
    /// Number of nodes h q^k tabulated when a = 0; 0 selects enough nodes to reach
    /// h * 1e-16 (at least 64).
    std::size_t lattice_depth = 0;
    StartIterate start = StartIterate::Initial;
    KernelOmega kernel_omega = KernelOmega::Inverse;
};

/// omega used in the Volterra kernel for the chosen convention.
double kernel_omega(const QContext& ctx, const CauchyProblem& prob, KernelOmega convention = KernelOmega::Inverse);

/// The nodes on which iterates are tabulated, in decreasing order starting at h.
///
/// For a = 0: h q^k, k < depth (see SolverConfig::lattice_depth). Below the last node the iterate is
/// continued by the initial iterate. For a > 0, a must lie on the lattice of h
/// (a = h q^m); the nodes are h q^k for k <= m.
class WorkingLattice {
public:
    WorkingLattice(const QContext& ctx, const CauchyProblem& prob, const SolverConfig& cfg);

    double h() const noexcept { return h_; }
    const std::vector<double>& nodes() const noexcept { return nodes_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    /// Index k with x = h q^k, or -1 when x is not (to 1e-9 relative) a lattice point.
    long index_of(double x) const;

private:
    double h_;
    double log_q_;
    std::vector<double> nodes_;
};

/// Values on a working lattice, continued by `tail` below the last node (a = 0 only).
QFunction tabulated(const WorkingLattice& lattice, std::vector<double> values, QFunction tail);

/// delta_1 = A M, with M the Prabhakar bound constant on [a, h] for the kernel omega.
double contraction_constant(const QContext& ctx, const CauchyProblem& prob, double h,
                            KernelOmega convention = KernelOmega::Inverse);

struct ContractionEstimate {
    double delta1 = 0.0;     ///< +inf when the bound constant's hypotheses fail
    bool heuristic = false;  ///< no Lipschitz constant given: estimated from rhs samples
};

/// delta_1 from the problem's Lipschitz constant, or, when it is absent, from the
/// largest difference quotient of rhs over the lattice nodes and a grid spanning
/// the initial iterate's values.
ContractionEstimate contraction_estimate(const QContext& ctx, const CauchyProblem& prob, const SolverConfig& cfg);

/// y_0(x) = xi0 g^{alpha,beta}_{gamma,omega_k}(x, a/q), omega_k the kernel omega.
QFunction initial_iterate(const QContext& ctx, const CauchyProblem& prob, KernelOmega convention = KernelOmega::Inverse);

/// y_m = y_0 + PI^{alpha,beta,gamma,omega_k} f(., y_prev(.)), tabulated on the working lattice.
QFunction picard_step(const QContext& ctx, const CauchyProblem& prob, const SolverConfig& cfg, const QFunction& y_prev);

struct SolverReport {
    std::vector<double> nodes;
    std::vector<double> values;
    QFunction solution;
    std::size_t iterations = 0;
    std::vector<double> residual_history;  ///< sup-lattice |y_m - y_(m-1)|, m = 1, 2, ...
    double delta1 = 0.0;
    bool delta1_heuristic = false;         ///< estimated from rhs samples, no Lipschitz constant given
    bool contraction_ok = false;           ///< delta1 < 1
    bool converged = false;
    bool truncated_at_h = false;           ///< h < b: the solution covers (a, h] only
};

/// Picard iteration until the sup-lattice difference of successive iterates is <= tol.
/// A non-converged run is reported with converged = false.
SolverReport solve(const QContext& ctx, const CauchyProblem& prob, const SolverConfig& cfg);

/// sup over the working lattice of |y - y_0 - PI^{alpha,beta,gamma,omega_k} f(., y(.))|.
double volterra_residual(const QContext& ctx, const CauchyProblem& prob, const SolverConfig& cfg, const QFunction& y);

/// (PI^{alpha,1-beta,-gamma,omega} y)(a+), by the lattice-limit procedure from h.
double initial_condition_value(const QContext& ctx, const CauchyProblem& prob, const SolverConfig& cfg,
                               const QFunction& y);

/// max over the first `count` interior lattice nodes of |PD^{alpha,beta,gamma,omega} y - f(., y)|.
/// Node 0 (x = h) and, for a > 0, the two nodes closest to a are excluded.
double differential_residual(const QContext& ctx, const CauchyProblem& prob, const SolverConfig& cfg,
                             const QFunction& y, std::size_t count = 20);

}  // namespace qprab
