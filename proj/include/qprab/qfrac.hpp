#pragma once

#include <cstddef>
#include <optional>

#include "qprab/qcalc.hpp"
#include "qprab/qspecial.hpp"

namespace qprab {

// Riemann-Liouville operators ---------------------------------------------

/// (1/Gamma_q(alpha)) int_a^x (x - qt)_q^(alpha-1) f(t) d_q t.
SeriesValue rl_q_integral(const QContext& ctx, double alpha, double a, const QFunction& f, double x);

/// D_q^n I^(n-alpha) f with n = ceil(alpha); the inner operator is the identity
/// when alpha is an integer.
double rl_q_derivative(const QContext& ctx, double alpha, double a, const QFunction& f, double x);
SeriesValue rl_q_derivative_value(const QContext& ctx, double alpha, double a, const QFunction& f, double x);

/// K = (b - qa)_q^alpha / Gamma_q(alpha + 1), the L^p_q operator-norm bound of I^alpha.
double rl_bound_constant(const QContext& ctx, double alpha, double a, double b);

// Prabhakar operators ------------------------------------------------------

/// int_a^x g^{alpha,beta}_{gamma,omega}(x, t) f(t) d_q t.
SeriesValue prabhakar_q_integral(const QContext& ctx, const PrabhakarParams& p, double a, const QFunction& f,
                                 double x);

/// D_q^n applied to the Prabhakar integral with (alpha, n - beta, -gamma, omega),
/// n = ceil(beta). When beta = n the inner integral is the identity.
double prabhakar_q_derivative(const QContext& ctx, const PrabhakarParams& p, double a, const QFunction& f, double x);
SeriesValue prabhakar_q_derivative_value(const QContext& ctx, const PrabhakarParams& p, double a,
                                         const QFunction& f, double x);

/// omega' = q^gamma omega.
double omega_prime(const QContext& ctx, const PrabhakarParams& p);

/// p with omega replaced by q^(n gamma) omega, n >= 1.
PrabhakarParams lambda_shift(const QContext& ctx, const PrabhakarParams& p, int n);

/// q^(-gamma) omega: the omega for which the Prabhakar integral with
/// (alpha, beta, gamma, .) inverts the Prabhakar derivative with omega.
double inverse_omega(const QContext& ctx, const PrabhakarParams& p);

/// M = (b - qa)_q^beta e_{alpha,beta+1}[|omega| (b - q^(beta+1) a)_q^alpha; q].
/// Requires |gamma| < 1 and |omega (b - q^(beta+1) a)_q^alpha| < (1-q)^alpha.
SeriesValue prabhakar_bound_constant(const QContext& ctx, const PrabhakarParams& p, double a, double b);

// Operator handle -----------------------------------------------------------

enum class OperatorKind { RlIntegral, RlDerivative, PrabhakarIntegral, PrabhakarDerivative };

const char* to_string(OperatorKind kind);

class FracOperatorSpec {
public:
    static FracOperatorSpec rl_integral(double order, double a);
    static FracOperatorSpec rl_derivative(double order, double a);
    static FracOperatorSpec prabhakar_integral(const PrabhakarParams& p, double a);
    static FracOperatorSpec prabhakar_derivative(const PrabhakarParams& p, double a);

    OperatorKind kind() const noexcept { return kind_; }
    /// alpha for the RL operators, beta for the Prabhakar ones.
    double order() const noexcept { return order_; }
    const std::optional<PrabhakarParams>& params() const noexcept { return params_; }
    double lower_limit() const noexcept { return a_; }
    /// ceil(order) for derivatives, 0 for integrals.
    std::size_t derivative_steps() const noexcept { return steps_; }

    SeriesValue apply(const QContext& ctx, const QFunction& f, double x) const;
    /// x -> apply(ctx, f, x), memoized.
    QFunction bind(const QContext& ctx, const QFunction& f) const;

private:
    FracOperatorSpec(OperatorKind kind, double order, std::optional<PrabhakarParams> p, double a);

    OperatorKind kind_;
    double order_;
    std::optional<PrabhakarParams> params_;
    double a_;
    std::size_t steps_;
};

// Identity checks -----------------------------------------------------------

/// The one-sided value (PI^{alpha,1-beta,-gamma,omega} f)(a+), for 0 < beta <= 1.
///
/// For a = 0 the value is the limit of the functional along x q^k, accepted
/// once two successive lattice values differ by less than
/// eps_series * max(1, |value|). For a > 0 the functional is evaluated at a.
SeriesValue initial_value(const QContext& ctx, const PrabhakarParams& p, double a, const QFunction& f, double x);

/// |PI^{alpha,beta,gamma,omega}(PI^{alpha,mu,sigma,omega'} f)(x) - PI^{alpha,beta+mu,gamma+sigma,omega} f(x)|,
/// omega' = q^gamma omega. The order of composition is fixed.
double check_semigroup(const QContext& ctx, const PrabhakarParams& p, double mu, double sigma, double a,
                       const QFunction& f, double x);

/// Which omega the inverse-side Prabhakar integral uses.
enum class Companion {
    OmegaPrime,    ///< q^gamma omega
    InverseOmega,  ///< q^(-gamma) omega
};

/// |PD^{alpha,beta,gamma,omega}(PI^{alpha,beta,gamma,omega_c} f)(x) - f(x)|.
double check_right_inverse(const QContext& ctx, const PrabhakarParams& p, double a, const QFunction& f, double x,
                           Companion companion = Companion::OmegaPrime);

/// |PI^{alpha,beta,gamma,omega_c}(PD^{alpha,beta,gamma,omega} f)(x) - f(x)
///   + g^{alpha,beta}_{gamma,omega_c}(x, a/q) (PI^{alpha,1-beta,-gamma,omega} f)(a+)|, 0 < beta <= 1.
double check_left_inverse_with_initial(const QContext& ctx, const PrabhakarParams& p, double a, const QFunction& f,
                                       double x, Companion companion = Companion::OmegaPrime);

double companion_omega(const QContext& ctx, const PrabhakarParams& p, Companion companion);

}  // namespace qprab
