#pragma once

#include <cstddef>
#include <vector>

#include "qprab/qcore.hpp"

namespace qprab {

/// Operator parameters (alpha, beta, gamma, omega) with alpha, beta > 0.
class PrabhakarParams {
public:
    PrabhakarParams(double alpha, double beta, double gamma, double omega);

    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }
    double gamma() const noexcept { return gamma_; }
    double omega() const noexcept { return omega_; }

    PrabhakarParams with_beta(double beta) const { return {alpha_, beta, gamma_, omega_}; }
    PrabhakarParams with_gamma(double gamma) const { return {alpha_, beta_, gamma, omega_}; }
    PrabhakarParams with_omega(double omega) const { return {alpha_, beta_, gamma_, omega}; }

private:
    double alpha_;
    double beta_;
    double gamma_;
    double omega_;
};

/// Argument bundle of the generalized function: omega (z - s)_q^delta, s < z.
class GeneralizedArgs {
public:
    GeneralizedArgs(double delta, double z, double s);

    double delta() const noexcept { return delta_; }
    double z() const noexcept { return z_; }
    double s() const noexcept { return s_; }

private:
    double delta_;
    double z_;
    double s_;
};

/// sum_n z^n / Gamma_q(alpha n + beta), for |z| (1-q)^alpha < 1.
SeriesValue q_mittag_leffler(const QContext& ctx, double alpha, double beta, double z);

/// sum_n (gamma)_{n,q} z^n / Gamma_q(alpha n + beta), for |z| (1-q)^alpha < 1.
SeriesValue q_prabhakar(const QContext& ctx, double alpha, double beta, double gamma, double z);

/// sum_n (gamma)_{n,q} omega^n (z - s)_q^(delta n) / Gamma_q(alpha n + beta).
///
/// The q-power is taken with exponent delta*n for every term. The argument is
/// rejected when |omega (z - s)_q^delta| >= (1-q)^(-alpha) (1 - 1e-12).
SeriesValue q_prabhakar_generalized(const QContext& ctx, const PrabhakarParams& p, const GeneralizedArgs& args);

/// g(x, s) = (x - qs)_q^(mu-1) e^sigma_{alpha,mu}[omega (x - q^mu s)_q^alpha; q].
/// Requires x > 0, s >= 0 and qs <= x.
SeriesValue kernel_g(const QContext& ctx, double alpha, double mu, double sigma, double omega, double x, double s);

/// Evaluates g^{alpha,mu}_{sigma,omega}(x, s) at many points, caching the
/// per-term coefficients (sigma)_{n,q} / Gamma_q(alpha n + mu) that do not depend
/// on (x, s). Not thread-safe; make one per thread.
///
/// mu = 0 is accepted: since 1/Gamma_q(0) = 0 the kernel is then the regular part
/// sum_{n>=1} (sigma)_{n,q} omega^n (x - qs)_q^(alpha n - 1) / Gamma_q(alpha n),
/// the kernel of the order-zero Prabhakar integral minus the identity.
class PrabhakarKernel {
public:
    PrabhakarKernel(const QContext& ctx, double alpha, double mu, double sigma, double omega);

    SeriesValue operator()(double x, double s);

    /// The generalized series alone at omega (z - s)_q^delta, without the s < z check.
    SeriesValue series(double delta, double z, double s);

    /// sum_n (sigma)_{n,q} z^n / Gamma_q(alpha n + mu); omega is not used.
    SeriesValue power_series(double z);

private:
    struct Coefficient {
        double value;     // (sigma)_{n,q} (1-q)^(mu-1) (q^(alpha n+mu);q)_inf / (q;q)_inf
        double rel_tail;  // relative truncation error of the product factors
        bool converged;
    };
    const Coefficient& coefficient(std::size_t n);
    SeriesValue order_zero(double x, double s);

    QContext ctx_;
    double alpha_;
    double mu_;
    double sigma_;
    double omega_;
    double limit_;  // (1-q)^(-alpha) (1 - 1e-12)
    SeriesValue q_q_inf_;
    double pochhammer_ = 1.0;
    std::vector<Coefficient> coef_;
};

}  // namespace qprab
