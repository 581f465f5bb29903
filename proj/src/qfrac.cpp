#include "qprab/qfrac.hpp"

#include <cmath>
#include <limits>

namespace qprab {

namespace {

SeriesValue times(const SeriesValue& k, const SeriesValue& f) {
    return {k.value * f.value, f.terms_used,
            std::abs(k.value) * f.tail_estimate + std::abs(f.value) * k.tail_estimate +
                k.tail_estimate * f.tail_estimate,
            k.converged && f.converged};
}

void check_limits(double a, double x) {
    if (!(a >= 0.0)) throw DomainError("lower limit a must be >= 0");
    if (!(x >= a)) throw DomainError("evaluation point must satisfy x >= a");
}

// The unchecked operator bodies return 0 for x < a: operator values are
// extended by zero below the lower limit, where q-derivatives and off-lattice
// Jackson sums may sample them.

SeriesValue rl_integral_raw(const QContext& ctx, double alpha, double a, const QFunction& f, double x) {
    if (!(alpha > 0.0)) throw DomainError("RL q-integral order must be positive");
    if (x <= a) return SeriesValue::exact(0.0);
    const SeriesValue gamma = q_gamma(ctx, alpha);
    const double q = ctx.q();
    SeriesValue s = detail::jackson_between(ctx, a, x, [&](double t) {
        return times(q_power_frac(ctx, x, q * t, alpha - 1.0), f.sample(t));
    });
    const double inv = 1.0 / gamma.value;
    return {s.value * inv, s.terms_used,
            std::abs(inv) * s.tail_estimate + std::abs(s.value * inv) * gamma.tail_estimate / std::abs(gamma.value),
            s.converged && gamma.converged};
}

QFunction rl_integral_fn(const QContext& ctx, double alpha, double a, const QFunction& f) {
    return QFunction([ctx, alpha, a, f](double x) { return rl_integral_raw(ctx, alpha, a, f, x); }, f.domain(),
                     true);
}

SeriesValue prabhakar_integral_raw(const QContext& ctx, const PrabhakarParams& p, double a, const QFunction& f,
                                   double x) {
    if (x <= a) return SeriesValue::exact(0.0);
    PrabhakarKernel kernel(ctx, p.alpha(), p.beta(), p.gamma(), p.omega());
    return detail::jackson_between(ctx, a, x, [&](double t) { return times(kernel(x, t), f.sample(t)); });
}

QFunction prabhakar_integral_fn(const QContext& ctx, const PrabhakarParams& p, double a, const QFunction& f) {
    return QFunction([ctx, p, a, f](double x) { return prabhakar_integral_raw(ctx, p, a, f, x); }, f.domain(),
                     true);
}

/// PI^{alpha,0,sigma,omega} f = f + int_a^x g^{alpha,0}_{sigma,omega}(x,t) f(t) d_q t, the
/// beta -> 0 limit of the Prabhakar integral; it is the identity when sigma omega = 0.
QFunction order_zero_fn(const QContext& ctx, double alpha, double sigma, double omega, double a, const QFunction& f) {
    if (sigma == 0.0 || omega == 0.0) return f;
    return QFunction(
        [ctx, alpha, sigma, omega, a, f](double x) {
            const SeriesValue fx = f.sample(x);
            if (x <= a) return fx;
            PrabhakarKernel kernel(ctx, alpha, 0.0, sigma, omega);
            const SeriesValue s =
                detail::jackson_between(ctx, a, x, [&](double t) { return times(kernel(x, t), f.sample(t)); });
            return SeriesValue{fx.value + s.value, fx.terms_used + s.terms_used, fx.tail_estimate + s.tail_estimate,
                               fx.converged && s.converged};
        },
        f.domain(), true);
}

/// The inner integral of the Prabhakar derivative: order n - beta with (alpha, -gamma, omega).
QFunction derivative_inner_fn(const QContext& ctx, const PrabhakarParams& p, std::size_t n, double a,
                              const QFunction& f) {
    const double inner_order = static_cast<double>(n) - p.beta();
    if (inner_order == 0.0) return order_zero_fn(ctx, p.alpha(), -p.gamma(), p.omega(), a, f);
    return prabhakar_integral_fn(ctx, PrabhakarParams(p.alpha(), inner_order, -p.gamma(), p.omega()), a, f);
}

std::size_t ceil_order(double order) {
    return static_cast<std::size_t>(std::ceil(order));
}

SeriesValue rl_derivative_raw(const QContext& ctx, double alpha, double a, const QFunction& f, double x) {
    if (!(alpha > 0.0)) throw DomainError("RL q-derivative order must be positive");
    const std::size_t n = ceil_order(alpha);
    const double inner_order = static_cast<double>(n) - alpha;
    if (inner_order == 0.0) return detail::dq_n(ctx, x, n, [&](double t) { return f.sample(t); });
    const QFunction inner = rl_integral_fn(ctx, inner_order, a, f);
    return detail::dq_n(ctx, x, n, [&](double t) { return inner.sample(t); });
}

SeriesValue prabhakar_derivative_raw(const QContext& ctx, const PrabhakarParams& p, double a, const QFunction& f,
                                     double x) {
    const std::size_t n = ceil_order(p.beta());
    const QFunction inner = derivative_inner_fn(ctx, p, n, a, f);
    return detail::dq_n(ctx, x, n, [&](double t) { return inner.sample(t); });
}

QFunction prabhakar_derivative_fn(const QContext& ctx, const PrabhakarParams& p, double a, const QFunction& f) {
    // Shares one memoized inner integral across every evaluation point.
    const std::size_t n = ceil_order(p.beta());
    QFunction inner = derivative_inner_fn(ctx, p, n, a, f);
    return QFunction(
        [ctx, n, inner](double x) { return detail::dq_n(ctx, x, n, [&](double t) { return inner.sample(t); }); },
        f.domain(), true);
}

double require(const SeriesValue& v, const char* what) {
    return v.checked(what);
}

}  // namespace

SeriesValue rl_q_integral(const QContext& ctx, double alpha, double a, const QFunction& f, double x) {
    check_limits(a, x);
    return rl_integral_raw(ctx, alpha, a, f, x);
}

double rl_q_derivative(const QContext& ctx, double alpha, double a, const QFunction& f, double x) {
    return require(rl_q_derivative_value(ctx, alpha, a, f, x), "RL q-derivative");
}

SeriesValue rl_q_derivative_value(const QContext& ctx, double alpha, double a, const QFunction& f, double x) {
    if (x == 0.0) throw DomainError("q-derivative is undefined at x = 0");
    check_limits(a, x);
    return rl_derivative_raw(ctx, alpha, a, f, x);
}

double rl_bound_constant(const QContext& ctx, double alpha, double a, double b) {
    if (!(alpha > 0.0)) throw DomainError("order must be positive");
    if (!(a >= 0.0 && a < b)) throw DomainError("bound constant requires 0 <= a < b");
    const double num = require(q_power_frac(ctx, b, ctx.q() * a, alpha), "q-power");
    return num / require(q_gamma(ctx, alpha + 1.0), "q-gamma");
}

SeriesValue prabhakar_q_integral(const QContext& ctx, const PrabhakarParams& p, double a, const QFunction& f,
                                 double x) {
    check_limits(a, x);
    return prabhakar_integral_raw(ctx, p, a, f, x);
}

double prabhakar_q_derivative(const QContext& ctx, const PrabhakarParams& p, double a, const QFunction& f, double x) {
    return require(prabhakar_q_derivative_value(ctx, p, a, f, x), "Prabhakar q-derivative");
}

SeriesValue prabhakar_q_derivative_value(const QContext& ctx, const PrabhakarParams& p, double a,
                                         const QFunction& f, double x) {
    if (x == 0.0) throw DomainError("q-derivative is undefined at x = 0");
    check_limits(a, x);
    return prabhakar_derivative_raw(ctx, p, a, f, x);
}

double omega_prime(const QContext& ctx, const PrabhakarParams& p) {
    return ctx.pow(p.gamma()) * p.omega();
}

PrabhakarParams lambda_shift(const QContext& ctx, const PrabhakarParams& p, int n) {
    if (n < 1) throw DomainError("lambda_shift requires a positive integer n");
    return p.with_omega(ctx.pow(static_cast<double>(n) * p.gamma()) * p.omega());
}

double inverse_omega(const QContext& ctx, const PrabhakarParams& p) {
    return ctx.pow(-p.gamma()) * p.omega();
}

double companion_omega(const QContext& ctx, const PrabhakarParams& p, Companion companion) {
    return companion == Companion::OmegaPrime ? omega_prime(ctx, p) : inverse_omega(ctx, p);
}

SeriesValue prabhakar_bound_constant(const QContext& ctx, const PrabhakarParams& p, double a, double b) {
    if (!(a >= 0.0 && a < b)) throw DomainError("bound constant requires 0 <= a < b");
    if (!(std::abs(p.gamma()) < 1.0)) throw DomainError("bound constant requires |gamma| < 1");
    const double q = ctx.q();
    const SeriesValue arg = q_power_frac(ctx, b, std::pow(q, p.beta() + 1.0) * a, p.alpha());
    const double z = std::abs(p.omega()) * arg.value;
    if (!(std::abs(z) < std::pow(1.0 - q, p.alpha())))
        throw ConvergenceDomainError("|omega (b - q^(beta+1) a)_q^alpha| must be < (1-q)^alpha");
    const SeriesValue pre = q_power_frac(ctx, b, q * a, p.beta());
    const SeriesValue ml = q_mittag_leffler(ctx, p.alpha(), p.beta() + 1.0, z);
    SeriesValue m = times(pre, ml);
    m.tail_estimate += std::abs(pre.value) * std::abs(p.omega()) * arg.tail_estimate;  // first-order effect of arg
    m.terms_used = pre.terms_used + ml.terms_used;
    m.converged = m.converged && arg.converged;
    return m;
}

// FracOperatorSpec -----------------------------------------------------------

const char* to_string(OperatorKind kind) {
    switch (kind) {
        case OperatorKind::RlIntegral: return "RL_INTEGRAL";
        case OperatorKind::RlDerivative: return "RL_DERIVATIVE";
        case OperatorKind::PrabhakarIntegral: return "PRABHAKAR_INTEGRAL";
        case OperatorKind::PrabhakarDerivative: return "PRABHAKAR_DERIVATIVE";
    }
    return "?";
}

FracOperatorSpec::FracOperatorSpec(OperatorKind kind, double order, std::optional<PrabhakarParams> p, double a)
    : kind_(kind), order_(order), params_(std::move(p)), a_(a), steps_(0) {
    if (!(order > 0.0)) throw DomainError("operator order must be positive");
    if (!(a >= 0.0)) throw DomainError("lower limit must be >= 0");
    if (kind == OperatorKind::RlDerivative || kind == OperatorKind::PrabhakarDerivative) steps_ = ceil_order(order);
}

FracOperatorSpec FracOperatorSpec::rl_integral(double order, double a) {
    return {OperatorKind::RlIntegral, order, std::nullopt, a};
}

FracOperatorSpec FracOperatorSpec::rl_derivative(double order, double a) {
    return {OperatorKind::RlDerivative, order, std::nullopt, a};
}

FracOperatorSpec FracOperatorSpec::prabhakar_integral(const PrabhakarParams& p, double a) {
    return {OperatorKind::PrabhakarIntegral, p.beta(), p, a};
}

FracOperatorSpec FracOperatorSpec::prabhakar_derivative(const PrabhakarParams& p, double a) {
    return {OperatorKind::PrabhakarDerivative, p.beta(), p, a};
}

SeriesValue FracOperatorSpec::apply(const QContext& ctx, const QFunction& f, double x) const {
    switch (kind_) {
        case OperatorKind::RlIntegral: return rl_q_integral(ctx, order_, a_, f, x);
        case OperatorKind::RlDerivative: return rl_q_derivative_value(ctx, order_, a_, f, x);
        case OperatorKind::PrabhakarIntegral: return prabhakar_q_integral(ctx, *params_, a_, f, x);
        case OperatorKind::PrabhakarDerivative: return prabhakar_q_derivative_value(ctx, *params_, a_, f, x);
    }
    throw DomainError("unknown operator kind");
}

QFunction FracOperatorSpec::bind(const QContext& ctx, const QFunction& f) const {
    switch (kind_) {
        case OperatorKind::RlIntegral: return rl_integral_fn(ctx, order_, a_, f);
        case OperatorKind::PrabhakarIntegral: return prabhakar_integral_fn(ctx, *params_, a_, f);
        case OperatorKind::PrabhakarDerivative: return prabhakar_derivative_fn(ctx, *params_, a_, f);
        case OperatorKind::RlDerivative: {
            const double alpha = order_;
            const double a = a_;
            return QFunction([ctx, alpha, a, f](double x) { return rl_derivative_raw(ctx, alpha, a, f, x); },
                             f.domain(), true);
        }
    }
    throw DomainError("unknown operator kind");
}

// Identity checks ------------------------------------------------------------

SeriesValue initial_value(const QContext& ctx, const PrabhakarParams& p, double a, const QFunction& f, double x) {
    if (!(p.beta() > 0.0 && p.beta() <= 1.0)) throw DomainError("initial value functional requires 0 < beta <= 1");
    if (!(x > 0.0)) throw DomainError("initial value functional requires a positive starting point");
    const QFunction functional = derivative_inner_fn(ctx, p, 1, a, f);

    if (a > 0.0) return functional.sample(a);

    // Lattice limit x q^k -> 0+. Stop well clear of the subnormal range.
    constexpr double kSmallest = 1e-250;
    const double q = ctx.q();
    SeriesValue prev = functional.sample(x);
    double prev_diff = -1.0;
    for (std::size_t k = 1; k < ctx.max_terms(); ++k) {
        const double t = x * std::pow(q, static_cast<double>(k));
        if (t < kSmallest) break;
        const SeriesValue cur = functional.sample(t);
        const double diff = std::abs(cur.value - prev.value);
        if (diff < ctx.eps_series() * std::max(1.0, std::abs(cur.value))) {
            // Remaining drift, assuming the differences keep shrinking geometrically.
            const double r = prev_diff > 0.0 ? diff / prev_diff : 0.0;
            const double drift = r < 1.0 ? diff * r / (1.0 - r) : std::numeric_limits<double>::infinity();
            return {cur.value, k, drift + cur.tail_estimate, cur.converged && prev.converged && r < 1.0};
        }
        prev_diff = diff;
        prev = cur;
    }
    return {prev.value, ctx.max_terms(), std::numeric_limits<double>::infinity(), false};
}

double check_semigroup(const QContext& ctx, const PrabhakarParams& p, double mu, double sigma, double a,
                       const QFunction& f, double x) {
    check_limits(a, x);
    const PrabhakarParams inner_p(p.alpha(), mu, sigma, omega_prime(ctx, p));
    const PrabhakarParams merged(p.alpha(), p.beta() + mu, p.gamma() + sigma, p.omega());
    const QFunction inner = prabhakar_integral_fn(ctx, inner_p, a, f);
    const double lhs = require(prabhakar_integral_raw(ctx, p, a, inner, x), "semigroup left side");
    const double rhs = require(prabhakar_integral_raw(ctx, merged, a, f, x), "semigroup right side");
    return std::abs(lhs - rhs);
}

double check_right_inverse(const QContext& ctx, const PrabhakarParams& p, double a, const QFunction& f, double x,
                           Companion companion) {
    check_limits(a, x);
    if (x == 0.0) throw DomainError("q-derivative is undefined at x = 0");
    const QFunction inner = prabhakar_integral_fn(ctx, p.with_omega(companion_omega(ctx, p, companion)), a, f);
    const double lhs = require(prabhakar_derivative_raw(ctx, p, a, inner, x), "right inverse left side");
    return std::abs(lhs - f(x));
}

double check_left_inverse_with_initial(const QContext& ctx, const PrabhakarParams& p, double a, const QFunction& f,
                                       double x, Companion companion) {
    check_limits(a, x);
    if (!(p.beta() > 0.0 && p.beta() <= 1.0)) throw DomainError("left inverse identity requires 0 < beta <= 1");
    if (x == 0.0) throw DomainError("q-derivative is undefined at x = 0");
    const double wc = companion_omega(ctx, p, companion);
    const QFunction derivative = prabhakar_derivative_fn(ctx, p, a, f);
    const double composed =
        require(prabhakar_integral_raw(ctx, p.with_omega(wc), a, derivative, x), "left inverse composition");
    const double init = require(initial_value(ctx, p, a, f, x), "initial value (a+)");
    const double g = require(kernel_g(ctx, p.alpha(), p.beta(), p.gamma(), wc, x, a / ctx.q()), "kernel g");
    return std::abs(composed - f(x) + g * init);
}

}  // namespace qprab
