#include "qprab/qspecial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qprab {

namespace {

struct Term {
    double value;
    double tail;  // absolute truncation error inside the term itself
    bool converged;
};

/// Sums term(0), term(1), ... with the same stopping rule as the Jackson sums.
template <class F>
SeriesValue sum_series(const QContext& ctx, F&& term) {
    constexpr std::size_t kMinTerms = 10;
    constexpr int kQuietRun = 3;
    CompensatedSum sum;
    double inner_tail = 0.0;
    bool inner_converged = true;
    double ratios[kQuietRun] = {0.0, 0.0, 0.0};
    double prev_abs = -1.0;
    double last_abs = 0.0;
    int quiet = 0;
    bool met = false;
    std::size_t n = 0;
    for (; n < ctx.max_terms(); ++n) {
        const Term t = term(n);
        sum.add(t.value);
        inner_tail += t.tail;
        inner_converged = inner_converged && t.converged;
        const double a = std::abs(t.value);
        double r = 0.0;
        if (prev_abs > 0.0)
            r = a / prev_abs;
        else if (prev_abs == 0.0 && a != 0.0)
            r = std::numeric_limits<double>::infinity();
        ratios[n % kQuietRun] = r;
        prev_abs = a;
        last_abs = a;
        if (a <= ctx.eps_series() * std::abs(sum.value()))
            ++quiet;
        else
            quiet = 0;
        if (quiet >= kQuietRun && n + 1 >= kMinTerms) {
            met = true;
            ++n;
            break;
        }
    }
    const double ratio = *std::max_element(std::begin(ratios), std::end(ratios));
    double trunc;
    if (last_abs == 0.0)
        trunc = 0.0;
    else if (ratio < 1.0)
        trunc = last_abs * ratio / (1.0 - ratio);
    else
        trunc = std::numeric_limits<double>::infinity();
    return {sum.value(), n, trunc + inner_tail, met && inner_converged};
}

bool is_nonnegative_integer(double x) {
    return x >= 0.0 && x <= 1e6 && std::floor(x) == x;
}

void require_positive(double alpha, double beta) {
    if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
    if (!(beta > 0.0)) throw DomainError("beta must be positive");
}

}  // namespace

PrabhakarParams::PrabhakarParams(double alpha, double beta, double gamma, double omega)
    : alpha_(alpha), beta_(beta), gamma_(gamma), omega_(omega) {
    require_positive(alpha, beta);
    if (!std::isfinite(gamma) || !std::isfinite(omega)) throw DomainError("gamma and omega must be finite");
}

GeneralizedArgs::GeneralizedArgs(double delta, double z, double s) : delta_(delta), z_(z), s_(s) {
    if (!(s < z)) throw DomainError("generalized q-Prabhakar argument requires s < z");
}

PrabhakarKernel::PrabhakarKernel(const QContext& ctx, double alpha, double mu, double sigma, double omega)
    : ctx_(ctx), alpha_(alpha), mu_(mu), sigma_(sigma), omega_(omega),
      limit_(std::pow(1.0 - ctx.q(), -alpha) * (1.0 - 1e-12)),
      q_q_inf_(q_shifted_factorial_inf(ctx, ctx.q())) {
    if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
    if (!(mu >= 0.0)) throw DomainError("mu must be >= 0");
}

const PrabhakarKernel::Coefficient& PrabhakarKernel::coefficient(std::size_t n) {
    const double q = ctx_.q();
    while (coef_.size() <= n) {
        const std::size_t k = coef_.size();
        if (k > 0) {
            const double kd = static_cast<double>(k);
            pochhammer_ *= (1.0 - std::pow(q, sigma_ + kd - 1.0)) / (1.0 - std::pow(q, kd));
        }
        const SeriesValue prod = q_shifted_factorial_inf(ctx_, std::pow(q, alpha_ * static_cast<double>(k) + mu_));
        const double value = pochhammer_ * std::pow(1.0 - q, mu_ - 1.0) * prod.value / q_q_inf_.value;
        // (1;q)_inf = 0 exactly (mu = 0, n = 0): no relative error to carry.
        const double rel = (prod.value == 0.0 ? 0.0 : prod.tail_estimate / std::abs(prod.value)) +
                           q_q_inf_.tail_estimate / std::abs(q_q_inf_.value);
        coef_.push_back({value, rel, prod.converged && q_q_inf_.converged});
    }
    return coef_[n];
}

SeriesValue PrabhakarKernel::power_series(double z) {
    const double u = z * std::pow(1.0 - ctx_.q(), alpha_);
    if (!(std::abs(u) < 1.0))
        throw ConvergenceDomainError("|z (1-q)^alpha| must be < 1");
    double un = 1.0;
    return sum_series(ctx_, [&](std::size_t n) {
        if (n > 0) un *= u;
        const Coefficient& c = coefficient(n);
        const double v = c.value * un;
        return Term{v, std::abs(v) * c.rel_tail, c.converged};
    });
}

SeriesValue PrabhakarKernel::series(double delta, double z, double s) {
    const SeriesValue base = q_power_frac(ctx_, z, s, delta);
    if (!(std::abs(omega_ * base.value) < limit_))
        throw ConvergenceDomainError("|omega (z - s)_q^delta| must be < (1-q)^(-alpha)");
    if (omega_ == 0.0) {
        const Coefficient& c = coefficient(0);
        return {c.value, 1, std::abs(c.value) * c.rel_tail, c.converged};
    }

    const double q = ctx_.q();
    const double scale = std::pow(1.0 - q, alpha_);
    if (z > 0.0) {
        // omega^n (z - s)_q^(delta n) (1-q)^(alpha n) = u^n R_n with
        // R_n = (s/z;q)_inf / (q^(delta n) s/z;q)_inf, so nothing over- or underflows.
        const double u = omega_ * std::pow(z, delta) * scale;
        const double r = s / z;
        const SeriesValue num = q_shifted_factorial_inf(ctx_, r);
        double un = 1.0;
        return sum_series(ctx_, [&](std::size_t n) {
            if (n > 0) un *= u;
            const Coefficient& c = coefficient(n);
            double ratio = 1.0;
            double rel = c.rel_tail;
            bool ok = c.converged;
            if (n > 0) {
                const double e = delta * static_cast<double>(n);
                if (is_nonnegative_integer(e)) {
                    ratio = q_shifted_factorial(ctx_, r, static_cast<std::size_t>(e));
                } else {
                    const SeriesValue den = q_shifted_factorial_inf(ctx_, std::pow(q, e) * r);
                    if (den.value == 0.0) throw DivisionByZero("generalized q-Prabhakar term has a vanishing q-power denominator");
                    ratio = num.value / den.value;
                    rel += den.tail_estimate / std::abs(den.value);
                    if (num.value != 0.0) rel += num.tail_estimate / std::abs(num.value);
                    ok = ok && num.converged && den.converged;
                }
            }
            const double v = c.value * un * ratio;
            double tail = std::abs(v) * rel;
            if (n > 0 && num.value == 0.0) tail += std::abs(c.value * un) * num.tail_estimate;
            return Term{v, tail, ok};
        });
    }

    // z <= 0: only integer exponents delta n are admissible; q_power_frac enforces it.
    const double u = omega_ * scale;
    double un = 1.0;
    return sum_series(ctx_, [&](std::size_t n) {
        if (n > 0) un *= u;
        const Coefficient& c = coefficient(n);
        const SeriesValue p = q_power_frac(ctx_, z, s, delta * static_cast<double>(n));
        const double v = c.value * un * p.value;
        return Term{v, std::abs(v) * c.rel_tail + std::abs(c.value * un) * p.tail_estimate, c.converged && p.converged};
    });
}

SeriesValue PrabhakarKernel::order_zero(double x, double s) {
    // 1/Gamma_q(0) = 0 removes n = 0; for n >= 1 the prefactor merges into the
    // q-power: (x - qs)_q^(-1) (x - s)_q^(alpha n) = (x - qs)_q^(alpha n - 1).
    const double q = ctx_.q();
    const double u = omega_ * std::pow(x, alpha_) * std::pow(1.0 - q, alpha_);
    if (!(std::abs(u) < 1.0)) throw ConvergenceDomainError("|omega x^alpha (1-q)^alpha| must be < 1");
    if (omega_ == 0.0 || sigma_ == 0.0) return SeriesValue::exact(0.0);
    const double r = s / x;
    const SeriesValue num = q_shifted_factorial_inf(ctx_, q * r);
    double un = 1.0;
    SeriesValue sum = sum_series(ctx_, [&](std::size_t n) {
        if (n == 0) return Term{0.0, 0.0, true};
        un *= u;
        const Coefficient& c = coefficient(n);
        const SeriesValue den = q_shifted_factorial_inf(ctx_, std::pow(q, alpha_ * static_cast<double>(n)) * r);
        const double v = c.value * un * num.value / den.value;
        const double rel = c.rel_tail + num.tail_estimate / std::abs(num.value) + den.tail_estimate / std::abs(den.value);
        return Term{v, std::abs(v) * rel, c.converged && num.converged && den.converged};
    });
    sum.value /= x;
    sum.tail_estimate /= x;
    return sum;
}

SeriesValue PrabhakarKernel::operator()(double x, double s) {
    if (!(x > 0.0)) throw DomainError("kernel_g requires x > 0");
    if (!(s >= 0.0)) throw DomainError("kernel_g requires s >= 0");
    const double q = ctx_.q();
    if (!(q * s <= x)) throw DomainError("kernel_g requires qs <= x");
    if (mu_ == 0.0) return order_zero(x, s);
    const SeriesValue pre = q_power_frac(ctx_, x, q * s, mu_ - 1.0);
    const SeriesValue ser = series(alpha_, x, std::pow(q, mu_) * s);
    const double value = pre.value * ser.value;
    const double tail = std::abs(pre.value) * ser.tail_estimate + std::abs(ser.value) * pre.tail_estimate +
                        pre.tail_estimate * ser.tail_estimate;
    return {value, pre.terms_used + ser.terms_used, tail, pre.converged && ser.converged};
}

SeriesValue q_mittag_leffler(const QContext& ctx, double alpha, double beta, double z) {
    require_positive(alpha, beta);
    // (1)_{n,q} = 1 for every n.
    PrabhakarKernel k(ctx, alpha, beta, 1.0, 1.0);
    return k.power_series(z);
}

SeriesValue q_prabhakar(const QContext& ctx, double alpha, double beta, double gamma, double z) {
    require_positive(alpha, beta);
    PrabhakarKernel k(ctx, alpha, beta, gamma, 1.0);
    return k.power_series(z);
}

SeriesValue q_prabhakar_generalized(const QContext& ctx, const PrabhakarParams& p, const GeneralizedArgs& args) {
    PrabhakarKernel k(ctx, p.alpha(), p.beta(), p.gamma(), p.omega());
    return k.series(args.delta(), args.z(), args.s());
}

SeriesValue kernel_g(const QContext& ctx, double alpha, double mu, double sigma, double omega, double x, double s) {
    require_positive(alpha, mu);
    PrabhakarKernel k(ctx, alpha, mu, sigma, omega);
    return k(x, s);
}

}  // namespace qprab
