#include "qprab/qcore.hpp"

#include <limits>
#include <sstream>
#include <string>

namespace qprab {

namespace {

template <class T>
T shifted_factorial(T q, T a, std::size_t n) {
    T prod = 1;
    T qi = 1;
    for (std::size_t i = 0; i < n; ++i) {
        prod *= (1 - a * qi);
        qi *= q;
    }
    return prod;
}

template <class T>
T factorial(T q, std::size_t n) {
    // [i]_q = 1 + q + ... + q^(i-1); the running sum avoids 1 - q^i cancellation.
    T prod = 1;
    T qn = 1;
    T sum = 0;
    for (std::size_t i = 1; i <= n; ++i) {
        sum += qn;
        qn *= q;
        prod *= sum;
    }
    return prod;
}

template <class T>
T binomial(T q, std::size_t n, std::size_t k) {
    if (k > n - k) k = n - k;
    // prod_{i<k} (1 - q^(n-i)) / (1 - q^(i+1))
    T prod = 1;
    for (std::size_t i = 0; i < k; ++i) {
        prod *= (1 - std::pow(q, static_cast<T>(n - i))) / (1 - std::pow(q, static_cast<T>(i + 1)));
    }
    return prod;
}

template <class T>
T pochhammer(T q, T gamma, std::size_t n) {
    T prod = 1;
    for (std::size_t i = 0; i < n; ++i) {
        prod *= (1 - std::pow(q, gamma + static_cast<T>(i))) / (1 - std::pow(q, static_cast<T>(i + 1)));
    }
    return prod;
}

bool is_nonnegative_integer(double x) {
    return x >= 0.0 && x <= 1e6 && std::floor(x) == x;
}

std::string fmt_num(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

}  // namespace

QContext::QContext(double q, double eps_series, double eps_prod, std::size_t max_terms)
    : q_(q), eps_series_(eps_series), eps_prod_(eps_prod), max_terms_(max_terms) {
    if (!(q > 0.0 && q < 1.0))
        throw DomainError("q must lie in the open interval (0,1), got " + fmt_num(q));
    if (!(eps_series > 0.0)) throw DomainError("eps_series must be positive");
    if (!(eps_prod > 0.0)) throw DomainError("eps_prod must be positive");
    if (max_terms < 1) throw DomainError("max_terms must be at least 1");
}

QContext QContext::with_tolerances_scaled(double factor) const {
    return QContext(q_, eps_series_ * factor, eps_prod_ * factor, max_terms_);
}

QContext QContext::with_max_terms(std::size_t max_terms) const {
    return QContext(q_, eps_series_, eps_prod_, max_terms);
}

double SeriesValue::checked(const char* what) const {
    if (!converged) throw NotConverged(std::string(what) + ": truncation tolerance not met within max_terms");
    return value;
}

double q_number(const QContext& ctx, double alpha) {
    return (1.0 - ctx.pow(alpha)) / (1.0 - ctx.q());
}

double q_shifted_factorial(const QContext& ctx, double a, std::size_t n) {
    return shifted_factorial(ctx.q(), a, n);
}

SeriesValue q_shifted_factorial_inf(const QContext& ctx, double a) {
    const double q = ctx.q();
    const double abs_a = std::abs(a);
    double prod = 1.0;
    double qi = 1.0;
    for (std::size_t i = 0; i < ctx.max_terms(); ++i) {
        prod *= (1.0 - a * qi);
        qi *= q;
        const double next = abs_a * qi;  // |a| q^(i+1)
        if (next < ctx.eps_prod()) {
            // log|prod_{j>i}(1 - a q^j)| <= sum_{j>i} |a|q^j / (1 - |a|q^j)
            const double log_bound = next / ((1.0 - q) * (1.0 - next));
            return {prod, i + 1, std::abs(prod) * std::expm1(log_bound), true};
        }
    }
    const double next = abs_a * qi;
    const double tail = next < 1.0 ? std::abs(prod) * std::expm1(next / ((1.0 - q) * (1.0 - next)))
                                   : std::numeric_limits<double>::infinity();
    return {prod, ctx.max_terms(), tail, false};
}

double q_factorial(const QContext& ctx, std::size_t n) {
    return factorial(ctx.q(), n);
}

double q_binomial(const QContext& ctx, std::size_t n, std::size_t k) {
    if (k > n) throw DomainError("q_binomial requires k <= n");
    return binomial(ctx.q(), n, k);
}

double q_power_int(const QContext& ctx, double a, double b, std::size_t k) {
    double prod = 1.0;
    double qi = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
        prod *= (a - b * qi);
        qi *= ctx.q();
    }
    return prod;
}

SeriesValue q_power_frac(const QContext& ctx, double a, double b, double alpha) {
    if (is_nonnegative_integer(alpha)) {
        const auto k = static_cast<std::size_t>(alpha);
        return SeriesValue::exact(q_power_int(ctx, a, b, k), k);
    }
    if (b == 0.0) {
        if (a > 0.0) return SeriesValue::exact(std::pow(a, alpha));
        if (a == 0.0) {
            if (alpha > 0.0) return SeriesValue::exact(0.0);
            throw DivisionByZero("q-power (0 - 0)^alpha with negative alpha");
        }
        throw DomainError("q-power with a < 0 requires a non-negative integer exponent");
    }
    if (!(a > 0.0))
        throw DomainError("q-power (a - b)^alpha with non-integer alpha requires a > 0, got a = " + fmt_num(a));

    const double ratio = b / a;
    const double shifted = ctx.pow(alpha) * ratio;
    if (shifted > 0.0) {
        // (shifted;q)_inf vanishes when shifted = q^(-i), i >= 0.
        const double m = std::log(shifted) / std::log(ctx.q());
        const double nearest = std::round(m);
        if (nearest <= 0.0 && std::abs(m - nearest) <= 1e-12 * std::max(1.0, std::abs(m)))
            throw DivisionByZero("q-power denominator (q^alpha b/a;q)_inf vanishes");
    }
    const SeriesValue num = q_shifted_factorial_inf(ctx, ratio);
    const SeriesValue den = q_shifted_factorial_inf(ctx, shifted);
    if (den.value == 0.0) throw DivisionByZero("q-power denominator (q^alpha b/a;q)_inf vanishes");

    const double lead = std::pow(a, alpha);
    const double value = lead * num.value / den.value;
    const double tail = std::abs(lead / den.value) * num.tail_estimate +
                        std::abs(value) * den.tail_estimate / std::abs(den.value);
    return {value, num.terms_used + den.terms_used, tail, num.converged && den.converged};
}

SeriesValue q_gamma(const QContext& ctx, double x) {
    if (!(x > 0.0)) throw DomainError("q_gamma is defined for x > 0, got " + fmt_num(x));
    const SeriesValue num = q_shifted_factorial_inf(ctx, ctx.q());
    const SeriesValue den = q_shifted_factorial_inf(ctx, ctx.pow(x));
    const double scale = std::pow(1.0 - ctx.q(), 1.0 - x);
    const double value = num.value / den.value * scale;
    const double rel = num.tail_estimate / std::abs(num.value) + den.tail_estimate / std::abs(den.value);
    return {value, num.terms_used + den.terms_used, std::abs(value) * rel, num.converged && den.converged};
}

double q_pochhammer(const QContext& ctx, double gamma, std::size_t n) {
    return pochhammer(ctx.q(), gamma, n);
}

double check_vandermonde(const QContext& ctx, double alpha, double beta, std::size_t n) {
    using T = long double;
    const T q = ctx.q();
    const T qa = std::pow(q, static_cast<T>(alpha));
    const T qb = std::pow(q, static_cast<T>(beta));
    const T lhs = shifted_factorial(q, qa * qb, n);
    T rhs = 0;
    T scale = std::abs(lhs);
    for (std::size_t k = 0; k <= n; ++k) {
        const T term = binomial(q, n, k) * std::pow(qb, static_cast<T>(k)) * shifted_factorial(q, qa, k) *
                       shifted_factorial(q, qb, n - k);
        rhs += term;
        scale = std::max(scale, std::abs(term));
    }
    return static_cast<double>(std::abs(lhs - rhs) / std::max(T(1), scale));
}

double check_pochhammer_convolution(const QContext& ctx, double gamma, double sigma, std::size_t n) {
    using T = long double;
    const T q = ctx.q();
    const T g = gamma;
    const T s = sigma;
    T lhs = 0;
    const T rhs = pochhammer(q, g + s, n);
    T scale = std::abs(rhs);
    for (std::size_t k = 0; k <= n; ++k) {
        const T term = pochhammer(q, g, n - k) * std::pow(q, g * static_cast<T>(k)) * pochhammer(q, s, k);
        lhs += term;
        scale = std::max(scale, std::abs(term));
    }
    return static_cast<double>(std::abs(lhs - rhs) / std::max(T(1), scale));
}

}  // namespace qprab
