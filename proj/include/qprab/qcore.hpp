#pragma once

#include <cmath>
#include <cstddef>

#include "qprab/errors.hpp"

namespace qprab {

/// Base q together with the truncation policy shared by every series and
/// infinite product in the library. Immutable once constructed.
class QContext {
public:
    static constexpr double kDefaultEpsSeries = 1e-14;
    static constexpr double kDefaultEpsProd = 1e-16;
    static constexpr std::size_t kDefaultMaxTerms = 10'000;

    explicit QContext(double q,
                      double eps_series = kDefaultEpsSeries,
                      double eps_prod = kDefaultEpsProd,
                      std::size_t max_terms = kDefaultMaxTerms);

    double q() const noexcept { return q_; }
    double eps_series() const noexcept { return eps_series_; }
    double eps_prod() const noexcept { return eps_prod_; }
    std::size_t max_terms() const noexcept { return max_terms_; }

    /// q >= 0.999: products converge slowly. Callers decide whether to warn.
    bool near_one() const noexcept { return q_ >= 0.999; }

    /// Same q and max_terms, both tolerances scaled by `factor`.
    QContext with_tolerances_scaled(double factor) const;
    QContext with_max_terms(std::size_t max_terms) const;

    /// q^x.
    double pow(double x) const { return std::pow(q_, x); }

private:
    double q_;
    double eps_series_;
    double eps_prod_;
    std::size_t max_terms_;
};

/// A truncated series or product together with its truncation diagnostics.
struct SeriesValue {
    double value = 0.0;
    std::size_t terms_used = 0;
    /// Bound on the magnitude of everything that was dropped.
    double tail_estimate = 0.0;
    bool converged = true;

    static SeriesValue exact(double v, std::size_t terms = 0) { return {v, terms, 0.0, true}; }

    /// The value, or NotConverged naming `what`.
    double checked(const char* what) const;
};

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// q-arithmetic --------------------------------------------------------------

/// [alpha]_q = (1 - q^alpha) / (1 - q).
double q_number(const QContext& ctx, double alpha);

/// (a;q)_n, equal to 1 for n = 0.
double q_shifted_factorial(const QContext& ctx, double a, std::size_t n);

/// (a;q)_inf, truncated once |a| q^(I+1) < eps_prod.
SeriesValue q_shifted_factorial_inf(const QContext& ctx, double a);

/// [n]_q! = [1]_q [2]_q ... [n]_q.
double q_factorial(const QContext& ctx, std::size_t n);

/// Gaussian binomial [n k]_q. DomainError if k > n.
double q_binomial(const QContext& ctx, std::size_t n, std::size_t k);

/// (a - b)_q^k = prod_{i<k} (a - b q^i).
double q_power_int(const QContext& ctx, double a, double b, std::size_t k);

/// (a - b)_q^alpha = a^alpha (b/a;q)_inf / (q^alpha b/a;q)_inf.
///
/// Non-negative integer exponents are delegated to q_power_int and b = 0 gives
/// a^alpha exactly. Otherwise a > 0 is required (DomainError), and a vanishing
/// denominator product raises DivisionByZero.
SeriesValue q_power_frac(const QContext& ctx, double a, double b, double alpha);

/// Gamma_q(x) = (q;q)_inf / (q^x;q)_inf (1-q)^(1-x), defined for x > 0.
SeriesValue q_gamma(const QContext& ctx, double x);

/// (gamma)_{n,q} = (q^gamma;q)_n / (q;q)_n.
double q_pochhammer(const QContext& ctx, double gamma, std::size_t n);

/// |(q^(alpha+beta);q)_n - sum_k [n k]_q q^(k beta) (q^alpha;q)_k (q^beta;q)_(n-k)|
/// divided by max(1, largest |term|, |left side|), so the residual measures
/// rounding relative to the magnitudes involved. Computed in extended precision.
double check_vandermonde(const QContext& ctx, double alpha, double beta, std::size_t n);

/// |sum_k (gamma)_{n-k,q} q^(gamma k) (sigma)_{k,q} - (gamma+sigma)_{n,q}|, scaled
/// like check_vandermonde.
double check_pochhammer_convolution(const QContext& ctx, double gamma, double sigma, std::size_t n);

}  // namespace qprab
