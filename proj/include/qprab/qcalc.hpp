#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <type_traits>
#include <utility>
#include <vector>

#include "qprab/qcore.hpp"

namespace qprab {

struct Interval {
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
};

/// Real function handle evaluated on q-lattice points.
///
/// Copies share state, including the memo cache. The evaluator may return
/// either a plain double or a SeriesValue; the latter carries truncation
/// diagnostics that the Jackson sums propagate. Integrals with a lower limit
/// a on the lattice of x (a = x q^m) sample only {x q^k : k < m}; any other
/// positive lower limit is handled as a difference of 0-anchored sums, which
/// samples below a as well.
class QFunction {
public:
    using Sampler = std::function<SeriesValue(double)>;

    /// The zero function.
    QFunction();

    template <class F, class = std::enable_if_t<!std::is_same_v<std::decay_t<F>, QFunction>>>
    QFunction(F&& f, Interval domain = {}, bool memoize = false)  // NOLINT(google-explicit-constructor)
        : QFunction(wrap(std::forward<F>(f)), domain, memoize, 0) {}

    SeriesValue sample(double x) const;
    /// sample(x).value; NotConverged if the sample did not converge.
    double operator()(double x) const;

    const Interval& domain() const noexcept;
    bool memoized() const noexcept;
    std::size_t cache_size() const;

private:
    struct State;

    QFunction(Sampler s, Interval domain, bool memoize, int);

    template <class F>
    static Sampler wrap(F&& f) {
        using R = std::invoke_result_t<F&, double>;
        if constexpr (std::is_same_v<std::decay_t<R>, SeriesValue>) {
            return Sampler(std::forward<F>(f));
        } else {
            return [g = std::forward<F>(f)](double x) { return SeriesValue::exact(static_cast<double>(g(x))); };
        }
    }

    std::shared_ptr<State> state_;
};

/// The points anchor * q^k, k = 0 .. depth-1.
class QLattice {
public:
    QLattice(const QContext& ctx, double anchor, std::size_t depth);

    double anchor() const noexcept { return anchor_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    double node(std::size_t k) const { return nodes_.at(k); }
    const std::vector<double>& nodes() const noexcept { return nodes_; }

private:
    double anchor_;
    std::vector<double> nodes_;
};

namespace detail {

/// x(1-q) sum_k g(x q^k) q^k with the library's stopping rule: stop once
/// |term| <= eps_series |partial sum| for three consecutive terms and at least
/// ten terms were taken. `g` returns a SeriesValue whose tail is propagated.
template <class G>
SeriesValue jackson_sum(const QContext& ctx, double x, G&& g);

/// Integral from a to x: the finite sum when a = x q^m, otherwise the sum over [0,x]
/// minus the sum over [0,a]; no ordering checks.
template <class G>
SeriesValue jackson_between(const QContext& ctx, double a, double x, G&& g);

/// D_q^n of a sampled function at x via the n-level difference table.
template <class G>
SeriesValue dq_n(const QContext& ctx, double x, std::size_t n, G&& g);

SeriesValue combine_difference(const SeriesValue& upper, const SeriesValue& lower);

}  // namespace detail

/// (f(x) - f(qx)) / (x (1-q)). DomainError at x = 0.
double q_derivative(const QContext& ctx, const QFunction& f, double x);

/// D_q^n f(x); n = 0 returns f(x).
double q_derivative_n(const QContext& ctx, const QFunction& f, double x, std::size_t n);

/// Jackson integral over [0, x].
SeriesValue q_integral_0(const QContext& ctx, const QFunction& f, double x);

/// Jackson integral over [a, x], computed as the difference of two 0-anchored sums.
SeriesValue q_integral(const QContext& ctx, const QFunction& f, double a, double x);

/// n-fold iterated Jackson integral from a; n = 0 returns f(x).
SeriesValue q_integral_n(const QContext& ctx, const QFunction& f, double a, double x, std::size_t n);

/// (int_a^x |f|^p d_q t)^(1/p), p >= 1.
SeriesValue q_norm(const QContext& ctx, const QFunction& f, double a, double x, double p);

}  // namespace qprab

#include "qprab/detail/jackson_impl.hpp"
