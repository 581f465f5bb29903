#pragma once

// Template bodies for the Jackson-sum machinery declared in qcalc.hpp.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace qprab::detail {

template <class G>
SeriesValue jackson_sum(const QContext& ctx, double x, G&& g) {
    if (x == 0.0) return SeriesValue::exact(0.0);

    const double q = ctx.q();
    const double eps = ctx.eps_series();
    constexpr std::size_t kMinTerms = 10;
    constexpr int kQuietRun = 3;

    CompensatedSum sum;
    double inner_tail = 0.0;
    bool inner_converged = true;
    double prev_abs = -1.0;
    double ratio = 0.0;  // max |c_k / c_(k-1)| over the last kQuietRun terms
    double ratios[kQuietRun] = {0.0, 0.0, 0.0};
    int quiet = 0;
    double last_abs = 0.0;
    std::size_t k = 0;
    bool met = false;

    for (; k < ctx.max_terms(); ++k) {
        const double qk = std::pow(q, static_cast<double>(k));
        const SeriesValue s = g(x * qk);
        const double term = s.value * qk;
        inner_tail += s.tail_estimate * qk;
        inner_converged = inner_converged && s.converged;
        sum.add(term);

        const double abs_term = std::abs(term);
        double r;
        if (prev_abs < 0.0)
            r = 0.0;
        else if (prev_abs == 0.0)
            r = abs_term == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        else
            r = abs_term / prev_abs;
        ratios[k % kQuietRun] = r;
        prev_abs = abs_term;
        last_abs = abs_term;

        if (abs_term <= eps * std::abs(sum.value()))
            ++quiet;
        else
            quiet = 0;
        if (quiet >= kQuietRun && k + 1 >= kMinTerms) {
            met = true;
            ++k;
            break;
        }
    }

    ratio = *std::max_element(std::begin(ratios), std::end(ratios));
    double trunc_tail;
    if (last_abs == 0.0)
        trunc_tail = 0.0;
    else if (ratio < 1.0)
        trunc_tail = last_abs * ratio / (1.0 - ratio);
    else
        trunc_tail = std::numeric_limits<double>::infinity();

    const double scale = x * (1.0 - q);
    return {scale * sum.value(), k, std::abs(scale) * (trunc_tail + inner_tail), met && inner_converged};
}

inline SeriesValue combine_difference(const SeriesValue& upper, const SeriesValue& lower) {
    return {upper.value - lower.value, upper.terms_used + lower.terms_used,
            upper.tail_estimate + lower.tail_estimate, upper.converged && lower.converged};
}

/// m when a = x q^m for a non-negative integer m (to relative 1e-9), else -1.
inline long lattice_offset(const QContext& ctx, double a, double x) {
    if (!(a > 0.0) || !(x >= a)) return -1;
    const double m = std::log(x / a) / -std::log(ctx.q());
    const double r = std::round(m);
    if (std::abs(m - r) > 1e-9 * std::max(1.0, r) || r > static_cast<double>(ctx.max_terms())) return -1;
    return static_cast<long>(r);
}

/// x (1-q) sum_{k<m} q^k g(x q^k): the exact integral from x q^m to x.
template <class G>
SeriesValue jackson_finite(const QContext& ctx, double x, long m, G&& g) {
    const double q = ctx.q();
    CompensatedSum sum;
    double inner_tail = 0.0;
    bool converged = true;
    for (long k = 0; k < m; ++k) {
        const double qk = std::pow(q, static_cast<double>(k));
        const SeriesValue s = g(x * qk);
        sum.add(s.value * qk);
        inner_tail += s.tail_estimate * qk;
        converged = converged && s.converged;
    }
    const double scale = x * (1.0 - q);
    return {scale * sum.value(), static_cast<std::size_t>(m), std::abs(scale) * inner_tail, converged};
}

/// int_a^x g d_q t. When a lies on the lattice of x the finite sum is used, so g
/// is never sampled below a; otherwise the difference of the two sums from 0.
template <class G>
SeriesValue jackson_between(const QContext& ctx, double a, double x, G&& g) {
    if (a == 0.0) return jackson_sum(ctx, x, g);
    if (a == x) return SeriesValue::exact(0.0);
    const long m = lattice_offset(ctx, a, x);
    if (m >= 0) return jackson_finite(ctx, x, m, g);
    return combine_difference(jackson_sum(ctx, x, g), jackson_sum(ctx, a, g));
}

template <class G>
SeriesValue dq_n(const QContext& ctx, double x, std::size_t n, G&& g) {
    if (n == 0) return g(x);
    if (x == 0.0) throw DomainError("q-derivative is undefined at x = 0");
    const double q = ctx.q();
    std::vector<double> val(n + 1), tail(n + 1), pt(n + 1);
    bool converged = true;
    std::size_t terms = 0;
    for (std::size_t k = 0; k <= n; ++k) {
        pt[k] = x * std::pow(q, static_cast<double>(k));
        const SeriesValue s = g(pt[k]);
        val[k] = s.value;
        tail[k] = s.tail_estimate;
        converged = converged && s.converged;
        terms += s.terms_used;
    }
    for (std::size_t level = 1; level <= n; ++level) {
        for (std::size_t k = 0; k + level <= n; ++k) {
            const double h = pt[k] * (1.0 - q);
            val[k] = (val[k] - val[k + 1]) / h;
            tail[k] = (tail[k] + tail[k + 1]) / std::abs(h);
        }
    }
    return {val[0], terms, tail[0], converged};
}

}  // namespace qprab::detail
