#include "qprab/qcalc.hpp"

#include <map>
#include <mutex>
#include <shared_mutex>

namespace qprab {

struct QFunction::State {
    Sampler sampler;
    Interval domain;
    bool memoize;
    mutable std::shared_mutex mutex;
    mutable std::map<double, SeriesValue> cache;
};

namespace {

// Lattice points reached by different multiplication orders differ in the last
// few bits; distinct lattice points differ by at least a factor q.
constexpr double kMemoRelTol = 1e-12;

}  // namespace

QFunction::QFunction() : QFunction([](double) { return 0.0; }) {}

QFunction::QFunction(Sampler s, Interval domain, bool memoize, int)
    : state_(std::make_shared<State>()) {
    state_->sampler = std::move(s);
    state_->domain = domain;
    state_->memoize = memoize;
}

SeriesValue QFunction::sample(double x) const {
    const State& st = *state_;
    if (x < 0.0 || x > st.domain.hi * (1.0 + 1e-12))
        throw DomainError("QFunction evaluated outside its domain");
    if (!st.memoize) return st.sampler(x);

    const double tol = kMemoRelTol * std::abs(x);
    {
        std::shared_lock lock(st.mutex);
        auto it = st.cache.lower_bound(x - tol);
        if (it != st.cache.end() && it->first <= x + tol) return it->second;
    }
    const SeriesValue v = st.sampler(x);
    {
        std::unique_lock lock(st.mutex);
        // First writer wins; a concurrent writer computed the same value.
        st.cache.emplace(x, v);
    }
    return v;
}

double QFunction::operator()(double x) const {
    return sample(x).checked("function sample");
}

const Interval& QFunction::domain() const noexcept { return state_->domain; }

bool QFunction::memoized() const noexcept { return state_->memoize; }

std::size_t QFunction::cache_size() const {
    std::shared_lock lock(state_->mutex);
    return state_->cache.size();
}

QLattice::QLattice(const QContext& ctx, double anchor, std::size_t depth) : anchor_(anchor) {
    if (!(anchor > 0.0)) throw DomainError("lattice anchor must be positive");
    const std::size_t n = std::min(depth, ctx.max_terms());
    nodes_.reserve(n);
    for (std::size_t k = 0; k < n; ++k) nodes_.push_back(anchor * ctx.pow(static_cast<double>(k)));
}

double q_derivative(const QContext& ctx, const QFunction& f, double x) {
    return q_derivative_n(ctx, f, x, 1);
}

double q_derivative_n(const QContext& ctx, const QFunction& f, double x, std::size_t n) {
    return detail::dq_n(ctx, x, n, [&](double t) { return f.sample(t); }).checked("q-derivative");
}

SeriesValue q_integral_0(const QContext& ctx, const QFunction& f, double x) {
    if (x < 0.0) throw DomainError("q_integral_0 requires x >= 0");
    return detail::jackson_sum(ctx, x, [&](double t) { return f.sample(t); });
}

SeriesValue q_integral(const QContext& ctx, const QFunction& f, double a, double x) {
    if (!(a >= 0.0 && a <= x)) throw DomainError("q_integral requires 0 <= a <= x");
    if (x > f.domain().hi * (1.0 + 1e-12)) throw DomainError("q_integral upper limit outside the function domain");
    return detail::jackson_between(ctx, a, x, [&](double t) { return f.sample(t); });
}

SeriesValue q_integral_n(const QContext& ctx, const QFunction& f, double a, double x, std::size_t n) {
    if (!(a >= 0.0 && a <= x)) throw DomainError("q_integral_n requires 0 <= a <= x");
    if (n == 0) return f.sample(x);
    QFunction current = f;
    for (std::size_t i = 1; i < n; ++i) {
        QFunction prev = current;
        current = QFunction(
            [ctx, prev, a](double t) {
                return detail::jackson_between(ctx, a, t, [&](double s) { return prev.sample(s); });
            },
            f.domain(), true);
    }
    return detail::jackson_between(ctx, a, x, [&](double s) { return current.sample(s); });
}

SeriesValue q_norm(const QContext& ctx, const QFunction& f, double a, double x, double p) {
    if (!(p >= 1.0)) throw DomainError("q_norm requires p >= 1");
    if (!(a >= 0.0 && a <= x)) throw DomainError("q_norm requires 0 <= a <= x");
    const SeriesValue s = detail::jackson_between(ctx, a, x, [&](double t) {
        const SeriesValue v = f.sample(t);
        const double m = std::abs(v.value);
        const double tail = p == 1.0 ? v.tail_estimate : p * std::pow(m + v.tail_estimate, p - 1.0) * v.tail_estimate;
        return SeriesValue{std::pow(m, p), v.terms_used, tail, v.converged};
    });
    // Off-lattice lower limits can make the difference of sums slightly negative.
    const double integral = std::max(0.0, s.value);
    const double value = std::pow(integral, 1.0 / p);
    double tail;
    if (integral > 0.0)
        tail = std::pow(integral, 1.0 / p - 1.0) * s.tail_estimate / p;
    else
        tail = std::pow(s.tail_estimate, 1.0 / p);
    return {value, s.terms_used, tail, s.converged};
}

}  // namespace qprab
