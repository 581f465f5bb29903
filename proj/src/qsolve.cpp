#include "qprab/qsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>

namespace qprab {

// CauchyProblem --------------------------------------------------------------

CauchyProblem::CauchyProblem(const PrabhakarParams& params, double a, double b, double xi0, Rhs rhs,
                             std::optional<double> lipschitz_A)
    : params_(params), a_(a), b_(b), xi0_(xi0), rhs_(std::move(rhs)), lipschitz_(lipschitz_A) {
    if (!(params.beta() > 0.0 && params.beta() <= 1.0)) throw DomainError("Cauchy problem requires 0 < beta <= 1");
    if (!(a >= 0.0 && a < b) || !std::isfinite(b)) throw DomainError("Cauchy problem requires 0 <= a < b < inf");
    if (!(xi0 != 0.0) || !std::isfinite(xi0)) throw DomainError("Cauchy problem requires a finite xi0 != 0");
    if (!rhs_) throw DomainError("Cauchy problem requires a right-hand side");
    if (lipschitz_ && !(*lipschitz_ >= 0.0 && std::isfinite(*lipschitz_)))
        throw DomainError("Lipschitz constant must be finite and >= 0");
}

double CauchyProblem::eval_rhs(double x, double y) const {
    double v;
    try {
        v = rhs_(x, y);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw RhsDomainError(std::string("right-hand side failed: ") + e.what());
    }
    if (!std::isfinite(v)) throw RhsDomainError("right-hand side is not finite at a required (x, y) pair");
    return v;
}

CauchyProblem CauchyProblem::with_xi0(double xi0) const {
    return {params_, a_, b_, xi0, rhs_, lipschitz_};
}

double kernel_omega(const QContext& ctx, const CauchyProblem& prob, KernelOmega convention) {
    return convention == KernelOmega::Inverse ? inverse_omega(ctx, prob.params()) : omega_prime(ctx, prob.params());
}

namespace {

PrabhakarParams kernel_params(const QContext& ctx, const CauchyProblem& prob, KernelOmega convention) {
    return prob.params().with_omega(kernel_omega(ctx, prob, convention));
}

void check_config(const CauchyProblem& prob, const SolverConfig& cfg) {
    if (!(cfg.h > prob.a() && cfg.h <= prob.b())) throw DomainError("solver requires a < h <= b");
    if (cfg.max_iter == 0) throw DomainError("max_iter must be positive");
    if (!(cfg.tol > 0.0)) throw DomainError("tol must be positive");
}

}  // namespace

// WorkingLattice -------------------------------------------------------------

WorkingLattice::WorkingLattice(const QContext& ctx, const CauchyProblem& prob, const SolverConfig& cfg)
    : h_(cfg.h), log_q_(std::log(ctx.q())) {
    check_config(prob, cfg);
    std::size_t count = cfg.lattice_depth;
    if (count == 0) {
        // Below the last node the iterate is continued by y_0, so reach far enough
        // down that this continuation is negligible.
        const double reach = std::ceil(std::log(1e-16) / log_q_);
        count = std::max<std::size_t>(64, static_cast<std::size_t>(reach));
    }
    if (prob.a() > 0.0) {
        const long m = detail::lattice_offset(ctx, prob.a(), cfg.h);
        if (m < 1)
            throw DomainError("for a > 0 the solver requires a on the lattice of h (a = h q^m, m >= 1)");
        count = static_cast<std::size_t>(m) + 1;
    }
    nodes_.reserve(count);
    for (std::size_t k = 0; k < count; ++k) nodes_.push_back(cfg.h * ctx.pow(static_cast<double>(k)));
    if (prob.a() > 0.0) nodes_.back() = prob.a();
}

long WorkingLattice::index_of(double x) const {
    if (!(x > 0.0) || x > h_ * (1.0 + 1e-12)) return -1;
    const double k = std::log(x / h_) / log_q_;
    const double r = std::round(k);
    if (std::abs(k - r) > 1e-9 * std::max(1.0, r)) return -1;
    return static_cast<long>(r);
}

QFunction tabulated(const WorkingLattice& lattice, std::vector<double> values, QFunction tail) {
    if (values.size() != lattice.size()) throw DomainError("table size does not match the working lattice");
    auto lat = std::make_shared<const WorkingLattice>(lattice);
    auto vals = std::make_shared<const std::vector<double>>(std::move(values));
    return QFunction(
        [lat, vals, tail](double x) -> SeriesValue {
            const long k = lat->index_of(x);
            if (k < 0) throw DomainError("tabulated solution sampled off its working lattice");
            if (static_cast<std::size_t>(k) < vals->size()) return SeriesValue::exact((*vals)[k]);
            return tail.sample(x);
        },
        Interval{0.0, lattice.h()});
}

// Operators ------------------------------------------------------------------

double contraction_constant(const QContext& ctx, const CauchyProblem& prob, double h, KernelOmega convention) {
    if (!prob.lipschitz_A()) throw DomainError("contraction_constant requires a Lipschitz constant");
    if (!(h > prob.a() && h <= prob.b())) throw DomainError("contraction_constant requires a < h <= b");
    const double A = *prob.lipschitz_A();
    if (A == 0.0) return 0.0;
    const SeriesValue m = prabhakar_bound_constant(ctx, kernel_params(ctx, prob, convention), prob.a(), h);
    return A * m.checked("bound constant");
}

QFunction initial_iterate(const QContext& ctx, const CauchyProblem& prob, KernelOmega convention) {
    const PrabhakarParams kp = kernel_params(ctx, prob, convention);
    const double s = prob.a() / ctx.q();
    const double xi0 = prob.xi0();
    auto kernel = std::make_shared<PrabhakarKernel>(ctx, kp.alpha(), kp.beta(), kp.gamma(), kp.omega());
    auto mutex = std::make_shared<std::mutex>();
    return QFunction(
        [kernel, mutex, s, xi0](double x) {
            std::lock_guard lock(*mutex);
            const SeriesValue g = (*kernel)(x, s);
            return SeriesValue{xi0 * g.value, g.terms_used, std::abs(xi0) * g.tail_estimate, g.converged};
        },
        Interval{prob.a(), prob.b()}, true);
}

namespace {

/// The Picard map T y = y_0 + PI^{alpha,beta,gamma,omega_k} f(., y(.)) on the working
/// lattice. Kernel weights are computed once per (node, lattice offset) and reused.
class PicardOperator {
public:
    PicardOperator(const QContext& ctx, const CauchyProblem& prob, const SolverConfig& cfg)
        : ctx_(ctx), prob_(prob), cfg_(cfg), lattice_(ctx, prob, cfg),
          y0_(initial_iterate(ctx, prob, cfg.kernel_omega)),
          kernel_(ctx, prob.params().alpha(), prob.params().beta(), prob.params().gamma(),
                  kernel_omega(ctx, prob, cfg.kernel_omega)),
          rows_(lattice_.size()) {
        y0_values_.reserve(lattice_.size());
        for (double x : lattice_.nodes()) y0_values_.push_back(y0_(x));
    }

    const WorkingLattice& lattice() const { return lattice_; }
    const QFunction& y0() const { return y0_; }
    const std::vector<double>& y0_values() const { return y0_values_; }

    QFunction table(std::vector<double> values) const { return tabulated(lattice_, std::move(values), y0_); }

    /// (PI f(., y(.)))(x_i) for every node; y is sampled through `y`.
    std::vector<double> integral(const QFunction& y, std::vector<double>* tails = nullptr,
                                 bool* converged = nullptr) {
        const std::size_t n = lattice_.size();
        std::vector<double> out(n, 0.0);
        if (tails) tails->assign(n, 0.0);
        if (converged) *converged = true;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = lattice_.nodes()[i];
            if (x <= prob_.a()) continue;
            const SeriesValue v = detail::jackson_between(ctx_, prob_.a(), x, [&](double t) {
                const long j = lattice_.index_of(t);
                if (j < static_cast<long>(i)) throw DomainError("Picard integrand left the working lattice");
                const SeriesValue w = weight(i, static_cast<std::size_t>(j) - i, x, t);
                const SeriesValue yv = y.sample(t);
                const double fv = prob_.eval_rhs(t, yv.value);
                return SeriesValue{w.value * fv, w.terms_used, std::abs(fv) * w.tail_estimate, w.converged && yv.converged};
            });
            out[i] = v.value;
            if (tails) (*tails)[i] = v.tail_estimate;
            if (converged) *converged = *converged && v.converged;
        }
        return out;
    }

    std::vector<double> apply(const QFunction& y) {
        std::vector<double> v = integral(y);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += y0_values_[i];
        return v;
    }

private:
    const SeriesValue& weight(std::size_t i, std::size_t k, double x, double t) {
        std::vector<SeriesValue>& row = rows_[i];
        while (row.size() <= k) {
            const double tk = row.size() == k ? t : x * ctx_.pow(static_cast<double>(row.size()));
            row.push_back(kernel_(x, tk));
        }
        return row[k];
    }

    QContext ctx_;
    const CauchyProblem& prob_;
    SolverConfig cfg_;
    WorkingLattice lattice_;
    QFunction y0_;
    PrabhakarKernel kernel_;
    std::vector<std::vector<SeriesValue>> rows_;
    std::vector<double> y0_values_;
};

double sup_diff(const std::vector<double>& u, const std::vector<double>& v) {
    double d = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) d = std::max(d, std::abs(u[i] - v[i]));
    return d;
}

/// Largest |f(t, y1) - f(t, y2)| / |y1 - y2| over lattice nodes and a grid
/// spanning the values of the initial iterate.
double estimate_lipschitz(const CauchyProblem& prob, const std::vector<double>& nodes,
                          const std::vector<double>& y0) {
    double lo = *std::min_element(y0.begin(), y0.end());
    double hi = *std::max_element(y0.begin(), y0.end());
    const double pad = std::max(1.0, 0.5 * (hi - lo));
    lo -= pad;
    hi += pad;
    constexpr int kGrid = 9;
    double best = 0.0;
    for (double t : nodes) {
        if (t <= prob.a()) continue;
        double prev_y = lo;
        double prev_f = prob.eval_rhs(t, prev_y);
        for (int j = 1; j < kGrid; ++j) {
            const double y = lo + (hi - lo) * j / (kGrid - 1);
            const double f = prob.eval_rhs(t, y);
            best = std::max(best, std::abs(f - prev_f) / (y - prev_y));
            prev_y = y;
            prev_f = f;
        }
    }
    return best;
}

ContractionEstimate contraction_estimate(const PicardOperator& op, const QContext& ctx, const CauchyProblem& prob,
                                         const SolverConfig& cfg) {
    ContractionEstimate est;
    try {
        if (prob.lipschitz_A()) {
            est.delta1 = contraction_constant(ctx, prob, cfg.h, cfg.kernel_omega);
        } else {
            est.heuristic = true;
            const double A = estimate_lipschitz(prob, op.lattice().nodes(), op.y0_values());
            if (A > 0.0) {
                const PrabhakarParams kp = kernel_params(ctx, prob, cfg.kernel_omega);
                est.delta1 = A * prabhakar_bound_constant(ctx, kp, prob.a(), cfg.h).checked("bound constant");
            }
        }
    } catch (const DomainError&) {
        // Outside the bound constant's hypotheses: no contraction guarantee.
        est.delta1 = std::numeric_limits<double>::infinity();
    }
    return est;
}

}  // namespace

ContractionEstimate contraction_estimate(const QContext& ctx, const CauchyProblem& prob, const SolverConfig& cfg) {
    const PicardOperator op(ctx, prob, cfg);
    return contraction_estimate(op, ctx, prob, cfg);
}

QFunction picard_step(const QContext& ctx, const CauchyProblem& prob, const SolverConfig& cfg, const QFunction& y_prev) {
    PicardOperator op(ctx, prob, cfg);
    return op.table(op.apply(y_prev));
}

SolverReport solve(const QContext& ctx, const CauchyProblem& prob, const SolverConfig& cfg) {
    PicardOperator op(ctx, prob, cfg);
    SolverReport report;
    report.nodes = op.lattice().nodes();
    report.truncated_at_h = cfg.h < prob.b();

    const ContractionEstimate est = contraction_estimate(op, ctx, prob, cfg);
    report.delta1 = est.delta1;
    report.delta1_heuristic = est.heuristic;
    report.contraction_ok = report.delta1 < 1.0;

    std::vector<double> current = cfg.start == StartIterate::Initial ? op.y0_values()
                                                                     : std::vector<double>(report.nodes.size(), 0.0);
    for (std::size_t m = 1; m <= cfg.max_iter; ++m) {
        std::vector<double> next = op.apply(op.table(current));
        const double d = sup_diff(next, current);
        current = std::move(next);
        report.residual_history.push_back(d);
        report.iterations = m;
        if (!std::isfinite(d)) break;
        if (d <= cfg.tol) {
            report.converged = true;
            break;
        }
    }
    report.values = current;
    report.solution = op.table(std::move(current));
    return report;
}

double volterra_residual(const QContext& ctx, const CauchyProblem& prob, const SolverConfig& cfg, const QFunction& y) {
    PicardOperator op(ctx, prob, cfg);
    const std::vector<double> ty = op.apply(y);
    double r = 0.0;
    for (std::size_t i = 0; i < ty.size(); ++i) r = std::max(r, std::abs(y(op.lattice().nodes()[i]) - ty[i]));
    return r;
}

double initial_condition_value(const QContext& ctx, const CauchyProblem& prob, const SolverConfig& cfg,
                               const QFunction& y) {
    check_config(prob, cfg);
    return initial_value(ctx, prob.params(), prob.a(), y, cfg.h).checked("initial condition (a+)");
}

double differential_residual(const QContext& ctx, const CauchyProblem& prob, const SolverConfig& cfg,
                             const QFunction& y, std::size_t count) {
    const WorkingLattice lattice(ctx, prob, cfg);
    std::size_t last = lattice.size() - 1;  // a = 0: the deepest node still needs its lattice neighbour
    if (prob.a() > 0.0) last = lattice.size() >= 3 ? lattice.size() - 3 : 0;
    last = std::min(last, count);
    double r = 0.0;
    for (std::size_t i = 1; i <= last; ++i) {
        const double x = lattice.nodes()[i];
        const double d = prabhakar_q_derivative(ctx, prob.params(), prob.a(), y, x);
        r = std::max(r, std::abs(d - prob.eval_rhs(x, y(x))));
    }
    return r;
}

}  // namespace qprab
