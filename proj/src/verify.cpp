#include "qprab/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace qprab {

VerifySuite parse_suite(const std::string& name) {
    if (name == "algebraic") return VerifySuite::Algebraic;
    if (name == "calculus") return VerifySuite::Calculus;
    if (name == "operators") return VerifySuite::Operators;
    if (name == "all") return VerifySuite::All;
    throw DomainError("unknown suite '" + name + "' (expected algebraic, calculus, operators or all)");
}

const char* to_string(VerifySuite suite) {
    switch (suite) {
        case VerifySuite::Algebraic: return "algebraic";
        case VerifySuite::Calculus: return "calculus";
        case VerifySuite::Operators: return "operators";
        case VerifySuite::All: return "all";
    }
    return "?";
}

double Draws::uniform(double lo, double hi) {
    // 53 random bits; independent of the standard library's distribution code.
    const double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

std::size_t Draws::index(std::size_t n) {
    return static_cast<std::size_t>(gen_() % n);
}

bool all_passed(const std::vector<IdentityResult>& results) {
    return std::all_of(results.begin(), results.end(),
                       [](const IdentityResult& r) { return r.informational || r.pass; });
}

namespace {

constexpr double kQs[] = {0.3, 0.5, 0.9};

QContext with_q(const QContext& ctx, double q) {
    return QContext(q, ctx.eps_series(), ctx.eps_prod(), ctx.max_terms());
}

/// Runs `one(i)` for i < cases and keeps the largest residual.
template <class Case>
IdentityResult run_identity(const char* name, const char* description, double tolerance, std::size_t cases,
                            Case&& one, bool informational = false) {
    IdentityResult r;
    r.name = name;
    r.description = description;
    r.tolerance = tolerance;
    r.informational = informational;
    try {
        for (std::size_t i = 0; i < cases; ++i) {
            double res = one(i);
            if (std::isnan(res)) res = std::numeric_limits<double>::infinity();
            r.max_residual = std::max(r.max_residual, res);
            ++r.cases;
        }
    } catch (const NotConverged& e) {
        r.converged = false;
        r.message = e.what();
    } catch (const Error& e) {
        r.message = e.what();
    }
    r.pass = r.converged && r.message.empty() && r.max_residual < tolerance;
    return r;
}

double relative(double value, double reference) {
    return std::abs(value - reference) / std::max(std::abs(reference), std::numeric_limits<double>::min());
}

/// Random cubic with coefficients in [-1, 1].
QFunction random_polynomial(Draws& d) {
    std::array<double, 4> c{};
    for (double& v : c) v = d.uniform(-1.0, 1.0);
    return QFunction([c](double t) { return c[0] + t * (c[1] + t * (c[2] + t * c[3])); });
}

// algebraic ------------------------------------------------------------------

void algebraic(const QContext& ctx, Draws& d, std::vector<IdentityResult>& out) {
    out.push_back(run_identity("pochhammer_convolution", "sum_k (gamma)_{n-k} q^(gamma k) (sigma)_k = (gamma+sigma)_n",
                               1e-11, 200, [&](std::size_t) {
                                   const QContext c = with_q(ctx, d.pick(kQs));
                                   const double g = d.uniform(-2.0, 2.0);
                                   const double s = d.uniform(-2.0, 2.0);
                                   return check_pochhammer_convolution(c, g, s, d.index(26));
                               }));
    out.push_back(run_identity("vandermonde", "q-Vandermonde expansion of (q^(alpha+beta);q)_n", 1e-11, 200,
                               [&](std::size_t) {
                                   const QContext c = with_q(ctx, d.pick(kQs));
                                   const double a = d.uniform(-2.0, 2.0);
                                   const double b = d.uniform(-2.0, 2.0);
                                   return check_vandermonde(c, a, b, d.index(26));
                               }));
    out.push_back(run_identity("gamma_recurrence", "Gamma_q(x+1) = [x]_q Gamma_q(x), relative", 1e-10, 50,
                               [&](std::size_t) {
                                   const QContext c = with_q(ctx, d.pick(kQs));
                                   const double x = d.uniform(1e-3, 20.0);
                                   const double lhs = q_gamma(c, x + 1.0).checked("q-gamma");
                                   return relative(q_number(c, x) * q_gamma(c, x).checked("q-gamma"), lhs);
                               }));
    out.push_back(run_identity("gamma_factorial", "Gamma_q(n+1) = [n]_q!, relative", 1e-10, 63, [&](std::size_t i) {
        const QContext c = with_q(ctx, kQs[i / 21]);
        const std::size_t n = i % 21;
        return relative(q_gamma(c, static_cast<double>(n) + 1.0).checked("q-gamma"), q_factorial(c, n));
    }));
}

// calculus -------------------------------------------------------------------

void calculus(const QContext& ctx, Draws& d, std::vector<IdentityResult>& out) {
    out.push_back(run_identity(
        "rl_power_rule", "I^alpha t^lambda = Gamma_q(lambda+1)/Gamma_q(alpha+lambda+1) x^(alpha+lambda), relative", 1e-8,
        20, [&](std::size_t) {
            const QContext c = with_q(ctx, d.pick(kQs));
            static constexpr double kAlpha[] = {0.3, 0.7, 1.5};
            static constexpr double kLambda[] = {-0.5, 0.0, 0.7, 1.3, 2.0};
            static constexpr double kX[] = {0.25, 0.5, 1.0};
            const double alpha = d.pick(kAlpha);
            const double lambda = d.pick(kLambda);
            const double x = d.pick(kX);
            const QFunction f([lambda](double t) { return std::pow(t, lambda); });
            const double num = rl_q_integral(c, alpha, 0.0, f, x).checked("RL q-integral");
            const double ref = q_gamma(c, lambda + 1.0).checked("q-gamma") /
                               q_gamma(c, alpha + lambda + 1.0).checked("q-gamma") * std::pow(x, alpha + lambda);
            return relative(num, ref);
        }));
    out.push_back(run_identity("rl_semigroup", "I^alpha I^beta f = I^(alpha+beta) f on cubics", 1e-8, 5, [&](std::size_t) {
        const QContext c = with_q(ctx, d.pick(kQs));
        const double alpha = d.uniform(0.2, 1.5);
        const double beta = d.uniform(0.2, 1.5);
        const QFunction f = random_polynomial(d);
        const QFunction inner = FracOperatorSpec::rl_integral(beta, 0.0).bind(c, f);
        double r = 0.0;
        for (int k = 0; k < 3; ++k) {
            const double x = c.pow(k);
            const double lhs = rl_q_integral(c, alpha, 0.0, inner, x).checked("RL q-integral");
            const double rhs = rl_q_integral(c, alpha + beta, 0.0, f, x).checked("RL q-integral");
            r = std::max(r, std::abs(lhs - rhs));
        }
        return r;
    }));
    out.push_back(run_identity("rl_inverse", "D^alpha I^alpha f = f on cubics", 1e-8, 5, [&](std::size_t) {
        const QContext c = with_q(ctx, d.pick(kQs));
        const double alpha = d.uniform(0.2, 1.5);
        const QFunction f = random_polynomial(d);
        const QFunction inner = FracOperatorSpec::rl_integral(alpha, 0.0).bind(c, f);
        double r = 0.0;
        for (int k = 0; k < 3; ++k) {
            const double x = c.pow(k);
            r = std::max(r, std::abs(rl_q_derivative(c, alpha, 0.0, inner, x) - f(x)));
        }
        return r;
    }));
    out.push_back(run_identity("q_fundamental_theorem", "D_q int_0^x f d_q t = f(x) on cubics", 1e-10, 10,
                               [&](std::size_t) {
                                   const QContext c = with_q(ctx, d.pick(kQs));
                                   const QFunction f = random_polynomial(d);
                                   const QFunction F([c, f](double x) { return q_integral_0(c, f, x); });
                                   const double x = d.uniform(0.1, 1.0);
                                   return std::abs(q_derivative(c, F, x) - f(x));
                               }));
}

// operators ------------------------------------------------------------------

/// Parameters inside every convergence domain the operator identities touch on [0, 1].
PrabhakarParams random_params(Draws& d, double beta_lo, double beta_hi) {
    // Sequenced draws: argument evaluation order is unspecified.
    const double alpha = d.uniform(0.5, 1.5);
    const double beta = d.uniform(beta_lo, beta_hi);
    const double gamma = d.uniform(-0.9, 0.9);
    const double omega = d.uniform(-0.2, 0.2);
    return PrabhakarParams(alpha, beta, gamma, omega);
}

/// beta in [0.3, 0.9] or exactly 1: the (a+) lattice limit converges like x^(1-beta).
PrabhakarParams random_left_params(Draws& d) {
    PrabhakarParams p = random_params(d, 0.3, 0.9);
    if (d.index(4) == 0) p = p.with_beta(1.0);
    return p;
}

double right_inverse_case(const QContext& ctx, Draws& d, Companion companion) {
    const PrabhakarParams p = random_params(d, 0.3, 1.5);
    const QFunction f = random_polynomial(d);
    double r = 0.0;
    for (int k = 0; k < 3; ++k) r = std::max(r, check_right_inverse(ctx, p, 0.0, f, ctx.pow(k), companion));
    return r;
}

double left_inverse_case(const QContext& ctx, Draws& d, std::size_t i, Companion companion) {
    const PrabhakarParams p = random_left_params(d);
    const double wc = companion_omega(ctx, p, companion);
    QFunction f;
    switch (i % 3) {
        case 0: f = random_polynomial(d); break;
        case 1:
            f = QFunction([ctx, p, wc](double t) { return kernel_g(ctx, p.alpha(), p.beta(), p.gamma(), wc, t, 0.0); },
                          {}, true);
            break;
        default: {
            const QFunction h = random_polynomial(d);
            f = FracOperatorSpec::prabhakar_integral(p.with_omega(wc), 0.0).bind(ctx, h);
        }
    }
    double r = 0.0;
    for (int k = 0; k < 2; ++k) r = std::max(r, check_left_inverse_with_initial(ctx, p, 0.0, f, ctx.pow(k), companion));
    return r;
}

/// Nonnegative random values on the first 40 nodes b q^k, zero below.
QFunction random_lattice_function(const QContext& ctx, Draws& d, double b) {
    std::vector<double> v(40);
    for (double& x : v) x = d.uniform(0.0, 1.0);
    const double log_q = std::log(ctx.q());
    return QFunction([v, b, log_q](double t) {
        if (t <= 0.0) return 0.0;
        const long k = std::lround(std::log(t / b) / log_q);
        return k >= 0 && k < static_cast<long>(v.size()) ? v[static_cast<std::size_t>(k)] : 0.0;
    });
}

void operators(const QContext& ctx, Draws& d, std::vector<IdentityResult>& out) {
    out.push_back(run_identity(
        "prabhakar_kernel_action",
        "PI^{alpha,beta,gamma,omega} g^{alpha,mu}_{sigma,q^gamma omega}(., 0) = g^{alpha,beta+mu}_{gamma+sigma,omega}(x, 0), relative",
        1e-6, 10, [&](std::size_t) {
            const PrabhakarParams p = random_params(d, 0.3, 1.5);
            const double mu = d.uniform(0.3, 1.5);
            const double sigma = d.uniform(-0.9, 0.9);
            const double wf = omega_prime(ctx, p);
            const QFunction f([&ctx, &p, mu, sigma, wf](double t) {
                return kernel_g(ctx, p.alpha(), mu, sigma, wf, t, 0.0);
            });
            double r = 0.0;
            for (int k = 0; k < 3; ++k) {
                const double x = ctx.pow(k);
                const double lhs = prabhakar_q_integral(ctx, p, 0.0, f, x).checked("Prabhakar q-integral");
                const double ref = kernel_g(ctx, p.alpha(), p.beta() + mu, p.gamma() + sigma, p.omega(), x, 0.0)
                                       .checked("kernel g");
                r = std::max(r, relative(lhs, ref));
            }
            return r;
        }));
    out.push_back(run_identity(
        "prabhakar_semigroup",
        "PI^{alpha,beta,gamma,omega} PI^{alpha,mu,sigma,q^gamma omega} f = PI^{alpha,beta+mu,gamma+sigma,omega} f", 1e-6,
        10, [&](std::size_t i) {
            const PrabhakarParams p = random_params(d, 0.3, 1.5);
            const double mu = d.uniform(0.3, 1.5);
            // Every other draw uses sigma = -gamma, where the right side is I^(beta+mu).
            const double sigma = i % 2 == 0 ? -p.gamma() : d.uniform(-0.9, 0.9);
            const QFunction f = random_polynomial(d);
            double r = 0.0;
            for (int k = 0; k < 2; ++k) {
                const double x = ctx.pow(k);
                r = std::max(r, check_semigroup(ctx, p, mu, sigma, 0.0, f, x));
                if (sigma == -p.gamma()) {
                    const QFunction inner =
                        FracOperatorSpec::prabhakar_integral(PrabhakarParams(p.alpha(), mu, sigma, omega_prime(ctx, p)), 0.0)
                            .bind(ctx, f);
                    const double lhs = prabhakar_q_integral(ctx, p, 0.0, inner, x).checked("Prabhakar q-integral");
                    const double rl = rl_q_integral(ctx, p.beta() + mu, 0.0, f, x).checked("RL q-integral");
                    r = std::max(r, std::abs(lhs - rl));
                }
            }
            return r;
        }));
    out.push_back(run_identity("omega_zero_degeneration",
                               "omega = 0: Prabhakar operators equal the RL operators of order beta, relative", 1e-10, 10,
                               [&](std::size_t) {
                                   const PrabhakarParams p = random_params(d, 0.3, 1.5).with_omega(0.0);
                                   const QFunction f([](double t) { return 1.0 + t * t; });
                                   double r = 0.0;
                                   for (int k = 0; k < 3; ++k) {
                                       const double x = ctx.pow(k);
                                       const double pi = prabhakar_q_integral(ctx, p, 0.0, f, x).checked("PI");
                                       const double ri = rl_q_integral(ctx, p.beta(), 0.0, f, x).checked("I");
                                       const double pd = prabhakar_q_derivative(ctx, p, 0.0, f, x);
                                       const double rd = rl_q_derivative(ctx, p.beta(), 0.0, f, x);
                                       r = std::max({r, relative(pi, ri), relative(pd, rd)});
                                   }
                                   return r;
                               }));
    out.push_back(run_identity("right_inverse",
                               "PD^{alpha,beta,gamma,omega} PI^{alpha,beta,gamma,q^(-gamma) omega} f = f on cubics", 1e-6, 10,
                               [&](std::size_t) { return right_inverse_case(ctx, d, Companion::InverseOmega); }));
    out.push_back(run_identity(
        "left_inverse_with_initial",
        "PI^{alpha,beta,gamma,q^(-gamma) omega} PD^{alpha,beta,gamma,omega} f = f - g(x, a/q) (a+ value), 0 < beta <= 1",
        1e-6, 9, [&](std::size_t i) { return left_inverse_case(ctx, d, i, Companion::InverseOmega); }));
    out.push_back(run_identity(
        "boundedness", "||PI f||_p <= M ||f||_p for p = 1, 2 (ratio to M; must stay below 1 + 1e-6)", 1.0 + 1e-6, 10,
        [&](std::size_t) {
            const double b = 1.0;
            const double q = ctx.q();
            const double alpha = d.uniform(0.5, 1.5);
            const double omega = d.uniform(-0.9, 0.9) * std::pow(1.0 - q, alpha) / std::pow(b, alpha);
            const double beta = d.uniform(0.3, 1.5);
            const double gamma = d.uniform(-0.99, 0.99);
            const PrabhakarParams p(alpha, beta, gamma, omega);
            const double M = prabhakar_bound_constant(ctx, p, 0.0, b).checked("bound constant");
            const QFunction f = random_lattice_function(ctx, d, b);
            const QFunction pf = FracOperatorSpec::prabhakar_integral(p, 0.0).bind(ctx, f);
            double r = 0.0;
            for (double pw : {1.0, 2.0}) {
                const double nf = q_norm(ctx, f, 0.0, b, pw).checked("norm");
                const double npf = q_norm(ctx, pf, 0.0, b, pw).checked("norm");
                r = std::max(r, npf / (M * nf));
            }
            return r;
        }));
    out.push_back(run_identity("right_inverse_omega_prime",
                               "the same right inverse with q^gamma omega in the inner integral (as commonly stated)", 1e-6,
                               5, [&](std::size_t) { return right_inverse_case(ctx, d, Companion::OmegaPrime); }, true));
    out.push_back(run_identity("left_inverse_omega_prime",
                               "the same left inverse with q^gamma omega in the outer integral and g (as commonly stated)",
                               1e-6, 3, [&](std::size_t i) { return left_inverse_case(ctx, d, i, Companion::OmegaPrime); },
                               true));
}

}  // namespace

std::vector<IdentityResult> run_verification(const QContext& ctx, VerifySuite suite, std::uint64_t seed) {
    std::vector<IdentityResult> out;
    // One independent stream per suite so that "all" reproduces the single-suite runs.
    if (suite == VerifySuite::Algebraic || suite == VerifySuite::All) {
        Draws d(seed);
        algebraic(ctx, d, out);
    }
    if (suite == VerifySuite::Calculus || suite == VerifySuite::All) {
        Draws d(seed + 1);
        calculus(ctx, d, out);
    }
    if (suite == VerifySuite::Operators || suite == VerifySuite::All) {
        Draws d(seed + 2);
        operators(ctx, d, out);
    }
    return out;
}

}  // namespace qprab
