#include "qprab/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qprab/qsolve.hpp"
#include "qprab/verify.hpp"

namespace qprab::cli {

namespace {

using nlohmann::ordered_json;

constexpr const char* kVersion = "1.0.0";

struct Options {
    std::string command;
    // precision
    double q = 0.5;
    double eps_series = QContext::kDefaultEpsSeries;
    double eps_prod = QContext::kDefaultEpsProd;
    std::size_t max_terms = QContext::kDefaultMaxTerms;
    // output
    std::string format;
    std::string out;
    std::uint64_t seed = 42;
    // parameters
    double alpha = 0.9;
    double beta = 0.6;
    double gamma = 0.4;
    double omega = 0.05;
    double a = 0.0;
    double b = 1.0;
    std::optional<double> h;
    double xi0 = 1.0;
    double lambda = 0.3;
    double c = 1.0;
    double mu = 0.8;
    double sigma = -0.3;
    double s = 0.0;
    double delta = 1.0;
    std::string points = "0.25,0.5,1";
    double start = 0.1;
    double stop = 1.0;
    std::size_t count = 10;
    // command selectors
    std::string function;
    std::string op = "RL_INTEGRAL";
    std::string pre_omega = "none";
    std::string suite = "all";
    std::string rhs = "linear";
    std::optional<double> lipschitz;
    bool estimate_lipschitz = false;
    double tol = 1e-10;
    std::size_t max_iter = 200;
    std::size_t depth = 0;
    std::string start_iterate = "initial";
    std::string kernel_omega = "inverse";
    bool force = false;
};

/// Thrown for bad flag combinations; reported with exit code 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ordered_json num(double v) {
    // JSON has no inf/nan; they are emitted as strings so nothing is silently lost.
    if (std::isfinite(v)) return v;
    return fmt(v);
}

std::vector<double> parse_points(const std::string& text) {
    std::vector<double> pts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.find_first_not_of(" \t") == std::string::npos) continue;
        std::size_t used = 0;
        double v;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw UsageError("--points: cannot parse '" + item + "' as a number");
        }
        if (item.find_first_not_of(" \t", used) != std::string::npos)
            throw UsageError("--points: cannot parse '" + item + "' as a number");
        pts.push_back(v);
    }
    if (pts.empty()) throw UsageError("--points must list at least one value");
    return pts;
}

QContext make_context(const Options& o) {
    return QContext(o.q, o.eps_series, o.eps_prod, o.max_terms);
}

ordered_json config_echo(const Options& o) {
    ordered_json j;
    j["command"] = o.command;
    j["q"] = o.q;
    j["eps_series"] = o.eps_series;
    j["eps_prod"] = o.eps_prod;
    j["max_terms"] = o.max_terms;
    j["format"] = o.format;
    j["seed"] = o.seed;
    j["alpha"] = o.alpha;
    j["beta"] = o.beta;
    j["gamma"] = o.gamma;
    j["omega"] = o.omega;
    j["a"] = o.a;
    j["b"] = o.b;
    j["h"] = o.h ? ordered_json(*o.h) : ordered_json(nullptr);
    j["xi0"] = o.xi0;
    j["lambda"] = o.lambda;
    j["c"] = o.c;
    j["mu"] = o.mu;
    j["sigma"] = o.sigma;
    j["s"] = o.s;
    j["delta"] = o.delta;
    j["points"] = o.points;
    j["start"] = o.start;
    j["stop"] = o.stop;
    j["count"] = o.count;
    j["function"] = o.function;
    j["operator"] = o.op;
    j["pre_omega"] = o.pre_omega;
    j["suite"] = o.suite;
    j["rhs"] = o.rhs;
    j["lipschitz"] = o.lipschitz ? ordered_json(*o.lipschitz) : ordered_json(nullptr);
    j["estimate_lipschitz"] = o.estimate_lipschitz;
    j["tol"] = o.tol;
    j["max_iter"] = o.max_iter;
    j["depth"] = o.depth;
    j["start_iterate"] = o.start_iterate;
    j["kernel_omega"] = o.kernel_omega;
    j["force"] = o.force;
    return j;
}

ordered_json report(const Options& o, ordered_json results, bool pass) {
    ordered_json j;
    j["meta"] = {{"program", "qprab"}, {"version", kVersion}, {"command", o.command}};
    j["config_echo"] = config_echo(o);
    j["results"] = std::move(results);
    j["pass"] = pass;
    return j;
}

struct Row {
    double x;
    SeriesValue v;
    std::optional<double> reference;
};

std::string rows_csv(const std::vector<Row>& rows, bool with_reference) {
    std::string s = "x,value,terms_used,tail_estimate,converged";
    if (with_reference) s += ",reference";
    s += '\n';
    for (const Row& r : rows) {
        s += fmt(r.x) + ',' + fmt(r.v.value) + ',' + std::to_string(r.v.terms_used) + ',' + fmt(r.v.tail_estimate) +
             ',' + (r.v.converged ? "true" : "false");
        if (with_reference) s += ',' + (r.reference ? fmt(*r.reference) : std::string());
        s += '\n';
    }
    return s;
}

ordered_json rows_json(const std::vector<Row>& rows, bool with_reference) {
    ordered_json arr = ordered_json::array();
    for (const Row& r : rows) {
        ordered_json j = {{"x", num(r.x)},
                          {"value", num(r.v.value)},
                          {"terms_used", r.v.terms_used},
                          {"tail_estimate", num(r.v.tail_estimate)},
                          {"converged", r.v.converged}};
        if (with_reference) j["reference"] = r.reference ? num(*r.reference) : ordered_json(nullptr);
        arr.push_back(std::move(j));
    }
    return arr;
}

bool all_converged(const std::vector<Row>& rows) {
    for (const Row& r : rows)
        if (!r.v.converged) return false;
    return true;
}

/// Writes a row table in the chosen format; exit 2 if any row did not converge.
int emit_rows(const Options& o, const std::vector<Row>& rows, bool with_reference, std::string& text) {
    const bool pass = all_converged(rows);
    if (o.format == "json")
        text = report(o, rows_json(rows, with_reference), pass).dump(2) + '\n';
    else
        text = rows_csv(rows, with_reference);
    return pass ? kOk : kCheckFailed;
}

// eval / table ------------------------------------------------------------------

SeriesValue eval_function(const QContext& ctx, const Options& o, double x) {
    const std::string& f = o.function;
    if (f == "q_gamma") return q_gamma(ctx, x);
    if (f == "q_mittag_leffler") return q_mittag_leffler(ctx, o.alpha, o.beta, x);
    if (f == "q_prabhakar") return q_prabhakar(ctx, o.alpha, o.beta, o.gamma, x);
    if (f == "q_prabhakar_generalized")
        return q_prabhakar_generalized(ctx, PrabhakarParams(o.alpha, o.beta, o.gamma, o.omega),
                                       GeneralizedArgs(o.delta, x, o.s));
    if (f == "kernel_g") return kernel_g(ctx, o.alpha, o.beta, o.gamma, o.omega, x, o.s);
    throw UsageError("unknown --function '" + f +
                     "' (expected q_gamma, q_mittag_leffler, q_prabhakar, q_prabhakar_generalized or kernel_g)");
}

int cmd_eval(const Options& o, const std::vector<double>& xs, std::string& text) {
    const QContext ctx = make_context(o);
    std::vector<Row> rows;
    for (double x : xs) rows.push_back({x, eval_function(ctx, o, x), std::nullopt});
    return emit_rows(o, rows, false, text);
}

std::vector<double> grid(const Options& o) {
    if (o.count == 0) throw UsageError("--count must be positive");
    std::vector<double> xs;
    for (std::size_t i = 0; i < o.count; ++i)
        xs.push_back(o.count == 1 ? o.start
                                  : o.start + (o.stop - o.start) * static_cast<double>(i) /
                                                  static_cast<double>(o.count - 1));
    return xs;
}

// apply ----------------------------------------------------------------------

OperatorKind parse_operator(const std::string& name) {
    for (OperatorKind k : {OperatorKind::RlIntegral, OperatorKind::RlDerivative, OperatorKind::PrabhakarIntegral,
                           OperatorKind::PrabhakarDerivative})
        if (name == to_string(k)) return k;
    throw UsageError("unknown --operator '" + name +
                     "' (expected RL_INTEGRAL, RL_DERIVATIVE, PRABHAKAR_INTEGRAL or PRABHAKAR_DERIVATIVE)");
}

/// Omega of the kernel test family: the value for which the closed-form reference applies.
double family_omega(const QContext& ctx, const Options& o, OperatorKind kind) {
    const PrabhakarParams p(o.alpha, o.beta, o.gamma, o.omega);
    switch (kind) {
        case OperatorKind::PrabhakarIntegral: return omega_prime(ctx, p);
        case OperatorKind::PrabhakarDerivative: return inverse_omega(ctx, p);
        default: return o.omega;
    }
}

int cmd_apply(const Options& o, const std::vector<double>& xs, std::string& text) {
    const QContext ctx = make_context(o);
    const OperatorKind kind = parse_operator(o.op);
    const double q = ctx.q();
    const double a = o.a;
    const PrabhakarParams p(o.alpha, o.beta, o.gamma, o.omega);

    // Test function.
    QFunction f;
    const std::string fn = o.function.empty() ? "monomial" : o.function;
    double wf = 0.0;
    if (fn == "monomial") {
        if (!(o.lambda > -1.0)) throw DomainError("monomial exponent must satisfy lambda > -1");
        const double lambda = o.lambda;
        f = QFunction([ctx, a, lambda](double t) { return t <= a ? SeriesValue::exact(0.0) : q_power_frac(ctx, t, a, lambda); });
    } else if (fn == "constant") {
        const double c = o.c;
        f = QFunction([c](double) { return c; });
    } else if (fn == "kernel") {
        wf = family_omega(ctx, o, kind);
        const double alpha = o.alpha, mu = o.mu, sigma = o.sigma, s = a / q;
        f = QFunction([ctx, alpha, mu, sigma, wf, s](double t) { return kernel_g(ctx, alpha, mu, sigma, wf, t, s); },
                      {}, true);
    } else {
        throw UsageError("unknown --function '" + fn + "' for apply (expected monomial, constant or kernel)");
    }

    // Optional pre-composition with a Prabhakar integral: the inverse-composition column.
    std::optional<Companion> companion;
    if (o.pre_omega == "prime")
        companion = Companion::OmegaPrime;
    else if (o.pre_omega == "inverse")
        companion = Companion::InverseOmega;
    else if (o.pre_omega != "none")
        throw UsageError("--pre-omega must be none, prime or inverse");
    QFunction arg = f;
    if (companion) {
        if (kind != OperatorKind::PrabhakarDerivative)
            throw UsageError("--pre-omega applies only to PRABHAKAR_DERIVATIVE");
        arg = FracOperatorSpec::prabhakar_integral(p.with_omega(companion_omega(ctx, p, *companion)), a).bind(ctx, f);
    }

    FracOperatorSpec spec = FracOperatorSpec::rl_integral(o.alpha, a);
    switch (kind) {
        case OperatorKind::RlIntegral: spec = FracOperatorSpec::rl_integral(o.alpha, a); break;
        case OperatorKind::RlDerivative: spec = FracOperatorSpec::rl_derivative(o.alpha, a); break;
        case OperatorKind::PrabhakarIntegral: spec = FracOperatorSpec::prabhakar_integral(p, a); break;
        case OperatorKind::PrabhakarDerivative: spec = FracOperatorSpec::prabhakar_derivative(p, a); break;
    }

    // Closed-form reference values, where one is known.
    auto reference = [&](double x) -> std::optional<double> {
        if (companion) return f(x);
        const bool mono = fn == "monomial" || fn == "constant";
        const double lambda = fn == "monomial" ? o.lambda : 0.0;
        const double scale = fn == "constant" ? o.c : 1.0;
        const double s = a / q;
        if (mono) {
            const double gl = q_gamma(ctx, lambda + 1.0).checked("q-gamma");
            switch (kind) {
                case OperatorKind::RlIntegral:
                    return scale * gl / q_gamma(ctx, o.alpha + lambda + 1.0).checked("q-gamma") *
                           q_power_frac(ctx, x, a, o.alpha + lambda).checked("q-power");
                case OperatorKind::RlDerivative:
                    if (!(lambda + 1.0 - o.alpha > 0.0)) return std::nullopt;
                    return scale * gl / q_gamma(ctx, lambda + 1.0 - o.alpha).checked("q-gamma") *
                           q_power_frac(ctx, x, a, lambda - o.alpha).checked("q-power");
                case OperatorKind::PrabhakarIntegral:
                    return scale * gl *
                           kernel_g(ctx, o.alpha, o.beta + lambda + 1.0, o.gamma, o.omega, x, s).checked("kernel g");
                case OperatorKind::PrabhakarDerivative:
                    if (!(lambda + 1.0 - o.beta > 0.0)) return std::nullopt;
                    return scale * gl *
                           kernel_g(ctx, o.alpha, lambda + 1.0 - o.beta, -o.gamma, o.omega, x, s).checked("kernel g");
            }
        }
        if (fn == "kernel") {
            if (kind == OperatorKind::PrabhakarIntegral)
                return kernel_g(ctx, o.alpha, o.beta + o.mu, o.gamma + o.sigma, o.omega, x, s).checked("kernel g");
            if (kind == OperatorKind::PrabhakarDerivative && o.mu - o.beta > 0.0)
                return kernel_g(ctx, o.alpha, o.mu - o.beta, o.sigma - o.gamma, o.omega, x, s).checked("kernel g");
        }
        return std::nullopt;
    };

    std::vector<Row> rows;
    for (double x : xs) rows.push_back({x, spec.apply(ctx, arg, x), reference(x)});
    return emit_rows(o, rows, true, text);
}

// verify ---------------------------------------------------------------------

int cmd_verify(const Options& o, std::string& text, std::ostream& err) {
    const QContext ctx = make_context(o);
    const VerifySuite suite = parse_suite(o.suite);
    const std::vector<IdentityResult> results = run_verification(ctx, suite, o.seed);
    const bool pass = all_passed(results);
    if (o.format == "csv") {
        text = "identity,max_residual,tolerance,cases,converged,pass,informational\n";
        for (const IdentityResult& r : results)
            text += r.name + ',' + fmt(r.max_residual) + ',' + fmt(r.tolerance) + ',' + std::to_string(r.cases) + ',' +
                    (r.converged ? "true" : "false") + ',' + (r.pass ? "true" : "false") + ',' +
                    (r.informational ? "true" : "false") + '\n';
    } else {
        ordered_json arr = ordered_json::array();
        for (const IdentityResult& r : results)
            arr.push_back({{"identity", r.name},
                           {"description", r.description},
                           {"max_residual", num(r.max_residual)},
                           {"tolerance", r.tolerance},
                           {"cases", r.cases},
                           {"converged", r.converged},
                           {"pass", r.pass},
                           {"informational", r.informational},
                           {"message", r.message}});
        text = report(o, std::move(arr), pass).dump(2) + '\n';
    }
    if (!pass) {
        for (const IdentityResult& r : results) {
            if (r.informational || r.pass) continue;
            err << "verification failed: " << r.name;
            if (!r.converged) err << " (NotConverged)";
            if (!r.message.empty()) err << ": " << r.message;
            err << '\n';
            break;
        }
        return kCheckFailed;
    }
    return kOk;
}

// solve ----------------------------------------------------------------------

int cmd_solve(const Options& o, std::string& text, std::ostream& err) {
    const QContext ctx = make_context(o);
    const PrabhakarParams p(o.alpha, o.beta, o.gamma, o.omega);

    Rhs rhs;
    double exact_lipschitz = 0.0;
    if (o.rhs == "zero") {
        rhs = [](double, double) { return 0.0; };
    } else if (o.rhs == "constant") {
        const double c = o.c;
        rhs = [c](double, double) { return c; };
    } else if (o.rhs == "linear") {
        const double lambda = o.lambda;
        rhs = [lambda](double, double y) { return lambda * y; };
        exact_lipschitz = std::abs(lambda);
    } else {
        throw UsageError("--rhs must be zero, constant or linear");
    }
    std::optional<double> A = o.lipschitz ? o.lipschitz : std::optional<double>(exact_lipschitz);
    if (o.estimate_lipschitz) A.reset();
    const CauchyProblem prob(p, o.a, o.b, o.xi0, rhs, A);

    SolverConfig cfg;
    cfg.h = o.h.value_or(o.b);
    cfg.tol = o.tol;
    cfg.max_iter = o.max_iter;
    cfg.lattice_depth = o.depth;
    if (o.start_iterate == "initial")
        cfg.start = StartIterate::Initial;
    else if (o.start_iterate == "zero")
        cfg.start = StartIterate::Zero;
    else
        throw UsageError("--start-iterate must be initial or zero");
    if (o.kernel_omega == "inverse")
        cfg.kernel_omega = KernelOmega::Inverse;
    else if (o.kernel_omega == "as-stated")
        cfg.kernel_omega = KernelOmega::AsStated;
    else
        throw UsageError("--kernel-omega must be inverse or as-stated");

    const ContractionEstimate est = contraction_estimate(ctx, prob, cfg);
    if (!(est.delta1 < 1.0) && !o.force) {
        err << "contraction condition violated: delta1 = " << fmt(est.delta1)
            << " >= 1 (A (h - qa)^beta e_{alpha,beta+1}[|omega| (h - q^(beta+1) a)^alpha] < 1 is required);"
               " choose a smaller h or pass --force\n";
        return kCheckFailed;
    }

    const SolverReport rep = solve(ctx, prob, cfg);
    const double volterra = volterra_residual(ctx, prob, cfg, rep.solution);
    const bool init_applicable = prob.a() == 0.0 || p.beta() == 1.0;
    std::optional<double> init;
    std::string init_message;
    try {
        init = initial_condition_value(ctx, prob, cfg, rep.solution);
    } catch (const NotConverged& e) {
        init_message = e.what();
    }
    const double diff = differential_residual(ctx, prob, cfg, rep.solution);
    const double init_res = init ? std::abs(*init - prob.xi0()) : std::numeric_limits<double>::infinity();

    const bool volterra_ok = volterra <= 10.0 * cfg.tol;
    const bool init_ok = !init_applicable || init_res <= 1e-5;
    const bool diff_ok = diff <= 1e-4;
    const bool pass = rep.converged && volterra_ok && init_ok && diff_ok;

    // A-posteriori bound of the contraction mapping theorem for the distance to the fixed point.
    const double last = rep.residual_history.empty() ? 0.0 : rep.residual_history.back();
    const double tail = rep.contraction_ok ? last * rep.delta1 / (1.0 - rep.delta1)
                                           : std::numeric_limits<double>::infinity();
    std::vector<Row> rows;
    for (std::size_t i = 0; i < rep.nodes.size(); ++i)
        rows.push_back({rep.nodes[i], {rep.values[i], rep.iterations, tail, rep.converged}, std::nullopt});

    if (o.format == "csv") {
        text = rows_csv(rows, false);
    } else {
        ordered_json hist = ordered_json::array();
        for (double d : rep.residual_history) hist.push_back(num(d));
        ordered_json r;
        r["h"] = cfg.h;
        r["iterations"] = rep.iterations;
        r["converged"] = rep.converged;
        r["delta1"] = num(rep.delta1);
        r["delta1_heuristic"] = rep.delta1_heuristic;
        r["contraction_ok"] = rep.contraction_ok;
        r["truncated_at_h"] = rep.truncated_at_h;
        r["kernel_omega"] = num(kernel_omega(ctx, prob, cfg.kernel_omega));
        r["residual_history"] = std::move(hist);
        r["volterra_residual"] = num(volterra);
        r["volterra_ok"] = volterra_ok;
        r["initial_condition_value"] = init ? num(*init) : ordered_json(nullptr);
        r["initial_condition_residual"] = num(init_res);
        r["initial_condition_applicable"] = init_applicable;
        r["initial_condition_ok"] = init_ok;
        if (!init_message.empty()) r["initial_condition_message"] = init_message;
        r["differential_residual"] = num(diff);
        r["differential_ok"] = diff_ok;
        r["solution"] = rows_json(rows, false);
        ordered_json arr = ordered_json::array();
        arr.push_back(std::move(r));
        text = report(o, std::move(arr), pass).dump(2) + '\n';
    }
    if (rep.truncated_at_h) err << "note: solution covers (a, h] with h = " << fmt(cfg.h) << " < b\n";
    if (!rep.contraction_ok) err << "warning: delta1 = " << fmt(rep.delta1) << " >= 1; iterated because of --force\n";
    if (!pass) {
        if (!rep.converged)
            err << "solve failed: Picard iteration did not reach tol within max_iter (NotConverged)\n";
        else
            err << "solve failed: a-posteriori checks (volterra " << (volterra_ok ? "ok" : "FAIL") << ", initial condition "
                << (init_ok ? "ok" : "FAIL") << ", differential form " << (diff_ok ? "ok" : "FAIL") << ")\n";
        return kCheckFailed;
    }
    return kOk;
}

// option wiring ----------------------------------------------------------------

void add_common(CLI::App* app, Options& o) {
    app->add_option("--q", o.q, "base q in (0, 1)");
    app->add_option("--eps-series", o.eps_series, "relative series tolerance");
    app->add_option("--eps-prod", o.eps_prod, "infinite-product tolerance");
    app->add_option("--max-terms", o.max_terms, "cap on terms of any series, product or lattice walk");
    app->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--out", o.out, "write the report to this file instead of standard output");
    app->add_option("--seed", o.seed, "seed for randomized draws");
}

void add_params(CLI::App* app, Options& o) {
    app->add_option("--alpha", o.alpha, "alpha (> 0)");
    app->add_option("--beta", o.beta, "beta (> 0); mu for kernel_g");
    app->add_option("--gamma", o.gamma, "gamma; sigma for kernel_g");
    app->add_option("--omega", o.omega, "omega");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"q-fractional Prabhakar calculus: special functions, operators, identity checks and a Picard solver",
                 "qprab"};
    app.require_subcommand(1, 1);

    CLI::App* eval = app.add_subcommand("eval", "evaluate a special function at --points");
    add_common(eval, o);
    add_params(eval, o);
    eval->add_option("--function", o.function, "q_gamma, q_mittag_leffler, q_prabhakar, q_prabhakar_generalized, kernel_g")
        ->required();
    eval->add_option("--points", o.points, "comma-separated evaluation points");
    eval->add_option("--s", o.s, "offset s (generalized function and kernel_g)");
    eval->add_option("--delta", o.delta, "q-power exponent delta (generalized function)");

    CLI::App* table = app.add_subcommand("table", "tabulate a special function on a uniform grid");
    add_common(table, o);
    add_params(table, o);
    table->add_option("--function", o.function, "as for eval")->required();
    table->add_option("--start", o.start, "first grid point");
    table->add_option("--stop", o.stop, "last grid point");
    table->add_option("--count", o.count, "number of grid points");
    table->add_option("--s", o.s, "offset s");
    table->add_option("--delta", o.delta, "q-power exponent delta");

    CLI::App* apply = app.add_subcommand("apply", "apply a fractional q-operator to a built-in test function");
    add_common(apply, o);
    add_params(apply, o);
    apply->add_option("--operator", o.op, "RL_INTEGRAL, RL_DERIVATIVE, PRABHAKAR_INTEGRAL, PRABHAKAR_DERIVATIVE");
    apply->add_option("--function", o.function, "monomial (x-a)_q^lambda, constant c, or kernel g^{alpha,mu}_{sigma,.}(x,a/q)");
    apply->add_option("--a", o.a, "lower limit");
    apply->add_option("--lambda", o.lambda, "monomial exponent (> -1)");
    apply->add_option("--c", o.c, "constant value");
    apply->add_option("--mu", o.mu, "kernel family mu");
    apply->add_option("--sigma", o.sigma, "kernel family sigma");
    apply->add_option("--pre-omega", o.pre_omega,
                      "none, prime or inverse: first apply PI^{alpha,beta,gamma,w} with w = q^gamma omega or q^-gamma omega");
    apply->add_option("--points", o.points, "comma-separated evaluation points");

    CLI::App* verify = app.add_subcommand("verify", "run identity-verification suites");
    add_common(verify, o);
    verify->add_option("--suite", o.suite, "algebraic, calculus, operators or all");

    CLI::App* solvec = app.add_subcommand("solve", "solve the Cauchy-type problem by Picard iteration");
    solvec->set_help_flag("--help", "print this help message and exit");
    add_common(solvec, o);
    add_params(solvec, o);
    solvec->add_option("--a", o.a, "left endpoint");
    solvec->add_option("--b", o.b, "right endpoint");
    solvec->add_option("--h", o.h, "working right endpoint in (a, b]; default b");
    solvec->add_option("--xi0", o.xi0, "initial value (nonzero)");
    solvec->add_option("--rhs", o.rhs, "zero, constant or linear (f = c or f = lambda y)");
    solvec->add_option("--c", o.c, "constant right-hand side");
    solvec->add_option("--lambda", o.lambda, "linear right-hand side coefficient");
    solvec->add_option("--lipschitz", o.lipschitz, "Lipschitz constant A (default: exact for the built-in rhs)");
    solvec->add_flag("--estimate-lipschitz", o.estimate_lipschitz, "estimate A from rhs samples (heuristic)");
    solvec->add_option("--tol", o.tol, "sup-lattice stopping tolerance");
    solvec->add_option("--max-iter", o.max_iter, "maximum Picard iterations");
    solvec->add_option("--depth", o.depth, "lattice depth for a = 0 (0: automatic)");
    solvec->add_option("--start-iterate", o.start_iterate, "initial or zero");
    solvec->add_option("--kernel-omega", o.kernel_omega, "inverse (q^-gamma omega) or as-stated (q^gamma omega)");
    solvec->add_flag("--force", o.force, "iterate even when delta1 >= 1");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsageError;
    }

    CLI::App* sub = app.get_subcommands().front();
    o.command = sub->get_name();
    if (o.format.empty()) o.format = (o.command == "verify" || o.command == "solve") ? "json" : "csv";

    std::string text;
    int code = kOk;
    try {
        const QContext ctx = make_context(o);
        if (ctx.near_one()) err << "warning: q >= 0.999; infinite products and Jackson sums converge slowly\n";
        if (o.command == "eval")
            code = cmd_eval(o, parse_points(o.points), text);
        else if (o.command == "table")
            code = cmd_eval(o, grid(o), text);
        else if (o.command == "apply")
            code = cmd_apply(o, parse_points(o.points), text);
        else if (o.command == "verify")
            code = cmd_verify(o, text, err);
        else
            code = cmd_solve(o, text, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsageError;
    } catch (const NotConverged& e) {
        err << "error: NotConverged: " << e.what() << '\n';
        return kCheckFailed;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }

    if (!o.out.empty()) {
        std::ofstream file(o.out, std::ios::binary);
        if (!file) {
            err << "error: cannot open --out file '" << o.out << "'\n";
            return kUsageError;
        }
        file << text;
    } else {
        out << text;
    }
    if (code != kOk && (o.command == "eval" || o.command == "table" || o.command == "apply"))
        err << "error: NotConverged: at least one row did not meet its truncation tolerance\n";
    return code;
}

}  // namespace qprab::cli
