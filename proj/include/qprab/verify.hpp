#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qprab/qfrac.hpp"

namespace qprab {

enum class VerifySuite { Algebraic, Calculus, Operators, All };

VerifySuite parse_suite(const std::string& name);
const char* to_string(VerifySuite suite);

/// Outcome of one identity over all of its randomized cases.
struct IdentityResult {
    std::string name;
    std::string description;
    double max_residual = 0.0;
    double tolerance = 0.0;
    std::size_t cases = 0;
    bool converged = true;      ///< false when a truncated series hit max_terms
    bool pass = false;
    bool informational = false; ///< reported only; does not affect the suite verdict
    std::string message;        ///< error text when a case threw
};

/// Runs the identities of `suite` with draws from `seed`. Truncation settings
/// (eps_series, eps_prod, max_terms) come from `ctx`; the operator identities
/// also use ctx.q(), the algebraic and calculus ones draw q from {0.3, 0.5, 0.9}.
std::vector<IdentityResult> run_verification(const QContext& ctx, VerifySuite suite, std::uint64_t seed);

/// True when every non-informational result passed.
bool all_passed(const std::vector<IdentityResult>& results);

/// Platform-independent uniform draws on top of std::mt19937_64.
class Draws {
public:
    explicit Draws(std::uint64_t seed) : gen_(seed) {}
    /// Uniform in [lo, hi).
    double uniform(double lo, double hi);
    /// Uniform integer in [0, n).
    std::size_t index(std::size_t n);
    template <class T, std::size_t N>
    const T& pick(const T (&choices)[N]) {
        return choices[index(N)];
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace qprab
