#pragma once

#include <cstddef>
#include <optional>

namespace sfor {

/// Γ(x). Throws DomainError at the poles x = 0, -1, -2, ...
double gamma_fn(double x);

/// 1/Γ(x), with the removable zeros at nonpositive integers returned as 0.
double rgamma(double x);

/// Riemann–Liouville kernel ω_β(t) = t^{β-1}/Γ(β), β > 0, t > 0.
double omega(double beta, double t);

/// Controls evaluation of the Mittag-Leffler function E_{α,ν}(z) for z <= 0.
///
/// |z| <= crossover_magnitude: Taylor series summed in extended precision.
/// |z| >  crossover_magnitude: asymptotic expansion, including the two
/// exponentially damped pole contributions present for 1 < α < 2.
/// Whenever the selected branch cannot certify target_rel_tol, evaluation
/// falls back to the Hankel-contour integral representation.
struct MLEvalPolicy {
    std::size_t series_terms_max = 200;
    std::size_t asymptotic_terms = 20;
    double crossover_magnitude = 10.0;
    double target_rel_tol = 1e-12;

    /// Throws ValidationError unless target_rel_tol in (0, 1e-6] and crossover > 1.
    void validate() const;
};

enum class MLBranch { Series, Asymptotic, Integral, ClosedForm };

struct MLResult {
    double value = 0.0;
    /// Estimated absolute error of value.
    double error = 0.0;
    MLBranch branch = MLBranch::Series;
};

/// E_{α,ν}(z) = Σ_k z^k / Γ(αk + ν) on the nonpositive real axis, 0 < α <= 2.
/// Throws AccuracyError (carrying the achieved relative estimate) when no
/// branch reaches policy.target_rel_tol.
double mittag_leffler(double alpha, double nu, double z, const MLEvalPolicy& policy = {});

/// As mittag_leffler, reporting the branch used and its error estimate.
MLResult mittag_leffler_detailed(double alpha, double nu, double z,
                                 const MLEvalPolicy& policy = {});

// Individual branches, exposed for cross-validation. They never throw on
// insufficient accuracy; the caller inspects MLResult::error.
MLResult ml_series(double alpha, double nu, double z, const MLEvalPolicy& policy = {});
MLResult ml_asymptotic(double alpha, double nu, double z, const MLEvalPolicy& policy = {});
MLResult ml_integral(double alpha, double nu, double z, const MLEvalPolicy& policy = {});

/// Scale against which relative accuracy of E_{α,ν}(z) is judged: max(|value|, 1/(1+|z|)^2).
/// Keeps the acceptance test meaningful near the real zeros present for α close to 2.
double ml_accuracy_scale(double value, double z);

}  // namespace sfor
