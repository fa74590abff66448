#include "sfor/special.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/sin_pi.hpp>
#include <boost/math/special_functions/cos_pi.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "sfor/error.hpp"

namespace sfor {
namespace {

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

bool is_integer(double x) { return x == std::floor(x); }

long double rgamma_ld(long double x) {
    if (x <= 0.0L && x == std::floor(x)) {
        return 0.0L;
    }
    return 1.0L / std::tgamma(x);
}

// Contribution of the poles of s^{α-ν}/(s^α + x) on the principal sheet, i.e.
// the exponentially damped oscillation that the algebraic expansion misses.
// Returns NaN when the contribution is not defined (α = 1 with noninteger ν).
double pole_terms(double alpha, double nu, double x) {
    if (alpha < 1.0) {
        return 0.0;
    }
    if (alpha == 1.0) {
        if (!is_integer(nu)) {
            return std::numeric_limits<double>::quiet_NaN();
        }
        // Single real pole at s = -x.
        const double sign = (static_cast<long long>(1.0 - nu) % 2 == 0) ? 1.0 : -1.0;
        return sign * std::exp(-x) * std::pow(x, 1.0 - nu);
    }
    const double rho = std::pow(x, 1.0 / alpha);
    const double phi = std::numbers::pi / alpha;
    const double modulus = std::pow(rho, 1.0 - nu) * std::exp(rho * std::cos(phi));
    const double angle = rho * std::sin(phi) + phi * (1.0 - nu);
    return 2.0 / alpha * modulus * std::cos(angle);
}

double sin_pi(double x) { return boost::math::sin_pi(x); }
double cos_pi(double x) { return boost::math::cos_pi(x); }

}  // namespace

double gamma_fn(double x) {
    if (std::isnan(x)) {
        throw DomainError("gamma: argument is NaN");
    }
    if (is_nonpositive_integer(x)) {
        throw DomainError("gamma: pole at nonpositive integer " + std::to_string(x));
    }
    return std::tgamma(x);
}

double rgamma(double x) {
    if (is_nonpositive_integer(x)) {
        return 0.0;
    }
    if (x > 170.0) {
        return std::exp(-std::lgamma(x));
    }
    return 1.0 / std::tgamma(x);
}

double omega(double beta, double t) {
    if (!(beta > 0.0)) {
        throw ValidationError("omega: order β must be positive");
    }
    if (!(t > 0.0)) {
        throw ValidationError("omega: ω_β is evaluated only at t > 0");
    }
    return std::pow(t, beta - 1.0) / std::tgamma(beta);
}

void MLEvalPolicy::validate() const {
    if (!(target_rel_tol > 0.0 && target_rel_tol <= 1e-6)) {
        throw ValidationError("Mittag-Leffler policy: target_rel_tol must lie in (0, 1e-6]");
    }
    if (!(crossover_magnitude > 1.0)) {
        throw ValidationError("Mittag-Leffler policy: crossover_magnitude must exceed 1");
    }
    if (series_terms_max == 0) {
        throw ValidationError("Mittag-Leffler policy: series_terms_max must be positive");
    }
}

double ml_accuracy_scale(double value, double z) {
    const double floor = 1.0 / ((1.0 + std::abs(z)) * (1.0 + std::abs(z)));
    return std::max(std::abs(value), floor);
}

MLResult ml_series(double alpha, double nu, double z, const MLEvalPolicy& policy) {
    constexpr long double eps = std::numeric_limits<long double>::epsilon();
    const long double zl = z;

    long double sum = 0.0L;
    long double abs_sum = 0.0L;
    long double power = 1.0L;
    long double prev = std::numeric_limits<long double>::infinity();
    long double last = 0.0L;
    bool converged = false;

    for (std::size_t k = 0; k < policy.series_terms_max; ++k) {
        const long double term = power * rgamma_ld(alpha * static_cast<long double>(k) + nu);
        sum += term;
        abs_sum += std::abs(term);
        last = std::abs(term);
        if (k > 0 && last <= prev && last <= eps * abs_sum) {
            converged = true;
            break;
        }
        if (last != 0.0L) {
            prev = last;
        }
        power *= zl;
    }

    MLResult out;
    out.value = static_cast<double>(sum);
    out.branch = MLBranch::Series;
    const double rounding = static_cast<double>(8.0L * eps * abs_sum);
    out.error = converged ? rounding
                          : rounding + static_cast<double>(last) * policy.series_terms_max;
    if (!converged && last == 0.0L) {
        out.error = std::numeric_limits<double>::infinity();
    }
    return out;
}

MLResult ml_asymptotic(double alpha, double nu, double z, const MLEvalPolicy& policy) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    MLResult out;
    out.branch = MLBranch::Asymptotic;
    if (z == 0.0) {
        out.value = rgamma(nu);
        return out;
    }

    const double x = -z;
    const double poles = pole_terms(alpha, nu, x);
    if (std::isnan(poles)) {
        out.value = std::numeric_limits<double>::quiet_NaN();
        out.error = std::numeric_limits<double>::infinity();
        return out;
    }

    // Algebraic part -Σ z^{-k}/Γ(ν-αk); stop at the smallest term.
    double sum = 0.0;
    double abs_sum = 0.0;
    double inv_power = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    double next = 0.0;
    bool growing = false;
    for (std::size_t k = 1; k <= policy.asymptotic_terms + 1; ++k) {
        inv_power /= z;
        const double term = -inv_power * rgamma(nu - alpha * static_cast<double>(k));
        if (k == policy.asymptotic_terms + 1) {
            next = std::abs(term);
            break;
        }
        if (term != 0.0 && std::abs(term) > prev) {
            // Divergent tail: the current term bounds the truncation error.
            next = std::abs(term);
            growing = true;
            break;
        }
        sum += term;
        abs_sum += std::abs(term);
        if (term != 0.0) {
            prev = std::abs(term);
        }
    }
    (void)growing;

    // Remainder constant of the Watson expansion; the denominator
    // |s^α + x| stays above x·|sin πα| when cos πα < 0.
    double remainder_factor = 1.0;
    if (!is_integer(alpha) && cos_pi(alpha) < 0.0) {
        remainder_factor += 1.0 / std::abs(sin_pi(alpha));
    }

    out.value = poles + sum;
    out.error = remainder_factor * next + 8.0 * eps * (std::abs(poles) + abs_sum);
    return out;
}

MLResult ml_integral(double alpha, double nu, double z, const MLEvalPolicy& policy) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    MLResult out;
    out.branch = MLBranch::Integral;
    if (z == 0.0) {
        out.value = rgamma(nu);
        return out;
    }
    if (alpha == 1.0 || alpha > 2.0 || alpha <= 0.0) {
        // Poles sit on the branch cut; the representation degenerates.
        out.value = std::numeric_limits<double>::quiet_NaN();
        out.error = std::numeric_limits<double>::infinity();
        return out;
    }

    // The Hankel integrand carries r^{α-ν}; shift ν down with
    // E_{α,ν}(z) = (E_{α,ν-α}(z) - 1/Γ(ν-α)) / z until it is mildly singular.
    if (nu > alpha + 0.5) {
        const MLResult lower = ml_integral(alpha, nu - alpha, z, policy);
        out.value = (lower.value - rgamma(nu - alpha)) / z;
        out.error = (lower.error + eps * std::abs(rgamma(nu - alpha))) / std::abs(z);
        return out;
    }

    const double x = -z;
    const double poles = pole_terms(alpha, nu, x);
    const double s_nu = sin_pi(nu);
    const double s_alpha_nu = sin_pi(alpha - nu);
    const double c_alpha = cos_pi(alpha);

    auto integrand = [=](double r) -> double {
        if (!(r > 0.0)) {
            return 0.0;
        }
        const double ra = std::pow(r, alpha);
        const double num = ra * s_nu - x * s_alpha_nu;
        const double den = ra * ra + 2.0 * x * ra * c_alpha + x * x;
        return std::exp(-r) * std::pow(r, alpha - nu) * num / den;
    };

    thread_local boost::math::quadrature::exp_sinh<double> integrator;
    double q_err = 0.0;
    double l1 = 0.0;
    const double tol = std::max(policy.target_rel_tol * 1e-3, 1e-15);
    const double hankel = integrator.integrate(integrand, tol, &q_err, &l1) / std::numbers::pi;

    out.value = poles + hankel;
    out.error = q_err / std::numbers::pi + 8.0 * eps * (std::abs(poles) + l1 / std::numbers::pi);
    return out;
}

MLResult mittag_leffler_detailed(double alpha, double nu, double z, const MLEvalPolicy& policy) {
    policy.validate();
    if (!(alpha > 0.0 && alpha <= 2.0)) {
        throw ValidationError("Mittag-Leffler: order α must lie in (0, 2]");
    }
    if (!std::isfinite(nu)) {
        throw ValidationError("Mittag-Leffler: ν must be finite");
    }
    if (!(z <= 0.0)) {
        throw ValidationError("Mittag-Leffler: only z <= 0 is supported");
    }
    if (z == 0.0) {
        return MLResult{rgamma(nu), 0.0, MLBranch::ClosedForm};
    }

    const double tol = policy.target_rel_tol;
    auto accepted = [&](const MLResult& r) {
        return std::isfinite(r.value) && r.error <= tol * ml_accuracy_scale(r.value, z);
    };

    // α = 1 with integer ν: the pole expansion terminates and is exact, and
    // avoids the cancellation of the alternating series.
    if (alpha == 1.0 && is_integer(nu) && std::abs(z) > 1.0) {
        MLResult closed = ml_asymptotic(alpha, nu, z, policy);
        if (accepted(closed)) {
            closed.branch = MLBranch::ClosedForm;
            return closed;
        }
    }
    MLResult primary = std::abs(z) <= policy.crossover_magnitude
                           ? ml_series(alpha, nu, z, policy)
                           : ml_asymptotic(alpha, nu, z, policy);
    if (accepted(primary)) {
        return primary;
    }
    MLResult fallback = ml_integral(alpha, nu, z, policy);
    if (accepted(fallback)) {
        return fallback;
    }

    const MLResult& best =
        (std::isfinite(fallback.value) && fallback.error < primary.error) ? fallback : primary;
    const double achieved = best.error / ml_accuracy_scale(best.value, z);
    throw AccuracyError("Mittag-Leffler: E_{" + std::to_string(alpha) + "," +
                            std::to_string(nu) + "}(" + std::to_string(z) +
                            ") cannot reach relative tolerance " + std::to_string(tol) +
                            "; achieved " + std::to_string(achieved),
                        achieved);
}

double mittag_leffler(double alpha, double nu, double z, const MLEvalPolicy& policy) {
    return mittag_leffler_detailed(alpha, nu, z, policy).value;
}

}  // namespace sfor
