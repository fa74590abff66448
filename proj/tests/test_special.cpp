#include <doctest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>

#include <cmath>
#include <numbers>

#include "sfor/error.hpp"
#include "sfor/special.hpp"

using namespace sfor;

namespace {

// Σ_k z^k / Γ(αk + ν) in 150-digit arithmetic.
double ml_reference(double alpha, double nu, double z) {
    using big = boost::multiprecision::number<boost::multiprecision::cpp_dec_float<150>>;
    big sum = 0;
    big zk = 1;
    const big bz(z);
    for (int k = 0; k < 2000; ++k) {
        const big term = zk / boost::math::tgamma(big(alpha) * k + big(nu));
        sum += term;
        if (k > 10 && abs(term) < big("1e-60")) {
            break;
        }
        zk *= bz;
    }
    return static_cast<double>(sum);
}

}  // namespace

TEST_SUITE("special") {

TEST_CASE("gamma values") {
    CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-15));
    CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-15));
    for (double x : {0.125, 0.375, 1.25, 2.5, 7.75, -0.5, -2.5}) {
        CHECK(gamma_fn(x) == doctest::Approx(boost::math::tgamma(x)).epsilon(1e-14));
    }
    CHECK_THROWS_AS(gamma_fn(0.0), DomainError);
    CHECK_THROWS_AS(gamma_fn(-3.0), DomainError);
    CHECK(rgamma(0.0) == 0.0);
    CHECK(rgamma(-2.0) == 0.0);
    CHECK(rgamma(200.0) == doctest::Approx(std::exp(-boost::math::lgamma(200.0))).epsilon(1e-12));
}

TEST_CASE("omega kernel") {
    CHECK(omega(1.0, 3.7) == doctest::Approx(1.0));
    CHECK(omega(2.0, 3.7) == doctest::Approx(3.7));
    CHECK(omega(0.5, 4.0) == doctest::Approx(0.5 / std::sqrt(std::numbers::pi)));
    CHECK_THROWS_AS(omega(0.0, 1.0), ValidationError);
    CHECK_THROWS_AS(omega(0.5, 0.0), ValidationError);
}

TEST_CASE("Mittag-Leffler closed forms") {
    for (double x : {0.0, 0.3, 1.0, 4.0, 9.5, 15.0, 40.0, 200.0}) {
        CAPTURE(x);
        CHECK(mittag_leffler(1.0, 1.0, -x) == doctest::Approx(std::exp(-x)).epsilon(1e-12));
        const double c = std::cos(x);
        CHECK(std::abs(mittag_leffler(2.0, 1.0, -x * x) - c) <= 1e-11 * std::max(std::abs(c), 1e-2));
    }
    CHECK(mittag_leffler(1.0, 2.0, -2.0) == doctest::Approx(-std::expm1(-2.0) / 2.0).epsilon(1e-13));
    CHECK(mittag_leffler(1.5, 2.5, 0.0) == doctest::Approx(1.0 / std::tgamma(2.5)));
    CHECK(mittag_leffler_detailed(1.5, 1.0, 0.0).branch == MLBranch::ClosedForm);
}

TEST_CASE("E_{0.75,1}(-50) against a 150-digit partial sum") {
    const double ref = ml_reference(0.75, 1.0, -50.0);
    const double got = mittag_leffler(0.75, 1.0, -50.0);
    CHECK(std::abs(got - ref) <= 1e-12 * std::abs(ref));
}

TEST_CASE("agreement with extended precision across branches") {
    for (double alpha : {1.25, 1.5, 1.75}) {
        for (double nu : {1.0, 2.0, alpha + 1.0 - alpha / 2, 2.0 - alpha / 2, 1.0 + alpha / 2}) {
            for (double x : {0.5, 5.0, 12.0, 30.0, 80.0}) {
                CAPTURE(alpha);
                CAPTURE(nu);
                CAPTURE(x);
                const double ref = ml_reference(alpha, nu, -x);
                const double got = mittag_leffler(alpha, nu, -x);
                CHECK(std::abs(got - ref) <= 1e-11 * ml_accuracy_scale(ref, -x));
            }
        }
    }
}

TEST_CASE("shift recurrence E_{α,ν}(z) = 1/Γ(ν) + z E_{α,α+ν}(z)") {
    for (double alpha : {1.25, 1.5, 1.75}) {
        for (double x : {0.7, 9.0, 11.0, 60.0, 400.0, 5000.0}) {
            const double nu = 2.0 - alpha / 2;
            const double lhs = mittag_leffler(alpha, nu, -x);
            const double rhs = rgamma(nu) - x * mittag_leffler(alpha, alpha + nu, -x);
            CAPTURE(alpha);
            CAPTURE(x);
            CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
        }
    }
}

TEST_CASE("derivative identity α z E' = E_{α,ν-1} - (ν-1) E_{α,ν}") {
    for (double alpha : {1.25, 1.5, 1.75}) {
        for (double x : {0.8, 6.0, 25.0, 150.0}) {
            const double nu = 2.0;
            const double z = -x;
            const double h = 1e-4 * std::max(1.0, x);
            const double d = (mittag_leffler(alpha, nu, z + h) - mittag_leffler(alpha, nu, z - h)) /
                             (2.0 * h);
            const double rhs = mittag_leffler(alpha, nu - 1.0, z) -
                               (nu - 1.0) * mittag_leffler(alpha, nu, z);
            CAPTURE(alpha);
            CAPTURE(x);
            CHECK(alpha * z * d == doctest::Approx(rhs).epsilon(1e-6).scale(1.0));
        }
    }
}

TEST_CASE("decay bound |E_{α,ν}(-x)| <= C/(1+x)") {
    for (double alpha : {1.25, 1.5, 1.75}) {
        for (double nu : {1.0, 2.0 - alpha / 2, 1.0 + alpha / 2}) {
            double worst = 0.0;
            for (double x = 0.0; x < 1e5; x = x * 1.1 + 0.05) {
                worst = std::max(worst, std::abs(mittag_leffler(alpha, nu, -x)) * (1.0 + x));
            }
            CAPTURE(alpha);
            CAPTURE(nu);
            CHECK(worst < 10.0);
        }
    }
}

TEST_CASE("branches agree where they overlap") {
    const MLEvalPolicy policy;
    for (double alpha : {1.25, 1.5, 1.75}) {
        for (double nu : {1.0, 2.0, 1.0 + alpha / 2}) {
            for (double x = 8.0; x <= 12.0; x += 0.5) {
                const MLResult s = ml_series(alpha, nu, -x, policy);
                const MLResult q = ml_integral(alpha, nu, -x, policy);
                CHECK(std::abs(s.value - q.value) <= 1e-12 * ml_accuracy_scale(q.value, -x));
            }
            for (double x : {600.0, 1000.0, 3000.0}) {
                const MLResult a = ml_asymptotic(alpha, nu, -x, policy);
                const MLResult q = ml_integral(alpha, nu, -x, policy);
                CHECK(std::abs(a.value - q.value) <= 1e-12 * ml_accuracy_scale(q.value, -x));
            }
        }
    }
}

TEST_CASE("argument validation") {
    CHECK_THROWS_AS(mittag_leffler(1.5, 1.0, 0.5), ValidationError);
    CHECK_THROWS_AS(mittag_leffler(2.5, 1.0, -1.0), ValidationError);
    MLEvalPolicy bad;
    bad.target_rel_tol = 0.1;
    CHECK_THROWS_AS(mittag_leffler(1.5, 1.0, -1.0, bad), ValidationError);
}

}
