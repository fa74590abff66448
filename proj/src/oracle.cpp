#include "sfor/oracle.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/cos_pi.hpp>
#include <boost/math/special_functions/sin_pi.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sfor/error.hpp"

namespace sfor {
namespace {

void check_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw ValidationError("oracle: time must be finite and nonnegative");
    }
}

void check_alpha(double alpha) {
    if (!(alpha > 1.0 && alpha < 2.0)) {
        throw ValidationError("oracle: order α must lie in (1, 2)");
    }
}

std::vector<double> source_coeffs(const SpectralData& sd, double alpha) {
    const double g = std::tgamma(2.0 - alpha);
    std::vector<double> s(sd.n_modes);
    for (std::size_t i = 0; i < sd.n_modes; ++i) {
        s[i] = sd.coeffs_a1[i] + g * sd.coeffs_f[i];
    }
    return s;
}

double quadrature_coefficient(const DataDescriptor& data, double L, std::size_t n) {
    const double k = static_cast<double>(n) * std::numbers::pi / L;
    auto integrand = [&](double x) { return data(x, L) * std::sin(k * x); };
    // Split at the data kinks and at every half period of the sine.
    std::vector<double> cuts{0.0, L};
    for (double b : data.kinks(L)) {
        cuts.push_back(b);
    }
    for (std::size_t j = 1; j < n; ++j) {
        cuts.push_back(L * static_cast<double>(j) / static_cast<double>(n));
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    double total = 0.0;
    double err = 0.0;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        double e = 0.0;
        total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            integrand, cuts[c], cuts[c + 1], 10, 1e-13, &e);
        // boost reports the estimate in the reference variable on [-1, 1];
        // the half-width bounds the scale of every refined subcell.
        err += e * 0.5 * (cuts[c + 1] - cuts[c]);
    }
    if (err > 1e-12) {
        throw AccuracyError("sine coefficient " + std::to_string(n) +
                                ": quadrature error estimate " + std::to_string(err) +
                                " exceeds 1e-12",
                            err);
    }
    return total;
}

}  // namespace

std::vector<double> sine_coefficients(const DataDescriptor& data, double L, std::size_t n_modes) {
    if (!(L > 0.0) || !std::isfinite(L)) {
        throw ValidationError("sine coefficients: L must be positive");
    }
    const double norm = std::sqrt(2.0 / L);
    std::vector<double> c(n_modes, 0.0);
    for (std::size_t i = 0; i < n_modes; ++i) {
        const std::size_t n = i + 1;
        const double w = L / (static_cast<double>(n) * std::numbers::pi);
        const double half = 0.5 * static_cast<double>(n);  // nπ/2 in units of π
        switch (data.kind) {
            case DataDescriptor::Kind::Zero:
                break;
            case DataDescriptor::Kind::Hat:
                c[i] = norm * 2.0 * w * w * boost::math::sin_pi(half);
                break;
            case DataDescriptor::Kind::IndicatorLeftHalf:
                c[i] = norm * w * (1.0 - boost::math::cos_pi(half));
                break;
            case DataDescriptor::Kind::Sine:
                if (static_cast<int>(n) == data.mode) {
                    c[i] = data.amplitude * std::sqrt(0.5 * L);
                }
                break;
            case DataDescriptor::Kind::Closure:
                c[i] = norm * quadrature_coefficient(data, L, n);
                break;
        }
    }
    return c;
}

SpectralData build_spectral_data(const DataDescriptor& a0, const DataDescriptor& a1,
                                 const DataDescriptor& f, double L, std::size_t n_modes) {
    if (n_modes == 0) {
        throw ValidationError("spectral data: at least one mode is required");
    }
    SpectralData sd;
    sd.L = L;
    sd.n_modes = n_modes;
    sd.coeffs_a0 = sine_coefficients(a0, L, n_modes);
    sd.coeffs_a1 = sine_coefficients(a1, L, n_modes);
    sd.coeffs_f = sine_coefficients(f, L, n_modes);
    sd.lambdas.resize(n_modes);
    for (std::size_t i = 0; i < n_modes; ++i) {
        const double k = static_cast<double>(i + 1) * std::numbers::pi / L;
        sd.lambdas[i] = k * k;
    }
    return sd;
}

std::vector<double> modal_u(const SpectralData& sd, double alpha, double t,
                            const MLEvalPolicy& policy) {
    check_alpha(alpha);
    check_time(t);
    if (t == 0.0) {
        return sd.coeffs_a0;
    }
    const std::vector<double> s = source_coeffs(sd, alpha);
    const double ta = std::pow(t, alpha);
    std::vector<double> out(sd.n_modes);
    for (std::size_t i = 0; i < sd.n_modes; ++i) {
        const double z = -sd.lambdas[i] * ta;
        double v = 0.0;
        if (sd.coeffs_a0[i] != 0.0) {
            v += mittag_leffler(alpha, 1.0, z, policy) * sd.coeffs_a0[i];
        }
        if (s[i] != 0.0) {
            v += t * mittag_leffler(alpha, 2.0, z, policy) * s[i];
        }
        out[i] = v;
    }
    return out;
}

std::vector<double> modal_v(const SpectralData& sd, double alpha, double t,
                            const MLEvalPolicy& policy) {
    check_alpha(alpha);
    check_time(t);
    std::vector<double> out(sd.n_modes, 0.0);
    if (t == 0.0) {
        return out;
    }
    const double beta = 0.5 * alpha;
    const std::vector<double> s = source_coeffs(sd, alpha);
    const double ta = std::pow(t, alpha);
    const double t_ab = std::pow(t, alpha - beta);
    const double t_1b = std::pow(t, 1.0 - beta);
    for (std::size_t i = 0; i < sd.n_modes; ++i) {
        const double lam = sd.lambdas[i];
        const double z = -lam * ta;
        double v = 0.0;
        if (sd.coeffs_a0[i] != 0.0) {
            v -= lam * t_ab * mittag_leffler(alpha, alpha + 1.0 - beta, z, policy) *
                 sd.coeffs_a0[i];
        }
        if (s[i] != 0.0) {
            v += t_1b * mittag_leffler(alpha, 2.0 - beta, z, policy) * s[i];
        }
        out[i] = v;
    }
    return out;
}

std::vector<double> modal_z(const SpectralData& sd, double alpha, double t,
                            const MLEvalPolicy& policy) {
    check_alpha(alpha);
    check_time(t);
    std::vector<double> out(sd.n_modes, 0.0);
    if (t == 0.0) {
        return out;
    }
    const double beta = 0.5 * alpha;
    const std::vector<double> s = source_coeffs(sd, alpha);
    const double ta = std::pow(t, alpha);
    const double tb = std::pow(t, beta);
    const double t1b = std::pow(t, 1.0 + beta);
    for (std::size_t i = 0; i < sd.n_modes; ++i) {
        const double lam = sd.lambdas[i];
        const double z = -lam * ta;
        double v = 0.0;
        if (sd.coeffs_a0[i] != 0.0) {
            v -= lam * tb * mittag_leffler(alpha, 1.0 + beta, z, policy) * sd.coeffs_a0[i];
        }
        if (s[i] != 0.0) {
            v -= lam * t1b * mittag_leffler(alpha, 2.0 + beta, z, policy) * s[i];
        }
        out[i] = v;
    }
    return out;
}

SeriesValues synthesize(const SpectralData& sd, std::span<const double> modal,
                        std::span<const double> xs) {
    if (modal.size() != sd.n_modes) {
        throw ValidationError("oracle: modal vector length does not match n_modes");
    }
    const double norm = std::sqrt(2.0 / sd.L);
    SeriesValues out;
    out.values.assign(xs.size(), 0.0);
    for (std::size_t j = 0; j < xs.size(); ++j) {
        const double x = xs[j];
        double acc = 0.0;
        for (std::size_t i = 0; i < sd.n_modes; ++i) {
            if (modal[i] != 0.0) {
                acc += modal[i] * std::sin(static_cast<double>(i + 1) * std::numbers::pi * x / sd.L);
            }
        }
        out.values[j] = norm * acc;
    }
    // Treat the last tenth of the modes as representative of an n^{-2} tail:
    // Σ_{n>N} C n^{-2} ≈ C / N.
    const std::size_t start = sd.n_modes - std::max<std::size_t>(1, sd.n_modes / 10);
    double c_max = 0.0;
    for (std::size_t i = start; i < sd.n_modes; ++i) {
        const double n = static_cast<double>(i + 1);
        c_max = std::max(c_max, std::abs(modal[i]) * n * n);
    }
    out.tail_estimate = norm * c_max / static_cast<double>(sd.n_modes);
    return out;
}

SeriesValues eval_u(const SpectralData& sd, double alpha, std::span<const double> xs, double t,
                    const MLEvalPolicy& policy) {
    return synthesize(sd, modal_u(sd, alpha, t, policy), xs);
}

SeriesValues eval_v(const SpectralData& sd, double alpha, std::span<const double> xs, double t,
                    const MLEvalPolicy& policy) {
    return synthesize(sd, modal_v(sd, alpha, t, policy), xs);
}

SeriesValues eval_z(const SpectralData& sd, double alpha, std::span<const double> xs, double t,
                    const MLEvalPolicy& policy) {
    return synthesize(sd, modal_z(sd, alpha, t, policy), xs);
}

double modal_l2_norm(std::span<const double> modal) {
    double acc = 0.0;
    for (double c : modal) {
        acc += c * c;
    }
    return std::sqrt(acc);
}

}  // namespace sfor
