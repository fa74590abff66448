#include "sfor/fracops.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "sfor/error.hpp"
#include "sfor/special.hpp"

namespace sfor {
namespace {

void validate_level(const GradedMesh& mesh, double beta, std::size_t n) {
    if (!(beta > 0.0 && beta < 1.0)) {
        throw ValidationError("kernel: order β must lie in (0, 1)");
    }
    if (n == 0 || n > mesh.intervals()) {
        throw ValidationError("kernel: level " + std::to_string(n) + " outside [1, " +
                              std::to_string(mesh.intervals()) + "]");
    }
}

// (far + len)^p - far^p for p = 1 - β, without cancellation when len << far.
double power_increment(double far, double len, double p) {
    if (far <= 0.0) {
        return std::pow(len, p);
    }
    return std::pow(far, p) * std::expm1(p * std::log1p(len / far));
}

// ∫_{-h}^{h} y (m - y)^{-β} dy, m > h >= 0: first moment of the kernel about
// the midpoint of a cell whose far edge lies m - h from the evaluation point.
double centred_moment(double m, double h, double beta) {
    const double q = h / m;
    if (q <= 0.5) {
        // (1 - u)^{-β} = Σ_j (β)_j u^j / j!; only odd j survive the symmetric integral.
        double coef = beta;  // (β)_1 / 1!
        double qpow = q;     // q^j
        double sum = 0.0;
        for (int j = 1; j < 200; j += 2) {
            const double term = coef * qpow * 2.0 / (j + 2);
            sum += term;
            if (std::abs(term) <= 1e-17 * std::abs(sum)) {
                break;
            }
            // advance coefficient by two orders: (β)_{j+2}/(j+2)! from (β)_j/j!
            coef *= (beta + j) * (beta + j + 1) / ((j + 1.0) * (j + 2.0));
            qpow *= q * q;
        }
        return std::pow(m, -beta) * h * h * sum;
    }
    // ∫_{m-h}^{m+h} (m - w) w^{-β} dw
    const double p2 = 1.0 - beta;
    const double p3 = 2.0 - beta;
    const double lo = m - h;
    const double hi = m + h;
    const double g2 = (std::pow(hi, p2) - std::pow(lo, p2)) / p2;
    const double g3 = (std::pow(hi, p3) - std::pow(lo, p3)) / p3;
    return m * g2 - g3;
}

// Relative slack for comparisons against quadrature values; L1 meets the
// lower bound with equality.
constexpr double kQuadratureSlack = 1e-9;

}  // namespace

double formula_theta(Formula formula, double beta) {
    return formula == Formula::L1 ? 0.0 : beta / 2.0;
}

double formula_pi_a(Formula formula) { return formula == Formula::L1 ? 1.0 : 11.0 / 4.0; }

double KernelRow::apply(std::span<const double> increments) const {
    if (increments.size() != n) {
        throw ValidationError("kernel row: increment count does not match level");
    }
    double acc = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        acc += coeffs[n - k] * increments[k - 1];
    }
    return acc;
}

KernelRow l1_kernel_row(const GradedMesh& mesh, double beta, std::size_t n) {
    validate_level(mesh, beta, n);
    const double p = 1.0 - beta;
    const double scale = 1.0 / std::tgamma(2.0 - beta);
    const double tn = mesh.point(n);

    KernelRow row;
    row.n = n;
    row.beta = beta;
    row.theta = 0.0;
    row.coeffs.resize(n);
    for (std::size_t k = 1; k <= n; ++k) {
        const double tau = mesh.step(k);
        const double far = tn - mesh.point(k);
        row.coeffs[n - k] = power_increment(far, tau, p) * scale / tau;
    }
    return row;
}

AlikhanovParts alikhanov_parts(const GradedMesh& mesh, double beta, std::size_t n) {
    validate_level(mesh, beta, n);
    const double theta = beta / 2.0;
    const double p = 1.0 - beta;
    const double g2 = 1.0 / std::tgamma(2.0 - beta);
    const double g1 = 1.0 / std::tgamma(1.0 - beta);
    const double t_off = mesh.offset_time(n, theta);

    AlikhanovParts parts;
    parts.a.assign(n, 0.0);
    parts.b.assign(n, 0.0);

    const double tau_n = mesh.step(n);
    parts.a[0] = std::pow((1.0 - theta) * tau_n, p) * g2 / tau_n;
    for (std::size_t k = 1; k + 1 <= n; ++k) {
        const double tau = mesh.step(k);
        const double far = t_off - mesh.point(k);
        parts.a[n - k] = power_increment(far, tau, p) * g2 / tau;

        const double h = 0.5 * tau;
        const double moment = centred_moment(far + h, h, beta) * g1;
        parts.b[n - k] = 2.0 * moment / (tau * (tau + mesh.step(k + 1)));
    }
    return parts;
}

KernelRow alikhanov_kernel_row(const GradedMesh& mesh, double beta, std::size_t n) {
    const AlikhanovParts parts = alikhanov_parts(mesh, beta, n);
    const auto& a = parts.a;
    const auto& b = parts.b;

    KernelRow row;
    row.n = n;
    row.beta = beta;
    row.theta = beta / 2.0;
    row.coeffs.resize(n);
    row.certified = mesh.max_ratio() <= kAlikhanovMaxRatio;
    if (n == 1) {
        row.coeffs[0] = a[0];
        return row;
    }
    // k = n
    row.coeffs[0] = a[0] + mesh.ratio(n - 1) * b[1];
    // 2 <= k <= n-1
    for (std::size_t k = 2; k + 1 <= n; ++k) {
        row.coeffs[n - k] = a[n - k] + mesh.ratio(k - 1) * b[n - k + 1] - b[n - k];
    }
    // k = 1
    row.coeffs[n - 1] = a[n - 1] - b[n - 1];
    return row;
}

KernelRow kernel_row(Formula formula, const GradedMesh& mesh, double beta, std::size_t n) {
    return formula == Formula::L1 ? l1_kernel_row(mesh, beta, n)
                                  : alikhanov_kernel_row(mesh, beta, n);
}

std::vector<KernelRow> kernel_rows(Formula formula, const GradedMesh& mesh, double beta) {
    std::vector<KernelRow> rows;
    rows.reserve(mesh.intervals());
    for (std::size_t n = 1; n <= mesh.intervals(); ++n) {
        rows.push_back(kernel_row(formula, mesh, beta, n));
    }
    return rows;
}

ComplementaryKernels complementary_kernels(std::span<const KernelRow> rows) {
    const std::size_t n = rows.size();
    if (n == 0) {
        throw ValidationError("complementary kernels: at least one kernel row is required");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].n != i + 1 || rows[i].coeffs.size() != i + 1) {
            throw ValidationError("complementary kernels: rows must cover levels 1..n in order");
        }
        if (!(rows[i].coeffs[0] > 0.0)) {
            throw NumericalError("complementary kernels: A_0 at level " + std::to_string(i + 1) +
                                 " is not positive");
        }
    }
    // A(k, j) = A^{(k)}_j
    auto A = [&](std::size_t level, std::size_t j) { return rows[level - 1].coeffs[j]; };

    ComplementaryKernels out;
    out.n = n;
    out.values.assign(n, 0.0);
    out.values[0] = 1.0 / A(n, 0);
    for (std::size_t j = n - 1; j >= 1; --j) {
        double acc = 0.0;
        for (std::size_t k = j + 1; k <= n; ++k) {
            acc += (A(k, k - j - 1) - A(k, k - j)) * out.values[n - k];
        }
        out.values[n - j] = acc / A(j, 0);
    }
    return out;
}

bool KernelReport::passed(double identity_tol) const {
    const bool monotone_ok = monotone || !certified;
    return positive && monotone_ok && lower_bound_standard && identity_max_error <= identity_tol;
}

std::string KernelReport::summary() const {
    auto flag = [](bool ok) { return ok ? "PASS" : "FAIL"; };
    std::ostringstream os;
    char buf[160];
    os << "formula: " << (formula == Formula::L1 ? "L1" : "ALIKHANOV") << "  beta: " << beta
       << "  max step ratio: " << max_ratio << (certified ? "" : "  (exceeds 7/4, uncertified)")
       << '\n';
    os << "A1 positivity            " << flag(positive) << '\n';
    os << "A1 monotonicity          " << (certified ? flag(monotone) : (monotone ? "PASS" : "WARN"))
       << '\n';
    std::snprintf(buf, sizeof buf, "A2 lower bound           %s  (min A / bound = %.6g)\n",
                  flag(lower_bound_standard), lower_bound_standard_min_ratio);
    os << buf;
    std::snprintf(buf, sizeof buf,
                  "A2 with 1/s weight       %s  (%zu violations; diverges at k = 1)\n",
                  lower_bound_weighted ? "PASS" : "INFO", lower_bound_weighted_failures);
    os << buf;
    std::snprintf(buf, sizeof buf, "complementary identity   %s  (max error %.3e)\n",
                  flag(identity_max_error <= 1e-12), identity_max_error);
    os << buf;
    std::snprintf(buf, sizeof buf,
                  "complementary bounds     min P = %.3e, max P/bound = %.4f, max weighted sum = %.4f\n",
                  complementary_min, complementary_bound_ratio, complementary_weighted_sum_max);
    os << buf;
    os << "overall                  " << flag(passed()) << '\n';
    return os.str();
}

KernelReport check_kernel_properties(Formula formula, const GradedMesh& mesh, double beta) {
    const std::size_t N = mesh.intervals();
    const auto rows = kernel_rows(formula, mesh, beta);
    const double pi_a = formula_pi_a(formula);
    const double g1 = 1.0 / std::tgamma(1.0 - beta);

    KernelReport rep;
    rep.formula = formula;
    rep.beta = beta;
    rep.max_ratio = mesh.max_ratio();
    rep.certified = formula == Formula::L1 || mesh.max_ratio() <= kAlikhanovMaxRatio;
    rep.lower_bound_standard_min_ratio = std::numeric_limits<double>::infinity();
    rep.complementary_min = std::numeric_limits<double>::infinity();

    boost::math::quadrature::tanh_sinh<double> quad;

    for (const KernelRow& row : rows) {
        const std::size_t n = row.n;
        const double tn = mesh.point(n);
        for (std::size_t j = 0; j < n; ++j) {
            if (!(row.coeffs[j] > 0.0)) {
                rep.positive = false;
            }
            if (j > 0 && row.coeffs[j] > row.coeffs[j - 1]) {
                rep.monotone = false;
            }
        }
        for (std::size_t k = 1; k <= n; ++k) {
            const double lo = mesh.point(k - 1);
            const double hi = mesh.point(k);
            const double tau = mesh.step(k);
            // Integrate in the distance d = t_n - s to keep the singularity at an endpoint.
            auto kernel = [&](double d) { return g1 * std::pow(d, -beta); };
            const double dlo = tn - hi;
            const double dhi = tn - lo;
            const double q_std = quad.integrate(kernel, dlo, dhi);
            const double bound = q_std / (pi_a * tau);
            const double ratio = row.at_level(k) / bound;
            rep.lower_bound_standard_min_ratio = std::min(rep.lower_bound_standard_min_ratio, ratio);
            if (row.at_level(k) < bound * (1.0 - kQuadratureSlack)) {
                rep.lower_bound_standard = false;
            }
            if (k == 1) {
                rep.lower_bound_weighted = false;
                ++rep.lower_bound_weighted_failures;
                continue;
            }
            auto weighted = [&](double d) { return kernel(d) / (tn - d); };
            const double q_pr = quad.integrate(weighted, dlo, dhi);
            if (row.at_level(k) < q_pr / (pi_a * tau) * (1.0 - kQuadratureSlack)) {
                rep.lower_bound_weighted = false;
                ++rep.lower_bound_weighted_failures;
            }
        }
    }

    const double gamma2 = std::tgamma(2.0 - beta);
    for (std::size_t n = 1; n <= N; ++n) {
        const auto P = complementary_kernels(std::span<const KernelRow>(rows.data(), n));
        double weighted_sum = 0.0;
        for (std::size_t j = 1; j <= n; ++j) {
            const double pj = P.at_level(j);
            rep.complementary_min = std::min(rep.complementary_min, pj);
            const double cap = pi_a * gamma2 * std::pow(mesh.step(j), beta);
            rep.complementary_bound_ratio = std::max(rep.complementary_bound_ratio, pj / cap);
            weighted_sum += pj * omega(1.0 - beta, mesh.point(j));
        }
        rep.complementary_weighted_sum_max =
            std::max(rep.complementary_weighted_sum_max, weighted_sum);
        for (std::size_t k = 1; k <= n; ++k) {
            double acc = 0.0;
            for (std::size_t j = k; j <= n; ++j) {
                acc += P.at_level(j) * rows[j - 1].at_level(k);
            }
            rep.identity_max_error = std::max(rep.identity_max_error, std::abs(acc - 1.0));
        }
    }
    return rep;
}

}  // namespace sfor
