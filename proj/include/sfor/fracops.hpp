#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sfor/mesh.hpp"

namespace sfor {

/// Discretization of the Caputo derivative of order β ∈ (0, 1).
enum class Formula {
    L1,         // piecewise-linear interpolation, evaluated at t_n (θ = 0)
    Alikhanov,  // L2-1σ, evaluated at t_{n-θ} with θ = β/2
};

/// Offset θ used by a formula: 0 for L1, β/2 for Alikhanov.
double formula_theta(Formula formula, double beta);

/// Constant π_A in the kernel lower bound: 1 for L1, 11/4 for Alikhanov.
double formula_pi_a(Formula formula);

/// Largest step ratio for which Alikhanov kernels are known to be monotone.
inline constexpr double kAlikhanovMaxRatio = 7.0 / 4.0;

/// Discrete convolution coefficients of one time level n:
///   (D^β v)^{n-θ} = Σ_{k=1}^{n} A^{(n)}_{n-k} (v^k - v^{k-1}).
struct KernelRow {
    std::size_t n = 0;
    double beta = 0.0;
    double theta = 0.0;
    /// coeffs[j] = A^{(n)}_j, j = 0..n-1 (j = n - k).
    std::vector<double> coeffs;
    /// False for Alikhanov rows on meshes whose max step ratio exceeds 7/4.
    bool certified = true;

    /// A^{(n)}_{n-k} for 1 <= k <= n.
    double at_level(std::size_t k) const { return coeffs[n - k]; }

    /// Σ_k A^{(n)}_{n-k} increments[k-1]; increments[k-1] = v^k - v^{k-1}.
    double apply(std::span<const double> increments) const;
};

KernelRow l1_kernel_row(const GradedMesh& mesh, double beta, std::size_t n);
KernelRow alikhanov_kernel_row(const GradedMesh& mesh, double beta, std::size_t n);
KernelRow kernel_row(Formula formula, const GradedMesh& mesh, double beta, std::size_t n);

/// Auxiliary Alikhanov coefficients a^{(n)}_{n-k} and b^{(n)}_{n-k}.
/// a[j] = a^{(n)}_j for j = 0..n-1; b[j] = b^{(n)}_j for j = 1..n-1 (b[0] unused).
struct AlikhanovParts {
    std::vector<double> a;
    std::vector<double> b;
};
AlikhanovParts alikhanov_parts(const GradedMesh& mesh, double beta, std::size_t n);

/// Complementary kernels P^{(n)}_{n-j}, j = 1..n, built from rows of levels 1..n.
struct ComplementaryKernels {
    std::size_t n = 0;
    /// values[j] = P^{(n)}_j, j = 0..n-1.
    std::vector<double> values;

    double at_level(std::size_t j) const { return values[n - j]; }
};

/// rows[i] must be the kernel row of level i+1.
ComplementaryKernels complementary_kernels(std::span<const KernelRow> rows);

std::vector<KernelRow> kernel_rows(Formula formula, const GradedMesh& mesh, double beta);

/// Outcome of the structural checks on the kernels of one mesh.
struct KernelReport {
    Formula formula = Formula::L1;
    double beta = 0.0;
    double max_ratio = 0.0;
    bool certified = true;

    bool positive = true;
    bool monotone = true;
    /// Lower bound with integrand ω_{1-β}(t_n - s).
    bool lower_bound_standard = true;
    double lower_bound_standard_min_ratio = 0.0;
    /// Lower bound with the extra weight: integrand ω_{1-β}(t_n - s)/s;
    /// it diverges for k = 1 and is reported for information only.
    bool lower_bound_weighted = true;
    std::size_t lower_bound_weighted_failures = 0;
    /// max |Σ_{j=k}^n P^{(n)}_{n-j} A^{(j)}_{j-k} - 1|.
    double identity_max_error = 0.0;
    /// min P, and max of P^{(n)}_{n-j} / (π_A Γ(2-β) τ_j^β).
    double complementary_min = 0.0;
    double complementary_bound_ratio = 0.0;
    /// max_n Σ_j P^{(n)}_{n-j} ω_{1-β}(t_j).
    double complementary_weighted_sum_max = 0.0;

    /// Positivity, monotonicity (when certified), standard lower bound, identity to tol.
    bool passed(double identity_tol = 1e-12) const;
    std::string summary() const;
};

/// Runs positivity/monotonicity, both lower-bound variants (quadrature) and
/// the complementary-kernel identity for every level of the mesh.
KernelReport check_kernel_properties(Formula formula, const GradedMesh& mesh, double beta);

}  // namespace sfor
