#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sfor/space1d.hpp"
#include "sfor/special.hpp"

namespace sfor {

/// Dirichlet eigen-expansion of the problem data on (0, L):
/// φ_n(x) = sqrt(2/L) sin(nπx/L), λ_n = (nπ/L)^2, n = 1..n_modes.
struct SpectralData {
    double L = 0.0;
    std::size_t n_modes = 0;
    std::vector<double> coeffs_a0;
    std::vector<double> coeffs_a1;
    std::vector<double> coeffs_f;
    std::vector<double> lambdas;
};

inline constexpr std::size_t kDefaultModes = 2000;

/// (data, φ_n) for n = 1..n_modes. Closed forms for hat, indicator and sine;
/// adaptive Gauss-Kronrod for closures (AccuracyError above 1e-12 absolute).
std::vector<double> sine_coefficients(const DataDescriptor& data, double L, std::size_t n_modes);

SpectralData build_spectral_data(const DataDescriptor& a0, const DataDescriptor& a1,
                                 const DataDescriptor& f, double L,
                                 std::size_t n_modes = kDefaultModes);

/// Mode amplitudes of u, v = D^β u and z = v - [a_1 + Γ(2-α) f] ω_{2-β}(t).
std::vector<double> modal_u(const SpectralData& sd, double alpha, double t,
                            const MLEvalPolicy& policy = {});
std::vector<double> modal_v(const SpectralData& sd, double alpha, double t,
                            const MLEvalPolicy& policy = {});
std::vector<double> modal_z(const SpectralData& sd, double alpha, double t,
                            const MLEvalPolicy& policy = {});

/// Point values of a truncated series plus a heuristic bound on the
/// pointwise contribution of the omitted modes.
struct SeriesValues {
    std::vector<double> values;
    double tail_estimate = 0.0;
};

SeriesValues synthesize(const SpectralData& sd, std::span<const double> modal,
                        std::span<const double> xs);

SeriesValues eval_u(const SpectralData& sd, double alpha, std::span<const double> xs, double t,
                    const MLEvalPolicy& policy = {});
SeriesValues eval_v(const SpectralData& sd, double alpha, std::span<const double> xs, double t,
                    const MLEvalPolicy& policy = {});
SeriesValues eval_z(const SpectralData& sd, double alpha, std::span<const double> xs, double t,
                    const MLEvalPolicy& policy = {});

/// L2(0, L) norm of a truncated series (Parseval).
double modal_l2_norm(std::span<const double> modal);

}  // namespace sfor
