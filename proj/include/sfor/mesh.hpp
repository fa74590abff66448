#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sfor {

/// Graded temporal mesh t_k = T (k/N)^r on [0, T].
///
/// Points are evaluated directly from the power law (never accumulated), so
/// t_0 = 0 and t_N = T hold exactly; steps are differences of points.
/// Immutable after construction.
class GradedMesh {
public:
    GradedMesh(double T, std::size_t N, double r);

    /// r = 1.
    static GradedMesh uniform(double T, std::size_t N);

    // Optimal grading exponents, one per (formula, transformed system) pair.
    static double r_l1_v(double alpha);          // (4-α)/(2-α)
    static double r_l1_z(double alpha);          // max{(4-α)/α, 2}
    static double r_alikhanov_v(double alpha);   // 4/(2-α)
    static double r_alikhanov_z(double alpha);   // max{4/α, 8/(4-α)}

    double final_time() const noexcept { return T_; }
    std::size_t intervals() const noexcept { return N_; }
    double grading() const noexcept { return r_; }

    /// t_k, 0 <= k <= N.
    double point(std::size_t k) const;
    /// τ_k = t_k - t_{k-1}, 1 <= k <= N.
    double step(std::size_t k) const;
    /// ρ_k = τ_k / τ_{k+1}, 1 <= k <= N-1.
    double ratio(std::size_t k) const;
    /// max_k ρ_k (0 when N = 1).
    double max_ratio() const noexcept { return max_ratio_; }

    /// t_{n-θ} = θ t_{n-1} + (1-θ) t_n.
    double offset_time(std::size_t n, double theta) const;

    std::span<const double> points() const noexcept { return points_; }
    std::span<const double> steps() const noexcept { return steps_; }

private:
    double T_;
    std::size_t N_;
    double r_;
    std::vector<double> points_;
    std::vector<double> steps_;  // steps_[k-1] = τ_k
    double max_ratio_ = 0.0;
};

GradedMesh build_graded_mesh(double T, std::size_t N, double r);

}  // namespace sfor
