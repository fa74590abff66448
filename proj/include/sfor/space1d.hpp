#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace sfor {

/// Symmetric tridiagonal matrix: diag[i] = a_ii, off[i] = a_{i,i+1} = a_{i+1,i}.
struct Tridiagonal {
    std::vector<double> diag;
    std::vector<double> off;

    std::size_t size() const noexcept { return diag.size(); }
    /// y = A x
    std::vector<double> apply(std::span<const double> x) const;
    /// y += s * A x
    void apply_add(std::span<const double> x, double s, std::span<double> y) const;
    /// x^T A x
    double quadratic(std::span<const double> x) const;
    /// a * A + b * B (same size)
    static Tridiagonal combine(double a, const Tridiagonal& A, double b, const Tridiagonal& B);
};

/// P1 finite elements on a uniform grid of (0, L), homogeneous Dirichlet.
struct SpatialDisc {
    double L = 0.0;
    std::size_t M_elems = 0;
    double h = 0.0;
    /// Interior nodes x_1..x_{M-1}.
    std::vector<double> nodes;
    Tridiagonal mass;
    Tridiagonal stiffness;

    std::size_t dofs() const noexcept { return nodes.size(); }
};

SpatialDisc build_fem(double L, std::size_t M_elems);

/// Initial and source profiles on (0, L).
struct DataDescriptor {
    enum class Kind {
        Zero,
        Hat,               // min(x, L - x)
        IndicatorLeftHalf, // 1 on (0, L/2], 0 elsewhere
        Sine,              // amplitude * sin(mode π x / L)
        Closure,
    };

    Kind kind = Kind::Zero;
    int mode = 1;
    double amplitude = 1.0;
    std::function<double(double)> fn;
    /// Points of nonsmoothness of a closure, used to split quadrature cells.
    std::vector<double> breakpoints;

    static DataDescriptor zero();
    static DataDescriptor hat();
    static DataDescriptor indicator_left_half();
    static DataDescriptor sine(int mode = 1, double amplitude = 1.0);
    static DataDescriptor closure(std::function<double(double)> fn,
                                  std::vector<double> breakpoints = {});

    double operator()(double x, double L) const;
    /// Interior nonsmooth points of the profile on (0, L).
    std::vector<double> kinks(double L) const;
    bool is_zero() const noexcept { return kind == Kind::Zero; }
    std::string name() const;
};

/// b_i = ∫ data φ_i, 4-point Gauss on each element, split at kinks.
std::vector<double> load_vector(const SpatialDisc& disc, const DataDescriptor& data);

/// Coefficients c with M c = load_vector(data).
std::vector<double> l2_project(const SpatialDisc& disc, const DataDescriptor& data);

/// Nodal values at interior nodes.
std::vector<double> interpolate(const SpatialDisc& disc, const DataDescriptor& data);

double l2_norm(const SpatialDisc& disc, std::span<const double> v);
/// sqrt(v^T M v + v^T K v)
double h1_norm(const SpatialDisc& disc, std::span<const double> v);
/// sqrt(v^T K v)
double h1_seminorm(const SpatialDisc& disc, std::span<const double> v);

/// LDL^T (Thomas) solve for a symmetric positive definite tridiagonal matrix.
/// Throws NumericalError on a nonpositive pivot.
std::vector<double> solve_spd_tridiagonal(const Tridiagonal& A, std::span<const double> rhs);

/// Factorization reused across right-hand sides.
class TridiagonalFactor {
public:
    explicit TridiagonalFactor(const Tridiagonal& A);
    std::vector<double> solve(std::span<const double> rhs) const;
    void solve_in_place(std::span<double> x) const;
    std::size_t size() const noexcept { return d_.size(); }

private:
    std::vector<double> d_;  // pivots
    std::vector<double> l_;  // subdiagonal multipliers
};

}  // namespace sfor
