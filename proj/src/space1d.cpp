#include "sfor/space1d.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "sfor/error.hpp"

namespace sfor {
namespace {

// Gauss-Legendre, 4 points on [-1, 1].
constexpr std::array<double, 4> kGaussX = {-0.8611363115940526, -0.3399810435848563,
                                           0.3399810435848563, 0.8611363115940526};
constexpr std::array<double, 4> kGaussW = {0.3478548451374538, 0.6521451548625461,
                                           0.6521451548625461, 0.3478548451374538};

void check_length(const SpatialDisc& disc, std::size_t n, const char* what) {
    if (n != disc.dofs()) {
        throw ValidationError(std::string(what) + ": vector length " + std::to_string(n) +
                              " does not match " + std::to_string(disc.dofs()) +
                              " interior nodes");
    }
}

}  // namespace

std::vector<double> Tridiagonal::apply(std::span<const double> x) const {
    std::vector<double> y(size(), 0.0);
    apply_add(x, 1.0, y);
    return y;
}

void Tridiagonal::apply_add(std::span<const double> x, double s, std::span<double> y) const {
    const std::size_t n = size();
    if (x.size() != n || y.size() != n) {
        throw ValidationError("tridiagonal product: size mismatch");
    }
    for (std::size_t i = 0; i < n; ++i) {
        double acc = diag[i] * x[i];
        if (i > 0) {
            acc += off[i - 1] * x[i - 1];
        }
        if (i + 1 < n) {
            acc += off[i] * x[i + 1];
        }
        y[i] += s * acc;
    }
}

double Tridiagonal::quadratic(std::span<const double> x) const {
    if (x.size() != size()) {
        throw ValidationError("tridiagonal quadratic form: size mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        acc += diag[i] * x[i] * x[i];
        if (i + 1 < size()) {
            acc += 2.0 * off[i] * x[i] * x[i + 1];
        }
    }
    return acc;
}

Tridiagonal Tridiagonal::combine(double a, const Tridiagonal& A, double b, const Tridiagonal& B) {
    if (A.size() != B.size()) {
        throw ValidationError("tridiagonal combination: size mismatch");
    }
    Tridiagonal C;
    C.diag.resize(A.size());
    C.off.resize(A.off.size());
    for (std::size_t i = 0; i < A.size(); ++i) {
        C.diag[i] = a * A.diag[i] + b * B.diag[i];
    }
    for (std::size_t i = 0; i < A.off.size(); ++i) {
        C.off[i] = a * A.off[i] + b * B.off[i];
    }
    return C;
}

SpatialDisc build_fem(double L, std::size_t M_elems) {
    if (!(L > 0.0) || !std::isfinite(L)) {
        throw ValidationError("finite elements: domain length L must be positive and finite");
    }
    if (M_elems < 2) {
        throw ValidationError("finite elements: at least 2 elements are required, got " +
                              std::to_string(M_elems));
    }
    SpatialDisc d;
    d.L = L;
    d.M_elems = M_elems;
    d.h = L / static_cast<double>(M_elems);
    const std::size_t n = M_elems - 1;
    d.nodes.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        d.nodes[i] = L * static_cast<double>(i + 1) / static_cast<double>(M_elems);
    }
    d.mass.diag.assign(n, 4.0 * d.h / 6.0);
    d.mass.off.assign(n - 1, d.h / 6.0);
    d.stiffness.diag.assign(n, 2.0 / d.h);
    d.stiffness.off.assign(n - 1, -1.0 / d.h);
    return d;
}

DataDescriptor DataDescriptor::zero() { return {}; }

DataDescriptor DataDescriptor::hat() {
    DataDescriptor d;
    d.kind = Kind::Hat;
    return d;
}

DataDescriptor DataDescriptor::indicator_left_half() {
    DataDescriptor d;
    d.kind = Kind::IndicatorLeftHalf;
    return d;
}

DataDescriptor DataDescriptor::sine(int mode, double amplitude) {
    if (mode < 1) {
        throw ValidationError("sine data: mode must be at least 1");
    }
    DataDescriptor d;
    d.kind = Kind::Sine;
    d.mode = mode;
    d.amplitude = amplitude;
    return d;
}

DataDescriptor DataDescriptor::closure(std::function<double(double)> fn,
                                       std::vector<double> breakpoints) {
    if (!fn) {
        throw ValidationError("closure data: empty function");
    }
    DataDescriptor d;
    d.kind = Kind::Closure;
    d.fn = std::move(fn);
    d.breakpoints = std::move(breakpoints);
    return d;
}

double DataDescriptor::operator()(double x, double L) const {
    switch (kind) {
        case Kind::Zero:
            return 0.0;
        case Kind::Hat:
            return std::min(x, L - x);
        case Kind::IndicatorLeftHalf:
            return (x > 0.0 && x <= 0.5 * L) ? 1.0 : 0.0;
        case Kind::Sine:
            return amplitude * std::sin(mode * std::numbers::pi * x / L);
        case Kind::Closure:
            return fn(x);
    }
    return 0.0;
}

std::vector<double> DataDescriptor::kinks(double L) const {
    switch (kind) {
        case Kind::Hat:
        case Kind::IndicatorLeftHalf:
            return {0.5 * L};
        case Kind::Closure: {
            std::vector<double> out;
            for (double b : breakpoints) {
                if (b > 0.0 && b < L) {
                    out.push_back(b);
                }
            }
            std::sort(out.begin(), out.end());
            return out;
        }
        default:
            return {};
    }
}

std::string DataDescriptor::name() const {
    switch (kind) {
        case Kind::Zero:
            return "zero";
        case Kind::Hat:
            return "hat";
        case Kind::IndicatorLeftHalf:
            return "indicator_left_half";
        case Kind::Sine:
            return "sine(" + std::to_string(mode) + ")";
        case Kind::Closure:
            return "closure";
    }
    return "?";
}

std::vector<double> load_vector(const SpatialDisc& disc, const DataDescriptor& data) {
    const std::size_t n = disc.dofs();
    std::vector<double> b(n, 0.0);
    if (data.is_zero()) {
        return b;
    }
    const std::vector<double> kinks = data.kinks(disc.L);
    const double h = disc.h;

    for (std::size_t e = 0; e < disc.M_elems; ++e) {
        const double xl = disc.L * static_cast<double>(e) / static_cast<double>(disc.M_elems);
        const double xr = disc.L * static_cast<double>(e + 1) / static_cast<double>(disc.M_elems);
        std::vector<double> cuts{xl};
        for (double k : kinks) {
            if (k > xl && k < xr) {
                cuts.push_back(k);
            }
        }
        cuts.push_back(xr);

        double left = 0.0;   // ∫ data · (xr - x)/h, basis of node e
        double right = 0.0;  // ∫ data · (x - xl)/h, basis of node e+1
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            const double a = cuts[c];
            const double w = cuts[c + 1] - a;
            for (std::size_t q = 0; q < kGaussX.size(); ++q) {
                const double x = a + 0.5 * w * (kGaussX[q] + 1.0);
                const double fx = data(x, disc.L) * 0.5 * w * kGaussW[q];
                left += fx * (xr - x) / h;
                right += fx * (x - xl) / h;
            }
        }
        // Node j (1-based) carries interior index j-1.
        if (e >= 1) {
            b[e - 1] += left;
        }
        if (e + 1 <= n) {
            b[e] += right;
        }
    }
    return b;
}

std::vector<double> l2_project(const SpatialDisc& disc, const DataDescriptor& data) {
    if (data.is_zero()) {
        return std::vector<double>(disc.dofs(), 0.0);
    }
    return solve_spd_tridiagonal(disc.mass, load_vector(disc, data));
}

std::vector<double> interpolate(const SpatialDisc& disc, const DataDescriptor& data) {
    std::vector<double> v(disc.dofs());
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = data(disc.nodes[i], disc.L);
    }
    return v;
}

double l2_norm(const SpatialDisc& disc, std::span<const double> v) {
    check_length(disc, v.size(), "L2 norm");
    return std::sqrt(std::max(0.0, disc.mass.quadratic(v)));
}

double h1_seminorm(const SpatialDisc& disc, std::span<const double> v) {
    check_length(disc, v.size(), "H1 seminorm");
    return std::sqrt(std::max(0.0, disc.stiffness.quadratic(v)));
}

double h1_norm(const SpatialDisc& disc, std::span<const double> v) {
    check_length(disc, v.size(), "H1 norm");
    return std::sqrt(std::max(0.0, disc.mass.quadratic(v) + disc.stiffness.quadratic(v)));
}

TridiagonalFactor::TridiagonalFactor(const Tridiagonal& A) {
    const std::size_t n = A.size();
    if (n == 0 || A.off.size() + 1 != n) {
        throw ValidationError("tridiagonal solve: malformed matrix");
    }
    d_.resize(n);
    l_.resize(n - 1);
    d_[0] = A.diag[0];
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) {
            l_[i - 1] = A.off[i - 1] / d_[i - 1];
            d_[i] = A.diag[i] - l_[i - 1] * A.off[i - 1];
        }
        if (!(d_[i] > 0.0)) {
            throw NumericalError("tridiagonal solve: nonpositive pivot at row " +
                                 std::to_string(i) + "; matrix is not SPD");
        }
    }
}

void TridiagonalFactor::solve_in_place(std::span<double> x) const {
    const std::size_t n = d_.size();
    if (x.size() != n) {
        throw ValidationError("tridiagonal solve: right-hand side length mismatch");
    }
    for (std::size_t i = 1; i < n; ++i) {
        x[i] -= l_[i - 1] * x[i - 1];
    }
    for (std::size_t i = 0; i < n; ++i) {
        x[i] /= d_[i];
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        x[i] -= l_[i] * x[i + 1];
    }
}

std::vector<double> TridiagonalFactor::solve(std::span<const double> rhs) const {
    std::vector<double> x(rhs.begin(), rhs.end());
    solve_in_place(x);
    return x;
}

std::vector<double> solve_spd_tridiagonal(const Tridiagonal& A, std::span<const double> rhs) {
    return TridiagonalFactor(A).solve(rhs);
}

}  // namespace sfor
