#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "sfor/error.hpp"
#include "sfor/oracle.hpp"
#include "sfor/solver.hpp"
#include "sfor/special.hpp"

using namespace sfor;

namespace {

ProblemSpec make(double alpha, DataDescriptor a0, DataDescriptor a1, DataDescriptor f, Scheme s,
                 Formula fo) {
    ProblemSpec p;
    p.alpha = alpha;
    p.a0 = std::move(a0);
    p.a1 = std::move(a1);
    p.f = std::move(f);
    p.scheme = s;
    p.formula = fo;
    return p;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("zero data gives the zero solution") {
    for (auto s : {Scheme::VForm, Scheme::ZForm}) {
        for (auto fo : {Formula::L1, Formula::Alikhanov}) {
            const auto p = make(1.5, DataDescriptor::zero(), DataDescriptor::zero(),
                                DataDescriptor::zero(), s, fo);
            const Trajectory tr = run(p, GradedMesh(1.0, 8, 3.0), build_fem(std::numbers::pi, 10));
            REQUIRE(tr.levels() == 9);
            for (const auto& u : tr.U) CHECK(max_abs(u) == 0.0);
        }
    }
}

TEST_CASE("one L1 step by hand") {
    // L = 1, M = 2: one dof, M = 1/3, K = 4. a_1 = hat = φ/2 gives ∫ a_1 φ = 1/6.
    const double alpha = 1.5;
    const double beta = 0.75;
    const double T = 0.3;
    auto p = make(alpha, DataDescriptor::hat(), DataDescriptor::hat(), DataDescriptor::zero(),
                  Scheme::VForm, Formula::L1);
    p.L = 1.0;
    p.T = T;
    const SpatialDisc d = build_fem(1.0, 2);
    const GradedMesh m(T, 1, 1.0);
    const Trajectory tr = run(p, m, d);

    const double A0 = std::pow(T, -beta) / std::tgamma(2.0 - beta);
    const double F = std::pow(T, 1.0 - alpha) / std::tgamma(2.0 - alpha) / 6.0;
    // (M A0^2 + K) U1 = M A0^2 U0 + F, W1 = A0 (U1 - U0)
    const double mA = A0 * A0 / 3.0;
    const double U1 = (mA * 0.5 + F) / (mA + 4.0);
    CHECK(tr.U[1][0] == doctest::Approx(U1).epsilon(1e-12));
    CHECK(tr.W[1][0] == doctest::Approx(A0 * (U1 - 0.5)).epsilon(1e-12));
}

TEST_CASE("one Z-form L1 step by hand") {
    // Z^1 = A0 (U1 - U0) - S(t1), M A0 Z^1 + K U1 = 0
    const double alpha = 1.5;
    const double beta = 0.75;
    const double T = 0.3;
    auto p = make(alpha, DataDescriptor::zero(), DataDescriptor::hat(), DataDescriptor::zero(),
                  Scheme::ZForm, Formula::L1);
    p.L = 1.0;
    p.T = T;
    const Trajectory tr = run(p, GradedMesh(T, 1, 1.0), build_fem(1.0, 2));
    const double A0 = std::pow(T, -beta) / std::tgamma(2.0 - beta);
    const double S = 0.5 * omega(2.0 - beta, T);
    const double U1 = (A0 * S / 3.0) / (A0 * A0 / 3.0 + 4.0);
    CHECK(tr.U[1][0] == doctest::Approx(U1).epsilon(1e-12));
    CHECK(tr.W[1][0] == doctest::Approx(A0 * U1 - S).epsilon(1e-12));
}

TEST_CASE("discrete equations are satisfied") {
    for (auto s : {Scheme::VForm, Scheme::ZForm}) {
        for (auto fo : {Formula::L1, Formula::Alikhanov}) {
            const auto p = make(1.25, DataDescriptor::hat(), DataDescriptor::indicator_left_half(),
                                DataDescriptor::sine(), s, fo);
            const GradedMesh m(1.0, 20, 5.0);
            const SpatialDisc d = build_fem(p.L, 30);
            SolverState st = initial_state(p, d);
            for (std::size_t n = 1; n <= 20; ++n) {
                if (n == 10) {
                    const SolverState copy = step(st, p, m, d);
                    CHECK(copy.n == 10);
                    CHECK(st.n == 9);
                }
                advance(st, p, m, d);
                const StepResidual r = residual(st, n, p, m, d);
                CHECK(r.first < 1e-9);
                CHECK(r.second < 1e-9);
            }
            CHECK_THROWS_AS(advance(st, p, m, d), ValidationError);
        }
    }
}

TEST_CASE("linearity in the data") {
    const GradedMesh m(1.0, 12, 2.0);
    const SpatialDisc d = build_fem(std::numbers::pi, 16);
    const auto pa = make(1.5, DataDescriptor::hat(), DataDescriptor::zero(), DataDescriptor::zero(),
                         Scheme::ZForm, Formula::Alikhanov);
    const auto pb = make(1.5, DataDescriptor::zero(), DataDescriptor::sine(2), DataDescriptor::sine(),
                         Scheme::ZForm, Formula::Alikhanov);
    const auto pc = make(1.5, DataDescriptor::hat(), DataDescriptor::sine(2), DataDescriptor::sine(),
                         Scheme::ZForm, Formula::Alikhanov);
    const auto a = run(pa, m, d);
    const auto b = run(pb, m, d);
    const auto c = run(pc, m, d);
    for (std::size_t n = 0; n <= 12; ++n) {
        for (std::size_t i = 0; i < d.dofs(); ++i) {
            CHECK(c.U[n][i] == doctest::Approx(a.U[n][i] + b.U[n][i]).epsilon(1e-12).scale(1.0));
        }
    }
}

TEST_CASE("homogeneous solutions stay bounded") {
    const auto p = make(1.75, DataDescriptor::hat(), DataDescriptor::hat(), DataDescriptor::zero(),
                        Scheme::ZForm, Formula::L1);
    const SpatialDisc d = build_fem(p.L, 50);
    const auto tr = run(p, GradedMesh(1.0, 200, 2.0), d);
    const double data = h1_norm(d, tr.U[0]) + l2_norm(d, l2_project(d, p.a1));
    double worst = 0.0;
    for (const auto& u : tr.U) worst = std::max(worst, h1_norm(d, u));
    CHECK(worst <= 2.0 * data);
}

TEST_CASE("both schemes converge to the modal solution") {
    // a_1 = sin x only: u = t E_{α,2}(-t^α) sin x
    const double alpha = 1.5;
    const SpectralData sd = build_spectral_data(DataDescriptor::zero(), DataDescriptor::sine(),
                                                DataDescriptor::zero(), std::numbers::pi, 4);
    const SpatialDisc d = build_fem(std::numbers::pi, 200);
    const auto exact = eval_u(sd, alpha, d.nodes, 1.0).values;
    for (auto s : {Scheme::VForm, Scheme::ZForm}) {
        double prev = 0.0;
        for (std::size_t N : {16u, 32u, 64u}) {
            const auto p = make(alpha, DataDescriptor::zero(), DataDescriptor::sine(),
                                DataDescriptor::zero(), s, Formula::Alikhanov);
            const double r = s == Scheme::VForm ? GradedMesh::r_alikhanov_v(alpha)
                                                : GradedMesh::r_alikhanov_z(alpha);
            const auto tr = run(p, GradedMesh(1.0, N, r), d);
            double err = 0.0;
            for (std::size_t i = 0; i < d.dofs(); ++i) {
                err = std::max(err, std::abs(tr.U.back()[i] - exact[i]));
            }
            CAPTURE(N);
            if (prev > 0.0) CHECK(err < 0.5 * prev);
            prev = err;
        }
        CHECK(prev < 1e-3);
    }
}

TEST_CASE("invalid problems") {
    auto p = make(2.0, DataDescriptor::zero(), DataDescriptor::zero(), DataDescriptor::zero(),
                  Scheme::VForm, Formula::L1);
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p.alpha = 1.5;
    p.T = 0.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
}

}
