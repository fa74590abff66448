#include "sfor/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sfor/error.hpp"
#include "sfor/special.hpp"

namespace sfor {
namespace {

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

// Σ_k A^{(n)}_{n-k} hist[k-1] over the stored increments k = 1..n-1.
void history_sum(const KernelRow& row, const std::vector<std::vector<double>>& hist,
                 std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    const std::size_t n = hist.size();
    for (std::size_t k = 1; k <= n; ++k) {
        const double a = row.at_level(k);
        const auto& d = hist[k - 1];
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] += a * d[i];
        }
    }
}

// Source factors at t_{n-θ}.
struct Sources {
    double first = 0.0;     // ω_{2-α}(t) for the a_1 load (VForm)
    double singular = 0.0;  // t^{1-α} for the f load (VForm)
    double second = 0.0;    // ω_{2-β}(t) for s (ZForm)
};

Sources sources_at(const ProblemSpec& spec, double t) {
    Sources s;
    if (spec.scheme == Scheme::VForm) {
        s.first = omega(2.0 - spec.alpha, t);
        s.singular = std::pow(t, 1.0 - spec.alpha);
    } else {
        s.second = omega(2.0 - spec.beta(), t);
    }
    return s;
}

}  // namespace

void ProblemSpec::validate() const {
    if (!(alpha > 1.0 && alpha < 2.0)) {
        throw ValidationError("problem: order α must lie in (1, 2), got " + std::to_string(alpha));
    }
    if (!(L > 0.0) || !std::isfinite(L)) {
        throw ValidationError("problem: domain length L must be positive");
    }
    if (!(T > 0.0) || !std::isfinite(T)) {
        throw ValidationError("problem: final time T must be positive");
    }
}

SchemeData prepare_scheme_data(const ProblemSpec& spec, const SpatialDisc& disc) {
    spec.validate();
    if (std::abs(disc.L - spec.L) > 1e-12 * spec.L) {
        throw ValidationError("problem: spatial discretization length differs from problem L");
    }
    SchemeData d;
    d.u0 = l2_project(disc, spec.a0);
    d.load_a1 = load_vector(disc, spec.a1);
    d.load_f = load_vector(disc, spec.f);
    const double g = std::tgamma(2.0 - spec.alpha);
    std::vector<double> load_s(d.load_a1.size());
    for (std::size_t i = 0; i < load_s.size(); ++i) {
        load_s[i] = d.load_a1[i] + g * d.load_f[i];
    }
    d.s_proj = solve_spd_tridiagonal(disc.mass, load_s);
    return d;
}

SolverState initial_state(const ProblemSpec& spec, const SpatialDisc& disc) {
    auto data = std::make_shared<SchemeData>(prepare_scheme_data(spec, disc));
    SolverState s;
    s.n = 0;
    s.U.push_back(data->u0);
    s.W.emplace_back(disc.dofs(), 0.0);
    s.data = std::move(data);
    return s;
}

void advance(SolverState& state, const ProblemSpec& spec, const GradedMesh& mesh,
             const SpatialDisc& disc) {
    const std::size_t n = state.n + 1;
    if (n > mesh.intervals()) {
        throw ValidationError("solver: cannot advance past level N = " +
                              std::to_string(mesh.intervals()));
    }
    if (!state.data) {
        throw ValidationError("solver: state was not created by initial_state");
    }
    const std::size_t m = disc.dofs();
    const double theta = spec.theta();
    const double c = 1.0 / (1.0 - theta);
    const KernelRow row = kernel_row(spec.formula, mesh, spec.beta(), n);
    const double a0 = row.coeffs[0];
    const double t = mesh.offset_time(n, theta);
    const Sources src = sources_at(spec, t);
    const SchemeData& data = *state.data;

    const std::vector<double>& u_prev = state.U.back();
    const std::vector<double>& w_prev = state.W.back();

    std::vector<double> hu(m), hw(m);
    history_sum(row, state.dU, hu);
    history_sum(row, state.dW, hw);

    // g = H_U - S - θ W^{n-1}, so that W^n = c [A_0 ΔU^n + g].
    std::vector<double> g(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double s = spec.scheme == Scheme::ZForm ? data.s_proj[i] * src.second : 0.0;
        g[i] = hu[i] - s - theta * w_prev[i];
    }

    // Solve for the increment δ = U^n - U^{n-1}; the c A_0^2 M U^{n-1} terms
    // cancel, which keeps δ accurate when A_0 is huge on tiny first steps.
    // (c A_0^2 M + (1-θ) K) δ = M [A_0 W^{n-1} - H_W - c A_0 g] + F - K U^{n-1}
    std::vector<double> y(m);
    for (std::size_t i = 0; i < m; ++i) {
        y[i] = a0 * w_prev[i] - hw[i] - c * a0 * g[i];
    }
    std::vector<double> rhs = disc.mass.apply(y);
    if (spec.scheme == Scheme::VForm) {
        for (std::size_t i = 0; i < m; ++i) {
            rhs[i] += src.first * data.load_a1[i] + src.singular * data.load_f[i];
        }
    }
    disc.stiffness.apply_add(u_prev, -1.0, rhs);
    const Tridiagonal system =
        Tridiagonal::combine(c * a0 * a0, disc.mass, 1.0 - theta, disc.stiffness);
    std::vector<double> du = solve_spd_tridiagonal(system, rhs);

    std::vector<double> u(m), w(m), dw(m);
    for (std::size_t i = 0; i < m; ++i) {
        u[i] = u_prev[i] + du[i];
        w[i] = c * (a0 * du[i] + g[i]);
        dw[i] = w[i] - w_prev[i];
    }
    state.U.push_back(std::move(u));
    state.W.push_back(std::move(w));
    state.dU.push_back(std::move(du));
    state.dW.push_back(std::move(dw));
    state.n = n;
}

SolverState step(SolverState state, const ProblemSpec& spec, const GradedMesh& mesh,
                 const SpatialDisc& disc) {
    advance(state, spec, mesh, disc);
    return state;
}

StepResidual residual(const SolverState& state, std::size_t n, const ProblemSpec& spec,
                      const GradedMesh& mesh, const SpatialDisc& disc) {
    if (n == 0 || n > state.n) {
        throw ValidationError("residual: level outside [1, " + std::to_string(state.n) + "]");
    }
    const std::size_t m = disc.dofs();
    const double theta = spec.theta();
    const KernelRow row = kernel_row(spec.formula, mesh, spec.beta(), n);
    const double t = mesh.offset_time(n, theta);
    const Sources src = sources_at(spec, t);
    const SchemeData& data = *state.data;

    std::vector<double> dtu(m, 0.0), dtw(m, 0.0);
    for (std::size_t k = 1; k <= n; ++k) {
        const double a = row.at_level(k);
        for (std::size_t i = 0; i < m; ++i) {
            dtu[i] += a * state.dU[k - 1][i];
            dtw[i] += a * state.dW[k - 1][i];
        }
    }

    std::vector<double> u_off(m), w_off(m), s(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        u_off[i] = (1.0 - theta) * state.U[n][i] + theta * state.U[n - 1][i];
        w_off[i] = (1.0 - theta) * state.W[n][i] + theta * state.W[n - 1][i];
        if (spec.scheme == Scheme::ZForm) {
            s[i] = data.s_proj[i] * src.second;
        }
    }

    // M D^β W + K U^{n-θ} - F
    std::vector<double> mdw = disc.mass.apply(dtw);
    std::vector<double> ku = disc.stiffness.apply(u_off);
    std::vector<double> load(m, 0.0);
    if (spec.scheme == Scheme::VForm) {
        for (std::size_t i = 0; i < m; ++i) {
            load[i] = src.first * data.load_a1[i] + src.singular * data.load_f[i];
        }
    }
    std::vector<double> r1(m);
    for (std::size_t i = 0; i < m; ++i) {
        r1[i] = mdw[i] + ku[i] - load[i];
    }
    const double scale1 = std::max({inf_norm(mdw), inf_norm(ku), inf_norm(load), 1e-300});

    std::vector<double> r2(m);
    for (std::size_t i = 0; i < m; ++i) {
        r2[i] = w_off[i] - dtu[i] + s[i];
    }
    const double scale2 = std::max({inf_norm(w_off), inf_norm(dtu), inf_norm(s), 1e-300});

    return StepResidual{inf_norm(r1) / scale1, inf_norm(r2) / scale2};
}

Trajectory run(const ProblemSpec& spec, const GradedMesh& mesh, const SpatialDisc& disc,
               const RunOptions& options) {
    if (std::abs(mesh.final_time() - spec.T) > 1e-12 * spec.T) {
        throw ValidationError("run: mesh final time differs from problem T");
    }
    SolverState state = initial_state(spec, disc);
    if (options.log) {
        options.log("initial value U^0 set to the L2 projection of a0 (" + spec.a0.name() +
                    "); auxiliary variable starts at 0");
    }
    const std::size_t N = mesh.intervals();
    for (std::size_t n = 1; n <= N; ++n) {
        try {
            advance(state, spec, mesh, disc);
        } catch (const NumericalError& e) {
            throw NumericalError("run: level " + std::to_string(n) + ": " + e.what());
        } catch (const ValidationError& e) {
            throw ValidationError("run: level " + std::to_string(n) + ": " + e.what());
        }
    }
    Trajectory traj;
    traj.times.assign(mesh.points().begin(), mesh.points().end());
    traj.U = std::move(state.U);
    if (options.keep_aux) {
        traj.W = std::move(state.W);
    }
    return traj;
}

}  // namespace sfor
