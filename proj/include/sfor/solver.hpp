#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "sfor/fracops.hpp"
#include "sfor/mesh.hpp"
#include "sfor/space1d.hpp"

namespace sfor {

/// Which reduced system is discretized.
enum class Scheme {
    VForm,  // v = D^β u, singular source a_1 ω_{2-α}(t) + t^{1-α} f on the right
    ZForm,  // z = D^β u - [a_1 + Γ(2-α) f] ω_{2-β}(t), homogeneous first equation
};

struct ProblemSpec {
    double alpha = 1.5;
    double L = 3.14159265358979323846;
    double T = 1.0;
    DataDescriptor a0;
    DataDescriptor a1;
    DataDescriptor f;
    Scheme scheme = Scheme::VForm;
    Formula formula = Formula::L1;

    double beta() const noexcept { return 0.5 * alpha; }
    double theta() const noexcept { return formula_theta(formula, beta()); }
    /// Throws ValidationError unless 1 < α < 2, L > 0, T > 0.
    void validate() const;
};

/// Time-independent pieces shared by all steps of one run.
struct SchemeData {
    std::vector<double> u0;      // L2 projection of a_0
    std::vector<double> load_a1; // ∫ a_1 φ_i
    std::vector<double> load_f;  // ∫ f φ_i
    std::vector<double> s_proj;  // L2 projection of a_1 + Γ(2-α) f
};

SchemeData prepare_scheme_data(const ProblemSpec& spec, const SpatialDisc& disc);

/// Complete history of one run up to level n.
struct SolverState {
    std::size_t n = 0;
    std::vector<std::vector<double>> U;   // U[k], k = 0..n
    std::vector<std::vector<double>> W;   // V or Z, W[k], k = 0..n
    std::vector<std::vector<double>> dU;  // dU[k-1] = U^k - U^{k-1}
    std::vector<std::vector<double>> dW;
    std::shared_ptr<const SchemeData> data;
};

/// U^0 = projection of a_0, W^0 = 0.
SolverState initial_state(const ProblemSpec& spec, const SpatialDisc& disc);

/// Advances the state from level n to n+1 in place.
void advance(SolverState& state, const ProblemSpec& spec, const GradedMesh& mesh,
             const SpatialDisc& disc);

/// Value-returning form of advance.
SolverState step(SolverState state, const ProblemSpec& spec, const GradedMesh& mesh,
                 const SpatialDisc& disc);

/// Relative residuals of the two discrete equations at level n >= 1.
struct StepResidual {
    double first = 0.0;   // Galerkin form of the equation containing K
    double second = 0.0;  // nodal relation between W and D^β U
};

StepResidual residual(const SolverState& state, std::size_t n, const ProblemSpec& spec,
                      const GradedMesh& mesh, const SpatialDisc& disc);

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> U;
    std::vector<std::vector<double>> W;

    std::size_t levels() const noexcept { return times.size(); }
};

struct RunOptions {
    std::function<void(const std::string&)> log;
    bool keep_aux = true;
};

/// Runs levels 1..N. Errors are rethrown with the failing level attached.
Trajectory run(const ProblemSpec& spec, const GradedMesh& mesh, const SpatialDisc& disc,
               const RunOptions& options = {});

}  // namespace sfor
