#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sfor/fracops.hpp"
#include "sfor/solver.hpp"
#include "sfor/space1d.hpp"

namespace sfor {

enum class Example { Ex1, Ex2 };
enum class RMode { Uniform, Optimal, Explicit };
enum class ErrorNorm { H1Full, H1Semi, L2 };

struct ExperimentConfig {
    Example example = Example::Ex1;
    double alpha = 1.5;
    Scheme scheme = Scheme::VForm;
    Formula formula = Formula::L1;
    RMode r_mode = RMode::Optimal;
    double r_value = 1.0;  // used by RMode::Explicit
    std::vector<std::size_t> N_list;
    std::size_t N_ref = 0;
    std::size_t M_elems = 100;
    ErrorNorm error_norm = ErrorNorm::H1Full;
    double L = 3.14159265358979323846;
    double T = 1.0;

    /// Defaults for one example/formula pair: N_list, N_ref and the norm.
    static ExperimentConfig defaults(Example example, Formula formula);

    /// Throws ValidationError on any violated invariant.
    void validate() const;
};

/// Parses flat key=value text; '#' starts a comment.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string format_config(const ExperimentConfig& config);

std::string to_string(Example e);
std::string to_string(Scheme s);
std::string to_string(Formula f);
std::string to_string(ErrorNorm n);
std::string describe_r_mode(const ExperimentConfig& config);

/// Grading exponent selected by config.r_mode.
double resolve_r(const ExperimentConfig& config);

/// Optimal exponent for a formula/scheme pair.
double optimal_r(Formula formula, Scheme scheme, double alpha);

/// Predicted convergence order in N for the given grading.
double theoretical_order(Formula formula, Scheme scheme, double alpha, double r);

/// Data triple (a_0, a_1, f) of an example.
ProblemSpec make_problem(const ExperimentConfig& config);

double norm_of(const SpatialDisc& disc, ErrorNorm norm, std::span<const double> v);

/// max over coarse levels n = 1..N of ||U^n - U_ref(t_n)||. Coarse times must
/// coincide with reference times (N divides N_ref on the same grading).
double compute_error(const Trajectory& traj, const Trajectory& ref, const SpatialDisc& disc,
                     ErrorNorm norm);

struct TableRow {
    std::size_t N = 0;
    double error = 0.0;
    std::optional<double> order;

    bool operator==(const TableRow&) const = default;
};

struct ConvergenceTable {
    ExperimentConfig config;
    double r = 1.0;
    std::vector<TableRow> rows;

    double theoretical() const;
    std::optional<double> final_order() const;
};

/// log2(e_coarse / e_fine).
double observed_order(double e_coarse, double e_fine);

struct SweepOptions {
    bool parallel = false;
    std::function<void(const std::string&)> log;
};

ConvergenceTable run_sweep(const ExperimentConfig& config, const SweepOptions& options = {});

/// "N,error,order" with %.4e errors and %.4f orders; blank order on the first row.
std::string emit_csv(const ConvergenceTable& table);
std::vector<TableRow> parse_csv(const std::string& text);

/// One labelled column group of a markdown table.
struct TableColumn {
    std::string label;
    ConvergenceTable table;
};

/// Rows by N, a (error, order) pair per column, and a theoretical-order footer.
std::string emit_markdown(const std::string& title, const std::vector<TableColumn>& columns);
std::string emit_markdown(const ConvergenceTable& table);

/// Built-in configurations of the seven reference convergence tables.
struct BuiltinTable {
    int id = 0;
    std::string title;
    std::vector<std::pair<std::string, ExperimentConfig>> columns;
};

BuiltinTable builtin_table(int id);

/// Runs every column of a built-in table.
std::vector<TableColumn> run_builtin_table(const BuiltinTable& table, const SweepOptions& options = {});

}  // namespace sfor
