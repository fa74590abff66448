// sfor-wave: convergence tables and kernel checks for the SFOR solver.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

#include "sfor/error.hpp"
#include "sfor/fracops.hpp"
#include "sfor/harness.hpp"
#include "sfor/mesh.hpp"

namespace {

int write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw sfor::ValidationError("cannot write " + path);
    }
    out << text;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Graded-mesh SFOR solver for time-fractional diffusion-wave equations"};
    app.require_subcommand(1);

    bool verbose = false;
    app.add_flag("-v,--verbose", verbose, "Progress messages on stderr");

    auto* run_cmd = app.add_subcommand("run", "Run a convergence sweep from a config file");
    std::string config_path;
    std::string format = "csv";
    std::string out_path;
    run_cmd->add_option("--config", config_path, "key=value experiment file")->required();
    run_cmd->add_option("--format", format, "csv or markdown")
        ->check(CLI::IsMember({"csv", "markdown"}));
    run_cmd->add_option("--out", out_path, "Output file (default stdout)");

    auto* table_cmd = app.add_subcommand("table", "Regenerate one of the seven reference convergence tables");
    int table_id = 0;
    std::string table_out;
    table_cmd->add_option("id", table_id, "Table number 1..7")->required()->check(CLI::Range(1, 7));
    table_cmd->add_option("--out", table_out, "Output file (default stdout)");

    auto* kernels_cmd = app.add_subcommand("check-kernels", "Kernel property report for one mesh");
    double beta = 0.75;
    std::size_t N = 64;
    double r = 1.0;
    std::string formula_name = "both";
    kernels_cmd->add_option("--beta", beta, "Order beta in (0, 1)")->required();
    kernels_cmd->add_option("--N", N, "Number of intervals")->required();
    kernels_cmd->add_option("--r", r, "Grading exponent")->required();
    kernels_cmd->add_option("--formula", formula_name, "L1, ALIKHANOV or both")
        ->check(CLI::IsMember({"L1", "ALIKHANOV", "both"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    sfor::SweepOptions sweep;
    if (verbose) {
        sweep.log = [](const std::string& msg) { std::cerr << msg << '\n'; };
    }

    try {
        if (*run_cmd) {
            const sfor::ExperimentConfig config = sfor::load_config(config_path);
            const sfor::ConvergenceTable table = sfor::run_sweep(config, sweep);
            const std::string text =
                format == "csv" ? sfor::emit_csv(table) : sfor::emit_markdown(table);
            return write_output(text, out_path);
        }
        if (*table_cmd) {
            const sfor::BuiltinTable spec = sfor::builtin_table(table_id);
            const auto columns = sfor::run_builtin_table(spec, sweep);
            return write_output(
                sfor::emit_markdown("Table " + std::to_string(table_id) + ": " + spec.title, columns),
                table_out);
        }
        if (*kernels_cmd) {
            const sfor::GradedMesh mesh(1.0, N, r);
            bool ok = true;
            for (auto f : {sfor::Formula::L1, sfor::Formula::Alikhanov}) {
                if (formula_name != "both" && formula_name != sfor::to_string(f)) {
                    continue;
                }
                const sfor::KernelReport rep = sfor::check_kernel_properties(f, mesh, beta);
                std::cout << rep.summary() << '\n';
                ok = ok && rep.passed();
            }
            return ok ? 0 : 2;
        }
    } catch (const sfor::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const sfor::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
