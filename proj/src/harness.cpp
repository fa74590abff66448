#include "sfor/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <map>
#include <sstream>

#include "sfor/error.hpp"

namespace sfor {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
    const std::string s = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v)) {
        throw ValidationError("config: " + key + ": '" + text + "' is not a number");
    }
    return v;
}

std::size_t parse_count(const std::string& key, const std::string& text) {
    const std::string s = trim(text);
    unsigned long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw ValidationError("config: " + key + ": '" + text + "' is not a nonnegative integer");
    }
    return static_cast<std::size_t>(v);
}

template <class E>
E parse_enum(const std::string& key, const std::string& text,
             const std::vector<std::pair<std::string, E>>& table) {
    const std::string s = trim(text);
    for (const auto& [name, value] : table) {
        if (s == name) {
            return value;
        }
    }
    std::string allowed;
    for (const auto& entry : table) {
        allowed += (allowed.empty() ? "" : ", ") + entry.first;
    }
    throw ValidationError("config: " + key + ": '" + s + "' is not one of " + allowed);
}

const std::vector<std::pair<std::string, Example>> kExamples = {{"EX1", Example::Ex1},
                                                                {"EX2", Example::Ex2}};
const std::vector<std::pair<std::string, Scheme>> kSchemes = {{"V_FORM", Scheme::VForm},
                                                              {"Z_FORM", Scheme::ZForm}};
const std::vector<std::pair<std::string, Formula>> kFormulas = {{"L1", Formula::L1},
                                                                {"ALIKHANOV", Formula::Alikhanov}};
const std::vector<std::pair<std::string, ErrorNorm>> kNorms = {
    {"H1_FULL", ErrorNorm::H1Full}, {"H1_SEMI", ErrorNorm::H1Semi}, {"L2", ErrorNorm::L2}};

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_error(double e) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4e", e);
    return buf;
}

std::string format_order(double o) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", o);
    return buf;
}

}  // namespace

std::string to_string(Example e) { return e == Example::Ex1 ? "EX1" : "EX2"; }
std::string to_string(Scheme s) { return s == Scheme::VForm ? "V_FORM" : "Z_FORM"; }
std::string to_string(Formula f) { return f == Formula::L1 ? "L1" : "ALIKHANOV"; }
std::string to_string(ErrorNorm n) {
    switch (n) {
        case ErrorNorm::H1Full:
            return "H1_FULL";
        case ErrorNorm::H1Semi:
            return "H1_SEMI";
        case ErrorNorm::L2:
            return "L2";
    }
    return "?";
}

std::string describe_r_mode(const ExperimentConfig& config) {
    switch (config.r_mode) {
        case RMode::Uniform:
            return "UNIFORM";
        case RMode::Optimal:
            return "OPTIMAL";
        case RMode::Explicit:
            return "EXPLICIT(" + format_number(config.r_value) + ")";
    }
    return "?";
}

ExperimentConfig ExperimentConfig::defaults(Example example, Formula formula) {
    ExperimentConfig c;
    c.example = example;
    c.formula = formula;
    if (formula == Formula::L1) {
        c.N_list = {20, 40, 80, 160, 320};
        c.N_ref = 2560;
    } else {
        c.N_list = {8, 16, 32, 64};
        c.N_ref = 128;
    }
    c.error_norm = example == Example::Ex1 ? ErrorNorm::H1Full : ErrorNorm::L2;
    return c;
}

void ExperimentConfig::validate() const {
    if (!(alpha > 1.0 && alpha < 2.0)) {
        throw ValidationError("config: alpha must lie in (1, 2), got " + format_number(alpha));
    }
    if (r_mode == RMode::Explicit && !(r_value >= 1.0 && std::isfinite(r_value))) {
        throw ValidationError("config: explicit grading exponent must be >= 1");
    }
    if (N_list.empty()) {
        throw ValidationError("config: N_list is empty");
    }
    for (std::size_t N : N_list) {
        if (N < 2) {
            throw ValidationError("config: every N in N_list must be at least 2");
        }
    }
    const std::size_t n_max = *std::max_element(N_list.begin(), N_list.end());
    if (!(N_ref > n_max)) {
        throw ValidationError("config: N_ref = " + std::to_string(N_ref) +
                              " must exceed max(N_list) = " + std::to_string(n_max));
    }
    if (M_elems < 2) {
        throw ValidationError("config: M_elems must be at least 2");
    }
    if (!(L > 0.0) || !(T > 0.0)) {
        throw ValidationError("config: L and T must be positive");
    }
}

ExperimentConfig parse_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("config line " + std::to_string(lineno) +
                                  ": expected key=value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ValidationError("config line " + std::to_string(lineno) + ": empty key");
        }
        if (!kv.emplace(key, value).second) {
            throw ValidationError("config line " + std::to_string(lineno) + ": duplicate key " +
                                  key);
        }
    }

    auto take = [&](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) {
            return std::nullopt;
        }
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto need = [&](const std::string& key) {
        auto v = take(key);
        if (!v) {
            throw ValidationError("config: missing required key " + key);
        }
        return *v;
    };

    const Example example = parse_enum("example", need("example"), kExamples);
    const Formula formula = parse_enum("formula", need("formula"), kFormulas);
    ExperimentConfig c = ExperimentConfig::defaults(example, formula);
    c.alpha = parse_double("alpha", need("alpha"));
    c.scheme = parse_enum("scheme", need("scheme"), kSchemes);

    if (auto v = take("r_mode")) {
        const std::string s = trim(*v);
        if (s == "UNIFORM") {
            c.r_mode = RMode::Uniform;
        } else if (s == "OPTIMAL") {
            c.r_mode = RMode::Optimal;
        } else if (s.rfind("EXPLICIT(", 0) == 0 && s.back() == ')') {
            c.r_mode = RMode::Explicit;
            c.r_value = parse_double("r_mode", s.substr(9, s.size() - 10));
        } else {
            throw ValidationError("config: r_mode: '" + s +
                                  "' is not one of UNIFORM, OPTIMAL, EXPLICIT(<r>)");
        }
    }
    if (auto v = take("N_list")) {
        c.N_list.clear();
        std::istringstream items(*v);
        std::string item;
        while (std::getline(items, item, ',')) {
            c.N_list.push_back(parse_count("N_list", item));
        }
    }
    if (auto v = take("N_ref")) {
        c.N_ref = parse_count("N_ref", *v);
    }
    if (auto v = take("M_elems")) {
        c.M_elems = parse_count("M_elems", *v);
    }
    if (auto v = take("error_norm")) {
        c.error_norm = parse_enum("error_norm", *v, kNorms);
    }
    if (auto v = take("L")) {
        c.L = parse_double("L", *v);
    }
    if (auto v = take("T")) {
        c.T = parse_double("T", *v);
    }
    if (!kv.empty()) {
        throw ValidationError("config: unknown key " + kv.begin()->first);
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("config: cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string format_config(const ExperimentConfig& c) {
    std::ostringstream os;
    os << "example=" << to_string(c.example) << '\n'
       << "alpha=" << format_number(c.alpha) << '\n'
       << "scheme=" << to_string(c.scheme) << '\n'
       << "formula=" << to_string(c.formula) << '\n'
       << "r_mode=" << describe_r_mode(c) << '\n'
       << "N_list=";
    for (std::size_t i = 0; i < c.N_list.size(); ++i) {
        os << (i ? "," : "") << c.N_list[i];
    }
    os << '\n'
       << "N_ref=" << c.N_ref << '\n'
       << "M_elems=" << c.M_elems << '\n'
       << "error_norm=" << to_string(c.error_norm) << '\n'
       << "L=" << format_number(c.L) << '\n'
       << "T=" << format_number(c.T) << '\n';
    return os.str();
}

double optimal_r(Formula formula, Scheme scheme, double alpha) {
    if (formula == Formula::L1) {
        return scheme == Scheme::VForm ? GradedMesh::r_l1_v(alpha) : GradedMesh::r_l1_z(alpha);
    }
    return scheme == Scheme::VForm ? GradedMesh::r_alikhanov_v(alpha)
                                   : GradedMesh::r_alikhanov_z(alpha);
}

double resolve_r(const ExperimentConfig& config) {
    switch (config.r_mode) {
        case RMode::Uniform:
            return 1.0;
        case RMode::Optimal:
            return optimal_r(config.formula, config.scheme, config.alpha);
        case RMode::Explicit:
            return config.r_value;
    }
    return 1.0;
}

double theoretical_order(Formula formula, Scheme scheme, double alpha, double r) {
    const double beta = 0.5 * alpha;
    const double cap = formula == Formula::L1 ? 2.0 - beta : 2.0;
    const double lead = scheme == Scheme::VForm ? r * (1.0 - beta) : r * beta;
    return std::min({lead, cap, r * (1.0 - 0.5 * beta)});
}

ProblemSpec make_problem(const ExperimentConfig& config) {
    ProblemSpec p;
    p.alpha = config.alpha;
    p.L = config.L;
    p.T = config.T;
    p.scheme = config.scheme;
    p.formula = config.formula;
    p.a0 = DataDescriptor::hat();
    p.a1 = config.example == Example::Ex1 ? DataDescriptor::hat()
                                          : DataDescriptor::indicator_left_half();
    // sin(x) on (0, π); the first eigenmode on other domains.
    p.f = DataDescriptor::sine(1, 1.0);
    return p;
}

double norm_of(const SpatialDisc& disc, ErrorNorm norm, std::span<const double> v) {
    switch (norm) {
        case ErrorNorm::H1Full:
            return h1_norm(disc, v);
        case ErrorNorm::H1Semi:
            return h1_seminorm(disc, v);
        case ErrorNorm::L2:
            return l2_norm(disc, v);
    }
    return 0.0;
}

double compute_error(const Trajectory& traj, const Trajectory& ref, const SpatialDisc& disc,
                     ErrorNorm norm) {
    if (traj.levels() < 2 || ref.levels() < 2) {
        throw ValidationError("compute_error: trajectories need at least one time step");
    }
    const std::size_t N = traj.levels() - 1;
    const std::size_t N_ref = ref.levels() - 1;
    if (N_ref % N != 0) {
        throw ValidationError("compute_error: N = " + std::to_string(N) +
                              " does not divide N_ref = " + std::to_string(N_ref));
    }
    const std::size_t stride = N_ref / N;
    const double T = traj.times.back();
    std::vector<double> diff(disc.dofs());
    double worst = 0.0;
    for (std::size_t n = 1; n <= N; ++n) {
        const double t = traj.times[n];
        const double tr = ref.times[n * stride];
        if (std::abs(t - tr) > 4.0 * std::numeric_limits<double>::epsilon() * T) {
            throw ValidationError("compute_error: coarse time t_" + std::to_string(n) + " = " +
                                  format_number(t) + " has no matching reference time");
        }
        const auto& u = traj.U[n];
        const auto& ur = ref.U[n * stride];
        if (u.size() != disc.dofs() || ur.size() != disc.dofs()) {
            throw ValidationError("compute_error: state length does not match discretization");
        }
        for (std::size_t i = 0; i < diff.size(); ++i) {
            diff[i] = u[i] - ur[i];
        }
        worst = std::max(worst, norm_of(disc, norm, diff));
    }
    return worst;
}

double observed_order(double e_coarse, double e_fine) { return std::log2(e_coarse / e_fine); }

double ConvergenceTable::theoretical() const {
    return theoretical_order(config.formula, config.scheme, config.alpha, r);
}

std::optional<double> ConvergenceTable::final_order() const {
    if (rows.empty()) {
        return std::nullopt;
    }
    return rows.back().order;
}

ConvergenceTable run_sweep(const ExperimentConfig& config, const SweepOptions& options) {
    config.validate();
    std::vector<std::size_t> Ns = config.N_list;
    std::sort(Ns.begin(), Ns.end());
    Ns.erase(std::unique(Ns.begin(), Ns.end()), Ns.end());
    for (std::size_t N : Ns) {
        if (config.N_ref % N != 0) {
            throw ValidationError("sweep: N = " + std::to_string(N) + " does not divide N_ref = " +
                                  std::to_string(config.N_ref) +
                                  "; reference times would not align");
        }
    }
    const double r = resolve_r(config);
    const ProblemSpec spec = make_problem(config);
    const SpatialDisc disc = build_fem(config.L, config.M_elems);
    auto log = [&](const std::string& msg) {
        if (options.log) {
            options.log(msg);
        }
    };

    RunOptions ref_opts;
    ref_opts.keep_aux = false;
    ref_opts.log = options.log;
    log("reference run N = " + std::to_string(config.N_ref) + ", r = " + format_number(r));
    const Trajectory ref = run(spec, GradedMesh(config.T, config.N_ref, r), disc, ref_opts);

    auto one = [&](std::size_t N) {
        RunOptions opts;
        opts.keep_aux = false;
        try {
            const Trajectory traj = run(spec, GradedMesh(config.T, N, r), disc, opts);
            return compute_error(traj, ref, disc, config.error_norm);
        } catch (const NumericalError& e) {
            throw NumericalError("sweep: N = " + std::to_string(N) + ": " + e.what());
        } catch (const ValidationError& e) {
            throw ValidationError("sweep: N = " + std::to_string(N) + ": " + e.what());
        }
    };

    std::vector<double> errors(Ns.size());
    if (options.parallel) {
        std::vector<std::future<double>> jobs;
        for (std::size_t N : Ns) {
            jobs.push_back(std::async(std::launch::async, one, N));
        }
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            errors[i] = jobs[i].get();
        }
    } else {
        for (std::size_t i = 0; i < Ns.size(); ++i) {
            errors[i] = one(Ns[i]);
            log("N = " + std::to_string(Ns[i]) + ": error " + format_error(errors[i]));
        }
    }

    ConvergenceTable table;
    table.config = config;
    table.r = r;
    for (std::size_t i = 0; i < Ns.size(); ++i) {
        if (!(errors[i] > 0.0)) {
            throw NumericalError("sweep: N = " + std::to_string(Ns[i]) +
                                 " produced a nonpositive error");
        }
        TableRow row{Ns[i], errors[i], std::nullopt};
        if (i > 0) {
            row.order = observed_order(errors[i - 1], errors[i]);
        }
        table.rows.push_back(row);
    }
    return table;
}

std::string emit_csv(const ConvergenceTable& table) {
    std::string out = "N,error,order\n";
    for (const TableRow& row : table.rows) {
        out += std::to_string(row.N) + "," + format_error(row.error) + ",";
        if (row.order) {
            out += format_order(*row.order);
        }
        out += "\n";
    }
    return out;
}

std::vector<TableRow> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || trim(line) != "N,error,order") {
        throw ValidationError("csv: expected header N,error,order");
    }
    std::vector<TableRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
        if (c2 == std::string::npos) {
            throw ValidationError("csv line " + std::to_string(lineno) + ": expected 3 fields");
        }
        TableRow row;
        row.N = parse_count("N", line.substr(0, c1));
        row.error = parse_double("error", line.substr(c1 + 1, c2 - c1 - 1));
        const std::string order = trim(line.substr(c2 + 1));
        if (!order.empty()) {
            row.order = parse_double("order", order);
        }
        rows.push_back(row);
    }
    return rows;
}

std::string emit_markdown(const std::string& title, const std::vector<TableColumn>& columns) {
    if (columns.empty()) {
        throw ValidationError("markdown: no columns");
    }
    std::vector<std::size_t> Ns;
    for (const auto& col : columns) {
        for (const auto& row : col.table.rows) {
            Ns.push_back(row.N);
        }
    }
    std::sort(Ns.begin(), Ns.end());
    Ns.erase(std::unique(Ns.begin(), Ns.end()), Ns.end());

    const std::string norm_label = [&] {
        switch (columns.front().table.config.error_norm) {
            case ErrorNorm::H1Full:
                return std::string("e_H1");
            case ErrorNorm::H1Semi:
                return std::string("e_H1 (semi)");
            case ErrorNorm::L2:
                return std::string("e_L2");
        }
        return std::string("e");
    }();

    std::ostringstream os;
    if (!title.empty()) {
        os << "**" << title << "**\n\n";
    }
    os << "| N |";
    for (const auto& col : columns) {
        os << ' ' << col.label << ' ' << norm_label << " | Order |";
    }
    os << "\n|---|";
    for (std::size_t i = 0; i < columns.size(); ++i) {
        os << "---|---|";
    }
    os << '\n';
    for (std::size_t N : Ns) {
        os << "| " << N << " |";
        for (const auto& col : columns) {
            auto it = std::find_if(col.table.rows.begin(), col.table.rows.end(),
                                   [&](const TableRow& r) { return r.N == N; });
            if (it == col.table.rows.end()) {
                os << " | |";
                continue;
            }
            os << ' ' << format_error(it->error) << " | "
               << (it->order ? format_order(*it->order) : std::string("-")) << " |";
        }
        os << '\n';
    }
    os << "| Theoretical order |";
    for (const auto& col : columns) {
        os << ' ' << format_order(col.table.theoretical()) << " | |";
    }
    os << '\n';
    return os.str();
}

std::string emit_markdown(const ConvergenceTable& table) {
    const ExperimentConfig& c = table.config;
    const std::string title = to_string(c.example) + ", " + to_string(c.formula) + ", " +
                              to_string(c.scheme) + ", alpha = " + format_number(c.alpha) +
                              ", N_ref = " + std::to_string(c.N_ref) +
                              ", M = " + std::to_string(c.M_elems);
    return emit_markdown(title, {TableColumn{"r = " + format_order(table.r), table}});
}

BuiltinTable builtin_table(int id) {
    auto base = [](Example ex, Formula fm, Scheme sc, double alpha) {
        ExperimentConfig c = ExperimentConfig::defaults(ex, fm);
        c.scheme = sc;
        c.alpha = alpha;
        // Reference H1 errors are seminorm values.
        if (c.error_norm == ErrorNorm::H1Full) {
            c.error_norm = ErrorNorm::H1Semi;
        }
        return c;
    };
    auto with_r = [](ExperimentConfig c, RMode mode, double r = 1.0) {
        c.r_mode = mode;
        c.r_value = r;
        return c;
    };
    auto r_sweep = [&](Example ex, double alpha, double third_r, const std::string& third) {
        const ExperimentConfig c = base(ex, Formula::L1, Scheme::VForm, alpha);
        return std::vector<std::pair<std::string, ExperimentConfig>>{
            {"r = 1", with_r(c, RMode::Uniform)},
            {"r_opt = (4-a)/(2-a)", with_r(c, RMode::Optimal)},
            {third, with_r(c, RMode::Explicit, third_r)},
        };
    };
    auto alpha_sweep = [&](Example ex, Formula fm) {
        std::vector<std::pair<std::string, ExperimentConfig>> cols;
        for (double a : {1.25, 1.5, 1.75}) {
            cols.emplace_back("alpha = " + format_number(a),
                              with_r(base(ex, fm, Scheme::ZForm, a), RMode::Optimal));
        }
        return cols;
    };

    BuiltinTable t;
    t.id = id;
    switch (id) {
        case 1:
            t.title = "L1, V_FORM, example 1, alpha = 1.25";
            t.columns = r_sweep(Example::Ex1, 1.25, (4.0 - 1.25) / 1.25, "r = (4-a)/a");
            break;
        case 2:
            t.title = "L1, V_FORM, example 1, alpha = 1.75";
            t.columns = r_sweep(Example::Ex1, 1.75, 2.0, "r = 2");
            break;
        case 3:
            t.title = "L1, Z_FORM, example 1, r_opt = max{(4-a)/a, 2}";
            t.columns = alpha_sweep(Example::Ex1, Formula::L1);
            break;
        case 4:
            t.title = "ALIKHANOV, Z_FORM, example 1, r_opt = max{4/a, 8/(4-a)}";
            t.columns = alpha_sweep(Example::Ex1, Formula::Alikhanov);
            break;
        case 5:
            t.title = "L1, V_FORM, example 2, alpha = 1.25";
            t.columns = r_sweep(Example::Ex2, 1.25, (4.0 - 1.25) / 1.25, "r = (4-a)/a");
            break;
        case 6:
            t.title = "L1, V_FORM, example 2, alpha = 1.75";
            t.columns = r_sweep(Example::Ex2, 1.75, 2.0, "r = 2");
            break;
        case 7:
            t.title = "L1, Z_FORM, example 2, r_opt = max{(4-a)/a, 2}";
            t.columns = alpha_sweep(Example::Ex2, Formula::L1);
            break;
        default:
            throw ValidationError("table: id must be 1..7, got " + std::to_string(id));
    }
    return t;
}

std::vector<TableColumn> run_builtin_table(const BuiltinTable& table, const SweepOptions& options) {
    std::vector<TableColumn> out;
    for (const auto& [label, config] : table.columns) {
        if (options.log) {
            options.log("column " + label);
        }
        out.push_back(TableColumn{label, run_sweep(config, options)});
    }
    return out;
}

}  // namespace sfor
