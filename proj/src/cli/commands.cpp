#include "fredholm/cli/commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "fredholm/cli/output.hpp"
#include "fredholm/closed_forms.hpp"

namespace fredholm::cli {

namespace {

const char* severity_name(Severity s) {
    switch (s) {
        case Severity::Info: return "info";
        case Severity::Warning: return "warning";
        case Severity::Error: return "error";
    }
    return "info";
}

OrderedJson diagnostics_json(const Diagnostics& diags) {
    OrderedJson out = OrderedJson::array();
    for (const auto& d : diags) {
        OrderedJson item;
        item["severity"] = severity_name(d.severity);
        item["code"] = d.code;
        item["message"] = d.message;
        out.push_back(item);
    }
    return out;
}

std::string diagnostics_text(const Diagnostics& diags) {
    if (diags.empty()) return "diagnostics: none\n";
    std::string out = "diagnostics:\n";
    for (const auto& d : diags) out += std::string("  [") + severity_name(d.severity) + "] " + d.code + ": " + d.message + "\n";
    return out;
}

void merge(Diagnostics& into, const Diagnostics& from) {
    for (const auto& d : from) {
        bool seen = false;
        for (const auto& e : into) seen = seen || (e.code == d.code && e.message == d.message);
        if (!seen) into.push_back(d);
    }
}

OrderedJson reals_json(const std::vector<double>& v) {
    OrderedJson out = OrderedJson::array();
    for (double x : v) out.push_back(x);
    return out;
}

OrderedJson optional_json(const std::optional<double>& v) { return v ? OrderedJson(*v) : OrderedJson(nullptr); }

std::string optional_text(const std::optional<double>& v) { return v ? format_real(*v) : "-"; }

std::string vector_text(const CVector& v) {
    std::string out = "(";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += format_complex(v(i));
    }
    return out + ")";
}

std::string matrix_text(const CMatrix& m, const std::string& indent = "  ") {
    std::vector<std::string> headers;
    for (Eigen::Index k = 0; k < m.cols(); ++k) headers.push_back("col " + std::to_string(k));
    TextTable table(headers);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        std::vector<std::string> row;
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(format_complex(m(i, k)));
        table.add(row);
    }
    std::istringstream lines(table.render());
    std::string out, line;
    while (std::getline(lines, line)) out += indent + line + "\n";
    return out;
}

OrderedJson problem_json(const ProblemDocument& doc) {
    OrderedJson out;
    out["interval"] = OrderedJson::array({doc.a, doc.b});
    out["r"] = doc.r;
    out["m"] = doc.m;
    out["n"] = doc.n;
    out["p"] = doc.p;
    out["q"] = doc.boundary.rows;
    return out;
}

std::string problem_text(const ProblemDocument& doc) {
    std::ostringstream os;
    os << "problem: [" << format_real(doc.a) << ", " << format_real(doc.b) << "], r=" << doc.r << " m=" << doc.m
       << " n=" << doc.n << " p=" << (std::isinf(doc.p) ? std::string("inf") : format_real(doc.p))
       << " q=" << doc.boundary.rows << "\n";
    return os.str();
}

RankPolicy rank_policy(const CommandOptions& options) {
    RankPolicy policy;
    if (options.rank_tol) policy.relative_tolerance = *options.rank_tol;
    return policy;
}

LimitOptions limit_options(const CommandOptions& options) {
    LimitOptions out;
    out.nodes = options.nodes;
    out.rank_policy = rank_policy(options);
    return out;
}

ProblemDocument with_series_cap(ProblemDocument doc, const CommandOptions& options) {
    if (options.series_cap && doc.family && doc.family->multipoint) {
        auto& mp = *doc.family->multipoint;
        for (const auto& s : mp.series) {
            if (s.points.size() > *options.series_cap) {
                throw StructuralError("series of size " + std::to_string(s.points.size()) + " exceeds --series-cap " +
                                      std::to_string(*options.series_cap));
            }
        }
        mp.series_cap = *options.series_cap;
    }
    return doc;
}

OrderedJson table_json(const ConditionTable& t) {
    OrderedJson out;
    out["columns"] = t.columns;
    OrderedJson rows = OrderedJson::array();
    for (std::size_t i = 0; i < t.parameters.size(); ++i) {
        OrderedJson row;
        row["parameter"] = t.parameters[i];
        row["values"] = reals_json(t.values[i]);
        rows.push_back(row);
    }
    out["rows"] = rows;
    OrderedJson verdicts = OrderedJson::array();
    for (bool v : t.column_verdicts) verdicts.push_back(v);
    out["column_verdicts"] = verdicts;
    out["verdict"] = t.verdict;
    return out;
}

std::string table_text(const ConditionTable& t) {
    std::vector<std::string> headers{"parameter"};
    for (const auto& c : t.columns) headers.push_back(c);
    TextTable table(headers);
    for (std::size_t i = 0; i < t.parameters.size(); ++i) {
        std::vector<std::string> row{format_real(t.parameters[i])};
        for (double v : t.values[i]) row.push_back(format_real(v));
        table.add(row);
    }
    std::vector<std::string> verdicts{"verdict"};
    for (bool v : t.column_verdicts) verdicts.push_back(v ? "pass" : "fail");
    table.add(verdicts);
    return table.render();
}

const char* verdict(bool v) { return v ? "pass" : "fail"; }

}  // namespace

std::string CommandResult::render(OutputFormat format) const {
    return format == OutputFormat::Machine ? dump_machine(report) : text;
}

// -- analyze -------------------------------------------------------------------

CommandResult analyze_command(const ProblemDocument& doc, const CommandOptions& options) {
    const ProblemSpec spec = doc.problem();
    Diagnostics diags = spec.validate();
    const Grid grid(spec.interval, options.nodes);
    const FundamentalSet set = fundamental_set(spec.coefficients, grid);
    const CharacteristicMatrix cm = characteristic_matrix(spec.boundary, set, rank_policy(options));
    const SolvabilityReport report = solvability_report(cm);
    merge(diags, report.diagnostics);
    const auto directions = kernel_directions(cm);

    CommandResult out;
    out.status = report.well_posed ? kSuccess : kNotWellPosed;
    auto& j = out.report;
    j["command"] = "analyze";
    j["problem"] = problem_json(doc);
    j["nodes"] = options.nodes;
    j["index"] = report.index;
    j["dim_kernel"] = report.dim_kernel;
    j["dim_cokernel"] = report.dim_cokernel;
    j["well_posed"] = report.well_posed;
    j["numerical_rank"] = cm.numerical_rank;
    j["rank_tolerance"] = cm.rank_tolerance;
    j["condition_number"] = cm.condition_number();
    j["singular_values"] = reals_json(cm.singular_values);
    j["fundamental_residual"] = set.residual;

    std::ostringstream text;
    text << problem_text(doc);
    text << "index " << report.index << "  dim ker " << report.dim_kernel << "  dim coker " << report.dim_cokernel
         << "  well-posed " << (report.well_posed ? "yes" : "no") << "\n";
    text << "numerical rank " << cm.numerical_rank << " (tolerance " << format_real(cm.rank_tolerance)
         << ", condition " << format_real(cm.condition_number()) << ")\n";
    text << "singular values:";
    for (double s : cm.singular_values) text << " " << format_real(s);
    text << "\n";

    OrderedJson dirs = OrderedJson::array();
    if (!directions.empty()) text << "kernel directions:\n";
    for (const auto& xi : directions) {
        const DerivativeStack y = combine(set, xi);
        const double eq = ode_residual(spec.coefficients, y);
        const double bc = entry_sum_norm(spec.boundary.apply(y));
        OrderedJson d;
        d["coefficients"] = vector_json(xi);
        d["equation_residual"] = eq;
        d["boundary_residual"] = bc;
        dirs.push_back(d);
        text << "  " << vector_text(xi) << "  |Ly| " << format_real(eq, 3) << "  |By| " << format_real(bc, 3) << "\n";
    }
    j["kernel_directions"] = dirs;
    j["characteristic_matrix"] = matrix_json(cm.entries);
    j["diagnostics"] = diagnostics_json(diags);

    text << "characteristic matrix (" << cm.rows() << " x " << cm.cols() << "):\n" << matrix_text(cm.entries);
    text << diagnostics_text(diags);
    out.text = text.str();
    return out;
}

// -- solve ---------------------------------------------------------------------

CommandResult solve_command(const ProblemDocument& doc, const CommandOptions& options) {
    if (!doc.rhs) throw StructuralError("solve needs an rhs section in the document");
    const ProblemSpec spec = doc.problem();
    const Grid grid(spec.interval, options.nodes);
    SolveOptions solve_options;
    solve_options.rank_policy = rank_policy(options);

    CommandResult out;
    auto& j = out.report;
    j["command"] = "solve";
    j["problem"] = problem_json(doc);
    j["nodes"] = options.nodes;
    std::ostringstream text;
    text << problem_text(doc);

    try {
        const Solution sol = solve(spec, grid, solve_options);
        j["well_posed"] = true;
        j["coefficients"] = vector_json(sol.coefficients);
        j["equation_residual"] = sol.equation_residual;
        j["boundary_residual"] = sol.boundary_residual;
        j["condition_number"] = sol.condition_number;
        j["diagnostics"] = diagnostics_json(sol.diagnostics);
        OrderedJson samples;
        samples["t"] = reals_json(std::vector<double>(grid.nodes().begin(), grid.nodes().end()));
        OrderedJson orders = OrderedJson::array();
        for (int k = 0; k <= sol.y.max_order(); ++k) {
            OrderedJson per_node = OrderedJson::array();
            for (std::size_t i = 0; i < grid.size(); ++i) per_node.push_back(vector_json(sol.y.at(k, i)));
            orders.push_back(per_node);
        }
        samples["orders"] = orders;
        j["solution"] = samples;

        text << "equation residual " << format_real(sol.equation_residual, 3) << "  boundary residual "
             << format_real(sol.boundary_residual, 3) << "  condition " << format_real(sol.condition_number, 3) << "\n";
        text << diagnostics_text(sol.diagnostics);
        std::vector<std::string> headers{"t"};
        for (int k = 0; k <= sol.y.max_order(); ++k) headers.push_back("y^(" + std::to_string(k) + ")");
        TextTable table(headers);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            std::vector<std::string> row{format_real(grid[i])};
            for (int k = 0; k <= sol.y.max_order(); ++k) row.push_back(vector_text(sol.y.at(k, i)));
            table.add(row);
        }
        text << table.render();
    } catch (const NotWellPosed& e) {
        const auto& r = e.report();
        out.status = kNotWellPosed;
        j["well_posed"] = false;
        j["index"] = r.index;
        j["dim_kernel"] = r.dim_kernel;
        j["dim_cokernel"] = r.dim_cokernel;
        j["diagnostics"] = diagnostics_json(r.diagnostics);
        text << "not well-posed: index " << r.index << "  dim ker " << r.dim_kernel << "  dim coker " << r.dim_cokernel
             << "\n"
             << diagnostics_text(r.diagnostics);
    }
    out.text = text.str();
    return out;
}

// -- family --------------------------------------------------------------------

CommandResult family_command(const ProblemDocument& original, const CommandOptions& options) {
    if (!original.family) throw StructuralError("family needs a family section in the document");
    const ProblemDocument doc = with_series_cap(original, options);
    const ProblemFamily family = doc.problem_family(options.schedule);
    const LimitOptions lo = limit_options(options);
    const bool index = family.direction == LimitDirection::IndexToInfinity;

    CommandResult out;
    auto& j = out.report;
    std::ostringstream text;
    j["command"] = "family";
    j["problem"] = problem_json(doc);
    j["nodes"] = options.nodes;
    j["direction"] = index ? "k->inf" : "eps->0";
    j["schedule"] = reals_json(family.schedule);
    text << problem_text(doc) << "direction " << (index ? "k->inf" : "eps->0") << ", schedule";
    for (double s : family.schedule) text << " " << format_real(s);
    text << "\n";

    const bool c0 = check_condition_0(family.at_zero, lo);
    j["condition_0"] = c0;
    text << "condition 0 (limit well-posed): " << verdict(c0) << "\n";

    const ConditionTable c1 = check_condition_I(family, lo);
    j["condition_I"] = table_json(c1);
    text << "\ncondition I (coefficient convergence): " << verdict(c1.verdict) << "\n" << table_text(c1);

    const Grid grid(family.at_zero.interval, options.nodes);
    const auto probes = default_probes(grid, doc.m, doc.n + doc.r);
    const ConditionTable c2 = check_condition_II(family, probes, lo);
    j["condition_II"] = table_json(c2);
    text << "\ncondition II (boundary convergence on " << probes.size() << " probes): " << verdict(c2.verdict) << "\n";
    // the probe table is wide; text shows the worst probe per row
    {
        TextTable table({"parameter", "max over probes"});
        for (std::size_t i = 0; i < c2.parameters.size(); ++i) {
            double worst = 0.0;
            for (double v : c2.values[i]) worst = std::max(worst, v);
            table.add({format_real(c2.parameters[i]), format_real(worst)});
        }
        text << table.render();
    }

    if (auto mp = doc.multipoint_family()) {
        std::vector<double> eps;
        for (double s : family.schedule) eps.push_back(index ? 1.0 / s : s);
        const AssumptionReport ar = check_multipoint_assumptions(*mp, LebesgueExponent(doc.p), eps, lo.trend);
        OrderedJson a;
        a["parameters"] = reals_json(ar.parameters);
        OrderedJson checks = OrderedJson::array();
        std::vector<std::string> headers{"assumption", "required"};
        for (double e : ar.parameters) headers.push_back("eps=" + format_real(e, 3));
        headers.push_back("verdict");
        TextTable table(headers);
        for (const auto& c : ar.checks) {
            OrderedJson item;
            item["name"] = c.name;
            item["required"] = c.required;
            item["values"] = reals_json(c.values);
            item["verdict"] = c.verdict;
            checks.push_back(item);
            std::vector<std::string> row{c.name, c.required ? "yes" : "no"};
            for (double v : c.values) row.push_back(format_real(v, 4));
            row.push_back(verdict(c.verdict));
            table.add(row);
        }
        a["checks"] = checks;
        a["verdict"] = ar.verdict;
        j["multipoint_assumptions"] = a;
        text << "\nmultipoint assumptions: " << verdict(ar.verdict) << "\n" << table.render();
    }

    const ConditionTable cc = characteristic_convergence(family, lo);
    j["characteristic_convergence"] = table_json(cc);
    text << "\ncharacteristic matrix convergence: " << verdict(cc.verdict) << "\n" << table_text(cc);

    const SemicontinuityResult sc = semicontinuity_check(family, lo);
    {
        OrderedJson s;
        s["parameters"] = reals_json(sc.parameters);
        s["dim_kernel"] = sc.dim_kernel;
        s["dim_cokernel"] = sc.dim_cokernel;
        s["limit_dim_kernel"] = sc.limit_dim_kernel;
        s["limit_dim_cokernel"] = sc.limit_dim_cokernel;
        s["violations"] = reals_json(sc.violations);
        s["threshold"] = optional_json(sc.threshold);
        s["holds_at_limit_end"] = sc.holds_at_limit_end;
        j["semicontinuity"] = s;
        TextTable table({"parameter", "dim ker", "dim coker"});
        for (std::size_t i = 0; i < sc.parameters.size(); ++i) {
            table.add({format_real(sc.parameters[i]), std::to_string(sc.dim_kernel[i]), std::to_string(sc.dim_cokernel[i])});
        }
        table.add({"limit", std::to_string(sc.limit_dim_kernel), std::to_string(sc.limit_dim_cokernel)});
        text << "\nsemicontinuity: " << (sc.holds_at_limit_end ? "holds" : "violated") << " near the limit, threshold "
             << optional_text(sc.threshold) << "\n"
             << table.render();
    }

    if (!c0) {
        out.status = kNotWellPosed;
        j["convergence"] = nullptr;
        text << "\nconvergence experiment skipped: the limit problem is not well-posed\n";
    } else if (!family.at_zero.rhs) {
        j["convergence"] = nullptr;
        text << "\nconvergence experiment skipped: no rhs section\n";
    } else {
        const LimitReport lr = convergence_experiment(family, lo);
        OrderedJson c;
        OrderedJson rows = OrderedJson::array();
        TextTable table({"parameter", "coef dev", "M dev", "ker", "coker", "error", "discrepancy", "ratio", "flags"});
        for (const auto& row : lr.rows) {
            OrderedJson item;
            item["parameter"] = row.parameter;
            item["coefficient_deviation"] = reals_json(row.coefficient_deviation);
            item["characteristic_deviation"] = row.characteristic_deviation;
            item["dim_kernel"] = row.dim_kernel;
            item["dim_cokernel"] = row.dim_cokernel;
            item["well_posed"] = row.well_posed;
            item["solution_error"] = optional_json(row.solution_error);
            item["discrepancy"] = optional_json(row.discrepancy);
            item["ratio"] = optional_json(row.ratio);
            item["flags"] = row.flags;
            rows.push_back(item);
            double coef = 0.0;
            for (double v : row.coefficient_deviation) coef = std::max(coef, v);
            std::string flags;
            for (const auto& f : row.flags) flags += (flags.empty() ? "" : ",") + f;
            table.add({format_real(row.parameter), format_real(coef, 4), format_real(row.characteristic_deviation, 4),
                       std::to_string(row.dim_kernel), std::to_string(row.dim_cokernel), optional_text(row.solution_error),
                       optional_text(row.discrepancy), optional_text(row.ratio), flags.empty() ? "-" : flags});
        }
        c["rows"] = rows;
        c["condition_I"] = lr.condition_I;
        c["characteristic_convergence"] = lr.characteristic_convergence;
        c["solution_convergence"] = lr.solution_convergence;
        c["ratio_min"] = optional_json(lr.ratio_min);
        c["ratio_max"] = optional_json(lr.ratio_max);
        c["error_slope"] = lr.error_slope;
        j["convergence"] = c;
        text << "\nconvergence experiment: solution " << verdict(lr.solution_convergence) << ", error slope "
             << format_real(lr.error_slope, 4) << ", ratio bracket [" << optional_text(lr.ratio_min) << ", "
             << optional_text(lr.ratio_max) << "]\n"
             << table.render();
    }
    out.text = text.str();
    return out;
}

// -- oracle-check --------------------------------------------------------------

namespace {

constexpr double kOracleTolerance = 1e-6;

CMatrix constant_coefficient(const FunctionSpec& f, int m) {
    switch (f.kind) {
        case FunctionSpec::Kind::Constant: return f.terms.front();
        case FunctionSpec::Kind::Polynomial: {
            for (std::size_t k = 1; k < f.terms.size(); ++k) {
                if (!f.terms[k].isZero(0.0)) break;
                if (k + 1 == f.terms.size()) return f.terms.front();
            }
            if (f.terms.size() == 1) return f.terms.front();
            break;
        }
        case FunctionSpec::Kind::Expression: {
            CMatrix out(m, m);
            for (int i = 0; i < m; ++i) {
                for (int k = 0; k < m; ++k) {
                    if (!f.entries[i][k].is_constant()) throw StructuralError("oracle-check needs constant coefficients");
                    out(i, k) = f.entries[i][k].evaluate(0.0);
                }
            }
            return out;
        }
        case FunctionSpec::Kind::Table: break;
    }
    throw StructuralError("oracle-check needs constant coefficients");
}

void require_zero(const CMatrix& a, const std::string& what) {
    if (!a.isZero(0.0)) throw StructuralError("oracle-check: " + what + " must be zero for this example");
}

void accumulate(std::vector<CMatrix>& list, int order, const CMatrix& mat) {
    while (static_cast<int>(list.size()) <= order) list.push_back(CMatrix::Zero(mat.rows(), mat.cols()));
    list[order] += mat;
}

closed_forms::Example example_of(const std::string& tag) {
    static const std::map<std::string, closed_forms::Example> names = {
        {"ex1", closed_forms::Example::Ex1}, {"ex2", closed_forms::Example::Ex2}, {"ex3", closed_forms::Example::Ex3},
        {"ex4", closed_forms::Example::Ex4}, {"ex5", closed_forms::Example::Ex5}};
    return names.at(tag);
}

closed_forms::OracleParameters oracle_parameters(const ProblemDocument& doc, closed_forms::Example ex) {
    using closed_forms::Example;
    const ProblemSpec spec = doc.problem();
    if (spec.boundary.integral_term()) throw StructuralError("oracle-check: closed forms have no integral term");
    const int need_r = (ex == Example::Ex3 || ex == Example::Ex4) ? 2 : 1;
    if (doc.r != need_r) throw StructuralError("oracle-check: this example needs r = " + std::to_string(need_r));
    const int m = doc.m;
    closed_forms::OracleParameters params;
    params.length = doc.b - doc.a;
    switch (ex) {
        case Example::Ex1: params.a = constant_coefficient(doc.coefficients[0], m); break;
        case Example::Ex3:
            require_zero(constant_coefficient(doc.coefficients[0], m), "the order-0 coefficient");
            params.a = constant_coefficient(doc.coefficients[1], m);
            break;
        case Example::Ex4:
            params.a = constant_coefficient(doc.coefficients[0], m);
            require_zero(constant_coefficient(doc.coefficients[1], m), "the order-1 coefficient");
            break;
        case Example::Ex2:
        case Example::Ex5:
            require_zero(constant_coefficient(doc.coefficients[0], m), "the coefficient");
            params.a = CMatrix::Zero(m, m);
            break;
    }
    for (const auto& term : spec.boundary.point_terms()) {
        const bool at_a = term.point == doc.a;
        const bool at_b = term.point == doc.b;
        switch (ex) {
            case Example::Ex2:
                if (term.order == 0) params.alpha.push_back(term.matrix);
                break;
            case Example::Ex1:
            case Example::Ex5:
                if (!at_a) throw StructuralError("oracle-check: this example only has point terms at a");
                if (ex == Example::Ex5 && term.order != 0) throw StructuralError("oracle-check: canonical form has order 0 only");
                accumulate(params.alpha, term.order, term.matrix);
                break;
            case Example::Ex3:
            case Example::Ex4:
                if (at_a) {
                    accumulate(params.alpha, term.order, term.matrix);
                } else if (at_b) {
                    accumulate(params.beta, term.order, term.matrix);
                } else {
                    throw StructuralError("oracle-check: this example only has point terms at a and b");
                }
                break;
        }
    }
    const CMatrix zero = CMatrix::Zero(doc.boundary.rows, m);
    if (params.alpha.empty()) params.alpha.push_back(zero);
    if (!params.beta.empty()) {
        while (params.alpha.size() < params.beta.size()) params.alpha.push_back(zero);
        while (params.beta.size() < params.alpha.size()) params.beta.push_back(zero);
    }
    return params;
}

// -- builtins ------------------------------------------------------------------

Json pair(Complex v) { return Json::array({v.real(), v.imag()}); }

Json random_matrix_json(std::mt19937& rng, int rows, int cols, double norm) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CMatrix x(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int k = 0; k < cols; ++k) x(i, k) = Complex(u(rng), u(rng));
    }
    if (norm > 0.0) x *= norm / entry_sum_norm(x);
    Json out = Json::array();
    for (int i = 0; i < rows; ++i) {
        Json row = Json::array();
        for (int k = 0; k < cols; ++k) row.push_back(pair(x(i, k)));
        out.push_back(row);
    }
    return out;
}

Json constant_json(Json matrix) { return Json{{"kind", "constant"}, {"value", std::move(matrix)}}; }

Json zero_json(int m) {
    Json out = Json::array();
    for (int i = 0; i < m; ++i) out.push_back(Json::array());
    for (auto& row : out) {
        for (int k = 0; k < m; ++k) row.push_back(Json::array({0.0, 0.0}));
    }
    return out;
}

Json identity_json(int m) {
    Json out = zero_json(m);
    for (int i = 0; i < m; ++i) out[i][i] = Json::array({1.0, 0.0});
    return out;
}

Json point_json(double t, int order, Json matrix) {
    return Json{{"t", t}, {"order", order}, {"matrix", std::move(matrix)}};
}

}  // namespace

bool is_builtin_name(const std::string& name) {
    return name == "ex1" || name == "ex2" || name == "ex3" || name == "ex4" || name == "ex5";
}

ProblemDocument builtin_document(const std::string& name) {
    if (!is_builtin_name(name)) throw StructuralError("unknown builtin '" + name + "' (expected ex1..ex5)");
    std::mt19937 rng(20240 + static_cast<unsigned>(name.back() - '0'));
    const int m = 2;
    Json doc;
    doc["example"] = name;
    doc["interval"] = {{"a", 0.0}, {"b", 1.0}};
    doc["p"] = 2.0;
    Json points = Json::array();
    if (name == "ex1") {
        doc["orders"] = {{"r", 1}, {"m", m}, {"n", 2}};
        doc["coefficients"] = Json::array({constant_json(random_matrix_json(rng, m, m, 1.5))});
        for (int k = 0; k <= 2; ++k) points.push_back(point_json(0.0, k, random_matrix_json(rng, m, m, 0.0)));
    } else if (name == "ex2") {
        doc["orders"] = {{"r", 1}, {"m", m}, {"n", 2}};
        doc["coefficients"] = Json::array({constant_json(zero_json(m))});
        points.push_back(point_json(0.2, 0, random_matrix_json(rng, m, m, 0.0)));
        points.push_back(point_json(0.7, 0, random_matrix_json(rng, m, m, 0.0)));
        points.push_back(point_json(0.5, 1, random_matrix_json(rng, m, m, 0.0)));
        points.push_back(point_json(0.9, 2, random_matrix_json(rng, m, m, 0.0)));
    } else if (name == "ex3" || name == "ex4") {
        doc["interval"] = {{"a", 0.0}, {"b", 1.5}};
        doc["orders"] = {{"r", 2}, {"m", m}, {"n", 1}};
        const Json a = constant_json(random_matrix_json(rng, m, m, 1.5));
        doc["coefficients"] = name == "ex3" ? Json::array({constant_json(zero_json(m)), a})
                                            : Json::array({a, constant_json(zero_json(m))});
        for (int k = 0; k <= 2; ++k) {
            points.push_back(point_json(0.0, k, random_matrix_json(rng, 2 * m, m, 0.0)));
            points.push_back(point_json(1.5, k, random_matrix_json(rng, 2 * m, m, 0.0)));
        }
    } else {
        doc["orders"] = {{"r", 1}, {"m", m}, {"n", 0}};
        doc["coefficients"] = Json::array({constant_json(zero_json(m))});
        points.push_back(point_json(0.0, 0, identity_json(m)));
    }
    const int q = (name == "ex3" || name == "ex4") ? 2 * m : m;
    doc["boundary"] = {{"rows", q}, {"points", points}};
    return parse_document(doc);
}

CommandResult oracle_check_command(const std::string& target, const CommandOptions& options) {
    const bool builtin = is_builtin_name(target) && !std::filesystem::exists(target);
    const ProblemDocument doc = builtin ? builtin_document(target) : load_document(target);
    if (!doc.example) throw StructuralError("oracle-check needs an \"example\" tag (ex1..ex5) in the document");
    const auto ex = example_of(*doc.example);
    const auto params = oracle_parameters(doc, ex);
    const CMatrix oracle = closed_forms::oracle_characteristic(ex, params);

    const ProblemSpec spec = doc.problem();
    const Grid grid(spec.interval, options.nodes);
    const CharacteristicMatrix cm = build_characteristic_matrix(spec, grid, rank_policy(options));
    if (cm.entries.rows() != oracle.rows() || cm.entries.cols() != oracle.cols()) {
        throw StructuralError("oracle-check: numerical and closed-form matrices differ in shape");
    }
    const double deviation = (cm.entries - oracle).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, oracle.cwiseAbs().maxCoeff());
    const double relative = deviation / scale;
    const bool agree = relative <= kOracleTolerance;

    CommandResult out;
    out.status = agree ? kSuccess : kError;
    auto& j = out.report;
    j["command"] = "oracle-check";
    j["example"] = *doc.example;
    j["source"] = builtin ? "builtin" : target;
    j["problem"] = problem_json(doc);
    j["nodes"] = options.nodes;
    j["numerical"] = matrix_json(cm.entries);
    j["closed_form"] = matrix_json(oracle);
    j["max_deviation"] = deviation;
    j["relative_deviation"] = relative;
    j["tolerance"] = kOracleTolerance;
    j["agree"] = agree;

    std::ostringstream text;
    text << "oracle-check " << *doc.example << " (" << (builtin ? "builtin" : target) << ")\n" << problem_text(doc);
    text << "numerical:\n" << matrix_text(cm.entries) << "closed form:\n" << matrix_text(oracle);
    text << "max deviation " << format_real(deviation, 3) << "  relative " << format_real(relative, 3) << "  tolerance "
         << format_real(kOracleTolerance, 3) << "  " << (agree ? "agree" : "DISAGREE") << "\n";
    out.text = text.str();
    return out;
}

// -- dispatch ------------------------------------------------------------------

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Solvability analysis of linear ODE boundary-value problems", "fredholm"};
    app.require_subcommand(1);
    app.fallthrough();

    CommandOptions options;
    std::string format = "text";
    std::string out_path;
    std::vector<double> schedule;
    std::size_t series_cap = 0;
    double rank_tol = 0.0;
    std::string target;

    app.add_option("--nodes", options.nodes, "grid nodes")->check(CLI::Range(std::size_t{5}, std::size_t{10000000}));
    auto* rank_opt = app.add_option("--rank-tol", rank_tol, "relative rank tolerance")->check(CLI::PositiveNumber);
    auto* sched_opt =
        app.add_option("--eps-schedule", schedule, "comma-separated parameter schedule")->delimiter(',')->check(CLI::PositiveNumber);
    auto* cap_opt = app.add_option("--series-cap", series_cap, "maximum multipoint series size")->check(CLI::PositiveNumber);
    app.add_option("--format", format, "text or machine")->check(CLI::IsMember({"text", "machine"}));
    app.add_option("--out", out_path, "write the report to a file");

    auto* analyze = app.add_subcommand("analyze", "index, dimensions and characteristic matrix");
    auto* solve_cmd = app.add_subcommand("solve", "solve a well-posed problem");
    auto* family = app.add_subcommand("family", "parameter-family limit experiment");
    auto* oracle = app.add_subcommand("oracle-check", "compare against a closed-form characteristic matrix");
    for (auto* sub : {analyze, solve_cmd, family}) sub->add_option("file", target, "problem document")->required();
    oracle->add_option("target", target, "problem document or builtin ex1..ex5")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kSuccess : kError;
    }
    if (rank_opt->count()) options.rank_tol = rank_tol;
    if (sched_opt->count()) options.schedule = schedule;
    if (cap_opt->count()) options.series_cap = series_cap;
    options.format = format == "machine" ? OutputFormat::Machine : OutputFormat::Text;

    CommandResult result;
    try {
        if (oracle->parsed()) {
            result = oracle_check_command(target, options);
        } else {
            const ProblemDocument doc = load_document(target);
            if (analyze->parsed()) {
                result = analyze_command(doc, options);
            } else if (solve_cmd->parsed()) {
                result = solve_command(doc, options);
            } else {
                result = family_command(doc, options);
            }
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kError;
    }

    const std::string rendered = result.render(options.format);
    if (!out_path.empty()) {
        std::ofstream file(out_path, std::ios::binary);
        if (!file || !(file << rendered)) {
            err << "error: cannot write " << out_path << "\n";
            return kError;
        }
    } else {
        out << rendered;
    }
    return result.status;
}

}  // namespace fredholm::cli
