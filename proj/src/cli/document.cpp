#include "fredholm/cli/document.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace fredholm::cli {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw StructuralError(path + ": " + what);
}

std::string at_index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }
std::string at_key(const std::string& path, const std::string& key) { return path + "." + key; }

void check_keys(const Json& obj, const std::set<std::string>& allowed, const std::string& path) {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) fail(path, "unknown field '" + key + "'");
    }
}

const Json& require(const Json& obj, const std::string& key, const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end()) fail(path, "missing field '" + key + "'");
    return *it;
}

const Json& array_of(const Json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array");
    return j;
}

double number_of(const Json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "expected a finite number");
    return v;
}

int integer_of(const Json& j, const std::string& path, int min) {
    if (j.is_number_float()) {
        const double v = j.get<double>();
        if (v != std::floor(v)) fail(path, "expected an integer, got " + j.dump());
    } else if (!j.is_number_integer()) {
        fail(path, "expected an integer");
    }
    const auto v = j.get<long long>();
    if (v < min) fail(path, "must be at least " + std::to_string(min));
    return static_cast<int>(v);
}

Complex pair_of(const Json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) fail(path, "complex scalars are written as [re, im]");
    return Complex(number_of(j[0], at_index(path, 0)), number_of(j[1], at_index(path, 1)));
}

struct Allowed {
    bool t = false;
    bool eps = false;
};

Expression expression_of(const Json& j, const std::string& path, Allowed allowed) {
    if (j.is_array()) return Expression::constant(pair_of(j, path));
    if (!j.is_string()) fail(path, "expected [re, im] or an expression string");
    Expression e = Expression::constant(0.0);
    try {
        e = Expression::parse(j.get<std::string>());
    } catch (const ExpressionError& err) {
        fail(path, err.what());
    }
    if (!allowed.t && e.depends_on(Variable::T)) fail(path, "'t' is not allowed here");
    if (!allowed.eps && e.depends_on(Variable::Eps)) fail(path, "'eps' is only allowed inside the family section");
    return e;
}

// Real point location: a number or an expression.
Expression point_of(const Json& j, const std::string& path, Allowed allowed) {
    if (j.is_number()) return Expression::constant(number_of(j, path));
    if (!j.is_string()) fail(path, "expected a number or an expression string");
    return expression_of(j, path, allowed);
}

void check_shape(const Json& j, int rows, int cols, const std::string& path) {
    if (!j.is_array() || static_cast<int>(j.size()) != rows) {
        fail(path, "expected " + std::to_string(rows) + " rows");
    }
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_array() || static_cast<int>(j[i].size()) != cols) {
            fail(at_index(path, i), "expected " + std::to_string(cols) + " columns");
        }
    }
}

CMatrix constant_matrix(const Json& j, int rows, int cols, const std::string& path) {
    check_shape(j, rows, cols, path);
    CMatrix out(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int k = 0; k < cols; ++k) out(i, k) = pair_of(j[i][k], at_index(at_index(path, i), k));
    }
    return out;
}

ExpressionMatrix expression_matrix(const Json& j, int rows, int cols, const std::string& path, Allowed allowed) {
    check_shape(j, rows, cols, path);
    ExpressionMatrix out(rows);
    for (int i = 0; i < rows; ++i) {
        for (int k = 0; k < cols; ++k) {
            out[i].push_back(expression_of(j[i][k], at_index(at_index(path, i), k), allowed));
        }
    }
    return out;
}

std::vector<Expression> expression_vector(const Json& j, int size, const std::string& path, Allowed allowed) {
    if (!j.is_array() || static_cast<int>(j.size()) != size) fail(path, "expected " + std::to_string(size) + " entries");
    std::vector<Expression> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(expression_of(j[i], at_index(path, i), allowed));
    return out;
}

FunctionSpec function_of(const Json& j, int rows, int cols, const std::string& path, bool allow_eps) {
    const std::string kind = require(j, "kind", path).is_string() ? j["kind"].get<std::string>() : "";
    FunctionSpec f;
    f.rows = rows;
    f.cols = cols;
    if (kind == "constant") {
        check_keys(j, {"kind", "value"}, path);
        f.kind = FunctionSpec::Kind::Constant;
        f.terms = {constant_matrix(require(j, "value", path), rows, cols, at_key(path, "value"))};
    } else if (kind == "polynomial") {
        check_keys(j, {"kind", "origin", "terms"}, path);
        f.kind = FunctionSpec::Kind::Polynomial;
        if (j.contains("origin")) f.origin = number_of(j["origin"], at_key(path, "origin"));
        const auto& terms = array_of(require(j, "terms", path), at_key(path, "terms"));
        if (terms.empty()) fail(at_key(path, "terms"), "needs at least one term");
        for (std::size_t i = 0; i < terms.size(); ++i) {
            f.terms.push_back(constant_matrix(terms[i], rows, cols, at_index(at_key(path, "terms"), i)));
        }
    } else if (kind == "table") {
        check_keys(j, {"kind", "values"}, path);
        f.kind = FunctionSpec::Kind::Table;
        const auto& values = array_of(require(j, "values", path), at_key(path, "values"));
        if (values.size() < 5) fail(at_key(path, "values"), "tables need at least five uniformly spaced samples");
        for (std::size_t i = 0; i < values.size(); ++i) {
            f.terms.push_back(constant_matrix(values[i], rows, cols, at_index(at_key(path, "values"), i)));
        }
    } else if (kind == "expression") {
        check_keys(j, {"kind", "entries"}, path);
        f.kind = FunctionSpec::Kind::Expression;
        f.entries = expression_matrix(require(j, "entries", path), rows, cols, at_key(path, "entries"),
                                      Allowed{true, allow_eps});
    } else {
        fail(at_key(path, "kind"), "expected constant, polynomial, table or expression");
    }
    return f;
}

std::vector<FunctionSpec> coefficients_of(const Json& j, int r, int m, const std::string& path, bool allow_eps) {
    array_of(j, path);
    if (static_cast<int>(j.size()) != r) fail(path, "expected r = " + std::to_string(r) + " coefficients");
    std::vector<FunctionSpec> out;
    for (std::size_t k = 0; k < j.size(); ++k) out.push_back(function_of(j[k], m, m, at_index(path, k), allow_eps));
    return out;
}

BoundarySpec boundary_of(const Json& j, int m, const std::string& path, bool allow_eps) {
    check_keys(j, {"rows", "points", "integral"}, path);
    BoundarySpec out;
    out.rows = integer_of(require(j, "rows", path), at_key(path, "rows"), 1);
    const auto& points = array_of(require(j, "points", path), at_key(path, "points"));
    for (std::size_t i = 0; i < points.size(); ++i) {
        const std::string p = at_index(at_key(path, "points"), i);
        check_keys(points[i], {"t", "order", "matrix"}, p);
        const Json& order = require(points[i], "order", p);
        if (order.is_number() && order.get<double>() != std::floor(order.get<double>())) {
            fail(at_key(p, "order"), fractional_order_diagnostic(order.get<double>()).message);
        }
        PointSpec spec{point_of(require(points[i], "t", p), at_key(p, "t"), Allowed{false, allow_eps}),
                       integer_of(order, at_key(p, "order"), 0),
                       expression_matrix(require(points[i], "matrix", p), out.rows, m, at_key(p, "matrix"),
                                         Allowed{false, allow_eps})};
        out.points.push_back(std::move(spec));
    }
    if (j.contains("integral")) {
        const std::string p = at_key(path, "integral");
        check_keys(j["integral"], {"phi"}, p);
        out.integral = function_of(require(j["integral"], "phi", p), out.rows, m, at_key(p, "phi"), allow_eps);
    }
    return out;
}

RhsSpec rhs_of(const Json& j, int m, int q, const std::string& path, bool allow_eps) {
    check_keys(j, {"f", "c"}, path);
    return RhsSpec{function_of(require(j, "f", path), m, 1, at_key(path, "f"), allow_eps),
                   expression_vector(require(j, "c", path), q, at_key(path, "c"), Allowed{false, allow_eps})};
}

MultipointSpec multipoint_of(const Json& j, const ProblemDocument& doc, const std::string& path) {
    check_keys(j, {"series", "data", "series_cap"}, path);
    MultipointSpec out;
    const int rows = doc.r * doc.m;
    const int top = doc.n + doc.r;
    if (j.contains("series_cap")) out.series_cap = integer_of(j["series_cap"], at_key(path, "series_cap"), 1);
    out.data = expression_vector(require(j, "data", path), rows, at_key(path, "data"), Allowed{false, true});
    const auto& series = array_of(require(j, "series", path), at_key(path, "series"));
    for (std::size_t s = 0; s < series.size(); ++s) {
        const std::string p = at_index(at_key(path, "series"), s);
        check_keys(series[s], {"limit_point", "limit_matrices", "points", "matrices"}, p);
        SeriesSpec spec;
        if (series[s].contains("limit_point") && !series[s]["limit_point"].is_null()) {
            spec.limit_point = number_of(series[s]["limit_point"], at_key(p, "limit_point"));
            const auto& lims = array_of(require(series[s], "limit_matrices", p), at_key(p, "limit_matrices"));
            if (static_cast<int>(lims.size()) != top) fail(at_key(p, "limit_matrices"), "expected one matrix per order 0..n+r-1");
            for (std::size_t d = 0; d < lims.size(); ++d) {
                spec.limit_matrices.push_back(constant_matrix(lims[d], rows, doc.m, at_index(at_key(p, "limit_matrices"), d)));
            }
        } else if (series[s].contains("limit_matrices")) {
            fail(p, "the zero series (no limit_point) takes no limit_matrices");
        }
        const auto& pts = array_of(require(series[s], "points", p), at_key(p, "points"));
        const auto& mats = array_of(require(series[s], "matrices", p), at_key(p, "matrices"));
        if (pts.size() != mats.size()) fail(p, "points and matrices differ in count");
        if (pts.size() > out.series_cap) fail(p, "series exceeds the size cap of " + std::to_string(out.series_cap));
        for (std::size_t k = 0; k < pts.size(); ++k) {
            spec.points.push_back(point_of(pts[k], at_index(at_key(p, "points"), k), Allowed{false, true}));
            const std::string mp = at_index(at_key(p, "matrices"), k);
            const auto& per_order = array_of(mats[k], mp);
            if (static_cast<int>(per_order.size()) != top) fail(mp, "expected one matrix per order 0..n+r-1");
            std::vector<ExpressionMatrix> row;
            for (std::size_t d = 0; d < per_order.size(); ++d) {
                row.push_back(expression_matrix(per_order[d], rows, doc.m, at_index(mp, d), Allowed{false, true}));
            }
            spec.matrices.push_back(std::move(row));
        }
        out.series.push_back(std::move(spec));
    }
    return out;
}

FamilySpec family_of(const Json& j, const ProblemDocument& doc, const std::string& path) {
    check_keys(j, {"schedule", "direction", "coefficients", "boundary", "rhs", "multipoint"}, path);
    FamilySpec out;
    if (j.contains("direction")) {
        const auto& d = j["direction"];
        if (d == "eps->0") {
            out.direction = LimitDirection::ParameterToZero;
        } else if (d == "k->inf") {
            out.direction = LimitDirection::IndexToInfinity;
        } else {
            fail(at_key(path, "direction"), "expected \"eps->0\" or \"k->inf\"");
        }
    }
    if (j.contains("schedule")) {
        const auto& s = array_of(j["schedule"], at_key(path, "schedule"));
        out.schedule.clear();
        for (std::size_t i = 0; i < s.size(); ++i) {
            const double v = number_of(s[i], at_index(at_key(path, "schedule"), i));
            if (!(v > 0.0)) fail(at_index(at_key(path, "schedule"), i), "schedule values must be positive");
            out.schedule.push_back(v);
        }
        if (out.schedule.empty()) fail(at_key(path, "schedule"), "schedule must not be empty");
    }
    if (j.contains("coefficients")) {
        out.coefficients = coefficients_of(j["coefficients"], doc.r, doc.m, at_key(path, "coefficients"), true);
    }
    if (j.contains("boundary")) out.boundary = boundary_of(j["boundary"], doc.m, at_key(path, "boundary"), true);
    const int q = out.boundary ? out.boundary->rows : doc.boundary.rows;
    if (j.contains("rhs")) out.rhs = rhs_of(j["rhs"], doc.m, q, at_key(path, "rhs"), true);
    if (j.contains("multipoint")) {
        if (out.boundary) fail(path, "multipoint and boundary overrides are mutually exclusive");
        out.multipoint = multipoint_of(j["multipoint"], doc, at_key(path, "multipoint"));
    }
    return out;
}

// -- serialization ------------------------------------------------------------

OrderedJson pair_json(Complex v) { return OrderedJson::array({v.real(), v.imag()}); }

OrderedJson matrix_json(const CMatrix& m) {
    OrderedJson out = OrderedJson::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        OrderedJson row = OrderedJson::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(pair_json(m(i, k)));
        out.push_back(row);
    }
    return out;
}

OrderedJson expression_json(const Expression& e) {
    if (e.root().op == Expression::Op::Number) return pair_json(e.root().value);
    return e.to_string();
}

OrderedJson point_json(const Expression& e) {
    if (e.root().op == Expression::Op::Number && e.root().value.imag() == 0.0) return e.root().value.real();
    return e.to_string();
}

OrderedJson expression_matrix_json(const ExpressionMatrix& m) {
    OrderedJson out = OrderedJson::array();
    for (const auto& row : m) {
        OrderedJson r = OrderedJson::array();
        for (const auto& e : row) r.push_back(expression_json(e));
        out.push_back(r);
    }
    return out;
}

OrderedJson vector_json(const std::vector<Expression>& v) {
    OrderedJson out = OrderedJson::array();
    for (const auto& e : v) out.push_back(expression_json(e));
    return out;
}

OrderedJson function_json(const FunctionSpec& f) {
    OrderedJson out;
    switch (f.kind) {
        case FunctionSpec::Kind::Constant:
            out["kind"] = "constant";
            out["value"] = matrix_json(f.terms.front());
            break;
        case FunctionSpec::Kind::Polynomial: {
            out["kind"] = "polynomial";
            out["origin"] = f.origin;
            OrderedJson terms = OrderedJson::array();
            for (const auto& t : f.terms) terms.push_back(matrix_json(t));
            out["terms"] = terms;
            break;
        }
        case FunctionSpec::Kind::Table: {
            out["kind"] = "table";
            OrderedJson values = OrderedJson::array();
            for (const auto& t : f.terms) values.push_back(matrix_json(t));
            out["values"] = values;
            break;
        }
        case FunctionSpec::Kind::Expression:
            out["kind"] = "expression";
            out["entries"] = expression_matrix_json(f.entries);
            break;
    }
    return out;
}

OrderedJson boundary_json(const BoundarySpec& b) {
    OrderedJson out;
    out["rows"] = b.rows;
    OrderedJson points = OrderedJson::array();
    for (const auto& p : b.points) {
        OrderedJson pj;
        pj["t"] = point_json(p.point);
        pj["order"] = p.order;
        pj["matrix"] = expression_matrix_json(p.matrix);
        points.push_back(pj);
    }
    out["points"] = points;
    if (b.integral) out["integral"] = OrderedJson{{"phi", function_json(*b.integral)}};
    return out;
}

OrderedJson rhs_json(const RhsSpec& r) {
    OrderedJson out;
    out["f"] = function_json(r.forcing);
    out["c"] = vector_json(r.values);
    return out;
}

CMatrix evaluate_matrix(const ExpressionMatrix& m, double t, double eps) {
    CMatrix out(static_cast<Eigen::Index>(m.size()), m.empty() ? 0 : static_cast<Eigen::Index>(m.front().size()));
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t k = 0; k < m[i].size(); ++k) out(i, k) = m[i][k].evaluate(t, eps);
    }
    return out;
}

double real_point(const Expression& e, double eps) {
    const Complex v = e.evaluate(0.0, eps);
    if (v.imag() != 0.0 || !std::isfinite(v.real())) {
        throw StructuralError("boundary point " + e.to_string() + " does not evaluate to a finite real number");
    }
    return v.real();
}

}  // namespace

bool FunctionSpec::depends_on_eps() const {
    for (const auto& row : entries) {
        for (const auto& e : row) {
            if (e.depends_on(Variable::Eps)) return true;
        }
    }
    return false;
}

MatrixFunction FunctionSpec::build(const Interval& interval, int max_order, double eps) const {
    switch (kind) {
        case Kind::Constant: return MatrixFunction::constant(terms.front());
        case Kind::Polynomial: return MatrixFunction::polynomial(terms, origin);
        case Kind::Table:
            return MatrixFunction::tabulated_with_differences(Grid(interval, terms.size()), terms, max_order);
        case Kind::Expression: {
            std::vector<ExpressionMatrix> derivatives{entries};
            for (int k = 1; k <= max_order; ++k) {
                ExpressionMatrix next = derivatives.back();
                for (auto& row : next) {
                    for (auto& e : row) e = e.derivative(Variable::T);
                }
                derivatives.push_back(std::move(next));
            }
            return MatrixFunction::callable(
                rows, cols,
                [derivatives = std::move(derivatives), eps](double t, int order) {
                    return evaluate_matrix(derivatives[order], t, eps);
                },
                max_order);
        }
    }
    throw StructuralError("unknown function kind");
}

BoundaryOperator BoundarySpec::build(const Interval& interval, double eps) const {
    BoundaryOperator op(rows);
    for (const auto& p : points) op.add_point(real_point(p.point, eps), p.order, evaluate_matrix(p.matrix, 0.0, eps));
    if (integral) op.set_integral(integral->build(interval, 0, eps));
    return op;
}

namespace {

CoefficientSet build_coefficients(const ProblemDocument& doc, const std::vector<FunctionSpec>& specs, double eps) {
    CoefficientSet set;
    set.order = doc.r;
    set.dimension = doc.m;
    set.smoothness = doc.n;
    for (const auto& f : specs) set.coefficients.push_back(f.build(doc.interval(), doc.n, eps));
    return set;
}

std::optional<RightHandSide> build_rhs(const ProblemDocument& doc, const std::optional<RhsSpec>& spec, double eps) {
    if (!spec) return std::nullopt;
    CVector c(static_cast<Eigen::Index>(spec->values.size()));
    for (std::size_t i = 0; i < spec->values.size(); ++i) c(i) = spec->values[i].evaluate(0.0, eps);
    return RightHandSide{spec->forcing.build(doc.interval(), doc.n, eps), c};
}

}  // namespace

ProblemSpec ProblemDocument::problem() const {
    return ProblemSpec{interval(), build_coefficients(*this, coefficients, 0.0), boundary.build(interval(), 0.0),
                       LebesgueExponent(p), build_rhs(*this, rhs, 0.0)};
}

ProblemSpec ProblemDocument::member(double eps) const {
    if (!family) throw StructuralError("document has no family section");
    const auto& f = *family;
    const auto& coeffs = f.coefficients ? *f.coefficients : coefficients;
    const auto& bnd = f.boundary ? *f.boundary : boundary;
    const auto& rhs_spec = f.rhs ? f.rhs : rhs;
    return ProblemSpec{interval(), build_coefficients(*this, coeffs, eps), bnd.build(interval(), eps),
                       LebesgueExponent(p), build_rhs(*this, rhs_spec, eps)};
}

std::optional<MultipointFamily> ProblemDocument::multipoint_family() const {
    if (!family || !family->multipoint) return std::nullopt;
    const auto& spec = *family->multipoint;
    MultipointFamily out;
    out.rows = r * m;
    out.dimension = m;
    out.top_order = n + r;
    out.series_cap = spec.series_cap;
    for (const auto& s : spec.series) {
        MultipointSeries series;
        series.limit_point = s.limit_point;
        series.limit_matrices = s.limit_matrices;
        series.at = [s](double eps) {
            SeriesSnapshot snap;
            for (std::size_t k = 0; k < s.points.size(); ++k) {
                snap.points.push_back(real_point(s.points[k], eps));
                std::vector<CMatrix> per_order;
                for (const auto& mat : s.matrices[k]) per_order.push_back(evaluate_matrix(mat, 0.0, eps));
                snap.matrices.push_back(std::move(per_order));
            }
            return snap;
        };
        out.series.push_back(std::move(series));
    }
    out.data = [data = spec.data](double eps) {
        CVector v(static_cast<Eigen::Index>(data.size()));
        for (std::size_t i = 0; i < data.size(); ++i) v(i) = data[i].evaluate(0.0, eps);
        return v;
    };
    return out;
}

ProblemFamily ProblemDocument::problem_family(std::optional<std::vector<double>> schedule) const {
    if (!family) throw StructuralError("document has no family section");
    const auto doc = std::make_shared<const ProblemDocument>(*this);
    const bool index = family->direction == LimitDirection::IndexToInfinity;
    // Index families: schedule holds k, expressions see eps = 1/k.
    auto to_eps = [index](double s) { return index ? 1.0 / s : s; };
    std::vector<double> sched = schedule.value_or(family->schedule);
    if (auto mp = multipoint_family()) {
        auto base = [doc](double eps) { return doc->member(eps); };
        ProblemFamily out = multipoint_problem_family(*mp, base, sched);
        auto inner = out.at;
        out.at = [inner, to_eps](double s) { return inner(to_eps(s)); };
        out.direction = family->direction;
        return out;
    }
    ProblemFamily out{sched, problem(), [doc, to_eps](double s) { return doc->member(to_eps(s)); }};
    out.direction = family->direction;
    return out;
}

ProblemDocument parse_document(const Json& json) {
    const std::string root = "$";
    check_keys(json, {"interval", "orders", "p", "coefficients", "boundary", "rhs", "family", "example"}, root);
    ProblemDocument doc;

    const auto& interval = require(json, "interval", root);
    check_keys(interval, {"a", "b"}, at_key(root, "interval"));
    doc.a = number_of(require(interval, "a", at_key(root, "interval")), "$.interval.a");
    doc.b = number_of(require(interval, "b", at_key(root, "interval")), "$.interval.b");
    if (!(doc.a < doc.b)) fail("$.interval", "requires a < b");

    const auto& orders = require(json, "orders", root);
    check_keys(orders, {"r", "m", "n"}, "$.orders");
    doc.r = integer_of(require(orders, "r", "$.orders"), "$.orders.r", 1);
    doc.m = integer_of(require(orders, "m", "$.orders"), "$.orders.m", 1);
    doc.n = integer_of(require(orders, "n", "$.orders"), "$.orders.n", 0);

    if (json.contains("p")) {
        const auto& p = json["p"];
        if (p.is_string() && p == "inf") {
            doc.p = LebesgueExponent::kInfinity;
        } else {
            doc.p = number_of(p, "$.p");
            if (doc.p < 1.0) fail("$.p", "must be >= 1 or \"inf\"");
        }
    }

    doc.coefficients = coefficients_of(require(json, "coefficients", root), doc.r, doc.m, "$.coefficients", false);
    doc.boundary = boundary_of(require(json, "boundary", root), doc.m, "$.boundary", false);
    if (json.contains("rhs")) doc.rhs = rhs_of(json["rhs"], doc.m, doc.boundary.rows, "$.rhs", false);
    if (json.contains("family")) doc.family = family_of(json["family"], doc, "$.family");
    if (json.contains("example")) {
        const auto& e = json["example"];
        static const std::set<std::string> names = {"ex1", "ex2", "ex3", "ex4", "ex5"};
        if (!e.is_string() || !names.count(e.get<std::string>())) fail("$.example", "expected one of ex1..ex5");
        doc.example = e.get<std::string>();
    }
    // Build once so that structural problems surface at load time.
    doc.problem().validate();
    return doc;
}

ProblemDocument parse_document_text(const std::string& text) {
    Json json;
    try {
        json = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw StructuralError(std::string("malformed document: ") + e.what());
    }
    return parse_document(json);
}

ProblemDocument load_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw StructuralError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_document_text(buf.str());
}

OrderedJson to_json(const ProblemDocument& doc) {
    OrderedJson out;
    out["interval"] = OrderedJson{{"a", doc.a}, {"b", doc.b}};
    out["orders"] = OrderedJson{{"r", doc.r}, {"m", doc.m}, {"n", doc.n}};
    if (doc.p == LebesgueExponent::kInfinity) {
        out["p"] = "inf";
    } else {
        out["p"] = doc.p;
    }
    OrderedJson coeffs = OrderedJson::array();
    for (const auto& f : doc.coefficients) coeffs.push_back(function_json(f));
    out["coefficients"] = coeffs;
    out["boundary"] = boundary_json(doc.boundary);
    if (doc.rhs) out["rhs"] = rhs_json(*doc.rhs);
    if (doc.family) {
        const auto& f = *doc.family;
        OrderedJson fam;
        fam["schedule"] = f.schedule;
        fam["direction"] = f.direction == LimitDirection::ParameterToZero ? "eps->0" : "k->inf";
        if (f.coefficients) {
            OrderedJson c = OrderedJson::array();
            for (const auto& x : *f.coefficients) c.push_back(function_json(x));
            fam["coefficients"] = c;
        }
        if (f.boundary) fam["boundary"] = boundary_json(*f.boundary);
        if (f.rhs) fam["rhs"] = rhs_json(*f.rhs);
        if (f.multipoint) {
            OrderedJson mp;
            OrderedJson series = OrderedJson::array();
            for (const auto& s : f.multipoint->series) {
                OrderedJson sj;
                if (s.limit_point) {
                    sj["limit_point"] = *s.limit_point;
                    OrderedJson lims = OrderedJson::array();
                    for (const auto& l : s.limit_matrices) lims.push_back(matrix_json(l));
                    sj["limit_matrices"] = lims;
                } else {
                    sj["limit_point"] = nullptr;
                }
                OrderedJson pts = OrderedJson::array();
                for (const auto& p : s.points) pts.push_back(point_json(p));
                sj["points"] = pts;
                OrderedJson mats = OrderedJson::array();
                for (const auto& per_order : s.matrices) {
                    OrderedJson po = OrderedJson::array();
                    for (const auto& mat : per_order) po.push_back(expression_matrix_json(mat));
                    mats.push_back(po);
                }
                sj["matrices"] = mats;
                series.push_back(sj);
            }
            mp["series"] = series;
            mp["data"] = vector_json(f.multipoint->data);
            mp["series_cap"] = f.multipoint->series_cap;
            fam["multipoint"] = mp;
        }
        out["family"] = fam;
    }
    if (doc.example) out["example"] = *doc.example;
    return out;
}

}  // namespace fredholm::cli
