#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fredholm/cli/expression.hpp"
#include "fredholm/limits.hpp"

namespace fredholm::cli {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

/// Matrix whose entries are constants ([re, im] in documents) or expressions.
using ExpressionMatrix = std::vector<std::vector<Expression>>;

/// A matrix-valued function of t (and eps inside family sections).
struct FunctionSpec {
    enum class Kind { Constant, Polynomial, Table, Expression };
    Kind kind = Kind::Constant;
    int rows = 0;
    int cols = 0;
    std::vector<CMatrix> terms;  // constant: one; polynomial: coefficients; table: node values
    double origin = 0.0;         // polynomial
    ExpressionMatrix entries;    // expression

    bool depends_on_eps() const;
    /// `max_order` derivatives are exposed; expressions differentiate symbolically.
    MatrixFunction build(const Interval& interval, int max_order, double eps) const;
};

struct PointSpec {
    Expression point;
    int order = 0;
    ExpressionMatrix matrix;
};

struct BoundarySpec {
    int rows = 0;
    std::vector<PointSpec> points;
    std::optional<FunctionSpec> integral;

    BoundaryOperator build(const Interval& interval, double eps) const;
};

struct RhsSpec {
    FunctionSpec forcing;           // m x 1
    std::vector<Expression> values;  // c, length q
};

struct SeriesSpec {
    std::optional<double> limit_point;      // absent for the zero series
    std::vector<CMatrix> limit_matrices;    // one per order d = 0..n+r-1
    std::vector<Expression> points;         // expressions in eps
    std::vector<std::vector<ExpressionMatrix>> matrices;  // [k][d], expressions in eps
};

struct MultipointSpec {
    std::vector<SeriesSpec> series;
    std::vector<Expression> data;  // q(eps)
    std::size_t series_cap = 64;
};

struct FamilySpec {
    std::vector<double> schedule = kDefaultSchedule;
    LimitDirection direction = LimitDirection::ParameterToZero;
    std::optional<std::vector<FunctionSpec>> coefficients;
    std::optional<BoundarySpec> boundary;
    std::optional<RhsSpec> rhs;
    std::optional<MultipointSpec> multipoint;
};

/// In-memory form of a problem file. The top-level sections describe the
/// problem at eps = 0; the optional family section overrides parts of it with
/// eps-dependent versions.
struct ProblemDocument {
    double a = 0.0;
    double b = 1.0;
    int r = 1;
    int m = 1;
    int n = 0;
    double p = 2.0;  // LebesgueExponent::kInfinity for "inf"
    std::vector<FunctionSpec> coefficients;
    BoundarySpec boundary;
    std::optional<RhsSpec> rhs;
    std::optional<FamilySpec> family;
    std::optional<std::string> example;  // ex1..ex5 tag for oracle-check

    Interval interval() const { return Interval(a, b); }

    /// The top-level problem.
    ProblemSpec problem() const;
    /// Family member at eps (overrides applied); requires the family section.
    ProblemSpec member(double eps) const;
    ProblemFamily problem_family(std::optional<std::vector<double>> schedule = std::nullopt) const;
    std::optional<MultipointFamily> multipoint_family() const;
};

/// Validates against the schema; errors name the offending JSON path.
ProblemDocument parse_document(const Json& json);
ProblemDocument parse_document_text(const std::string& text);
ProblemDocument load_document(const std::string& path);

OrderedJson to_json(const ProblemDocument& doc);

}  // namespace fredholm::cli
