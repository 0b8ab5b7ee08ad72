// One PASS/FAIL line per acceptance criterion. Tolerances are fixed here and
// match the published criteria; exit status is nonzero if any line fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "fredholm/closed_forms.hpp"
#include "fredholm/limits.hpp"
#include "test_support.hpp"

using namespace fredholm;
using closed_forms::Example;
using closed_forms::OracleParameters;
using testing::max_abs;
using testing::random_matrix;
using testing::relative_deviation;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    std::string failures;

    void require(bool ok, const std::string& what) {
        if (ok) return;
        if (failures.find(what) == std::string::npos) failures += (failures.empty() ? "" : "; ") + what;
        pass = false;
    }
    std::string text() const { return failures.empty() ? detail.str() : detail.str() + " | failed: " + failures; }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

CMatrix numerical(const ProblemSpec& spec, std::size_t nodes = 1001) {
    return build_characteristic_matrix(spec, Grid(spec.interval, nodes)).entries;
}

CMatrix with_sum_norm(CMatrix m, double norm) { return m * (norm / entry_sum_norm(m)); }

const std::vector<double> kLongSchedule = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};

// -- AC1 ---------------------------------------------------------------------------

void first_order_oracle(Outcome& out) {
    constexpr double kTolerance = 1e-6;
    constexpr double kSeconds = 5.0;
    constexpr std::size_t kNodes = 2001;
    std::mt19937 rng(1001);
    double worst = 0.0, slowest = 0.0;
    int count = 0;
    for (int m : {2, 3}) {
        for (int trial = 0; trial < 5; ++trial) {
            OracleParameters params;
            // entrywise-sum norm 2 bounds the spectral norm by 2 as well
            params.a = with_sum_norm(random_matrix(rng, m, m), 2.0 * (trial + 1) / 5.0);
            for (int k = 0; k <= 2; ++k) params.alpha.push_back(random_matrix(rng, m, m));
            const auto spec = testing::example_problem(Example::Ex1, params);
            const auto start = std::chrono::steady_clock::now();
            const CMatrix got = numerical(spec, kNodes);
            const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            worst = std::max(worst, relative_deviation(got, closed_forms::oracle_characteristic(Example::Ex1, params)));
            slowest = std::max(slowest, seconds);
            ++count;
        }
    }
    out.require(worst <= kTolerance, "relative deviation " + fmt(worst) + " > 1e-6");
    out.require(slowest < kSeconds, "runtime " + fmt(slowest) + " s");
    out.detail << count << " problems, max relative deviation " << fmt(worst) << ", slowest " << fmt(slowest)
               << " s at " << kNodes << " nodes";
}

// -- AC2 ---------------------------------------------------------------------------

void pure_derivative_oracle(Outcome& out) {
    constexpr double kTolerance = 1e-10;
    std::mt19937 rng(1002);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0, spread = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const int m = 1 + trial % 3;
        const int q = m;
        const double left = -1.0 + 0.5 * trial, length = 0.5 + u(rng);
        CMatrix expected = CMatrix::Zero(q, m);
        std::vector<CMatrix> order0;
        for (int j = 0; j < 3; ++j) {
            order0.push_back(random_matrix(rng, q, m));
            expected += order0.back();
        }
        auto build = [&](std::mt19937& g) {
            CoefficientSet coeffs = CoefficientSet::zero(1, m, 2);
            BoundaryOperator op(q);
            for (const auto& mat : order0) op.add_point(left + length * u(g), 0, mat);
            // higher orders at arbitrary points with arbitrary matrices
            for (int d = 1; d <= 2; ++d) op.add_point(left + length * u(g), d, random_matrix(g, q, m, 5.0));
            return ProblemSpec{Interval(left, left + length), coeffs, op, LebesgueExponent(2), std::nullopt};
        };
        std::mt19937 g1(static_cast<unsigned>(trial)), g2(static_cast<unsigned>(trial + 100));
        const CMatrix first = numerical(build(g1));
        const CMatrix second = numerical(build(g2));
        worst = std::max({worst, max_abs(first - expected), max_abs(second - expected)});
        spread = std::max(spread, max_abs(first - second));
    }
    out.require(worst <= kTolerance, "deviation " + fmt(worst));
    out.require(spread <= kTolerance, "depends on points/higher orders by " + fmt(spread));
    out.detail << "10 problems, max |M - sum alpha_k0| " << fmt(worst) << ", change under new points/orders "
               << fmt(spread);
}

// -- AC3 ---------------------------------------------------------------------------

void second_order_oracle(Outcome& out) {
    constexpr double kTolerance = 1e-6;
    std::mt19937 rng(1003);
    const int m = 2, q = 4;  // n = 1: orders 0..2 in the boundary terms
    double worst = 0.0;
    double ex4_change = 0.0, ex3_one_point_change = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
        OracleParameters params;
        params.a = testing::random_matrix_with_norm(rng, m, 1.5);
        for (int k = 0; k <= 2; ++k) {
            params.alpha.push_back(random_matrix(rng, q, m));
            params.beta.push_back(random_matrix(rng, q, m));
        }
        std::vector<CMatrix> ex4_by_length, ex3_one_by_length;
        for (double length : {1.0, 2.5}) {
            params.length = length;
            for (Example ex : {Example::Ex3, Example::Ex4}) {
                const CMatrix got = numerical(testing::example_problem(ex, params));
                worst = std::max(worst, relative_deviation(got, closed_forms::oracle_characteristic(ex, params)));
                if (ex == Example::Ex4) ex4_by_length.push_back(got);
            }
            OracleParameters one_point = params;
            one_point.beta.clear();
            const CMatrix got = numerical(testing::example_problem(Example::Ex3, one_point));
            worst = std::max(worst, relative_deviation(got, closed_forms::oracle_characteristic(Example::Ex3, one_point)));
            ex3_one_by_length.push_back(got);
        }
        ex4_change = trial == 0 ? relative_deviation(ex4_by_length[0], ex4_by_length[1])
                                : std::min(ex4_change, relative_deviation(ex4_by_length[0], ex4_by_length[1]));
        ex3_one_point_change = std::max(ex3_one_point_change, relative_deviation(ex3_one_by_length[0], ex3_one_by_length[1]));
    }
    out.require(worst <= kTolerance, "relative deviation " + fmt(worst));
    out.require(ex4_change > 1e-3, "restoring-term matrix does not change with length");
    out.require(ex3_one_point_change <= 1e-12, "one-point damping-term matrix changes with length");
    out.detail << "lengths 1 and 2.5, max relative deviation " << fmt(worst) << ", restoring-term change "
               << fmt(ex4_change) << ", one-point change " << fmt(ex3_one_point_change);
}

// -- AC4 / AC5 ------------------------------------------------------------------------

struct RandomProblem {
    ProblemSpec spec;
    int r, m, q;
};

std::vector<RandomProblem> random_corpus() {
    std::mt19937 rng(1004);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<RandomProblem> out;
    for (int rep = 0; rep < 4; ++rep) {
        for (int r : {1, 2}) {
            for (int m : {1, 2, 3}) {
                for (int dq : {-1, 0, 1}) {
                    const int q = r * m + dq;
                    if (q < 1) continue;
                    CoefficientSet coeffs;
                    coeffs.order = r;
                    coeffs.dimension = m;
                    coeffs.smoothness = 1;
                    for (int k = 0; k < r; ++k) {
                        coeffs.coefficients.push_back(
                            MatrixFunction::polynomial({random_matrix(rng, m, m), random_matrix(rng, m, m, 0.5)}));
                    }
                    BoundaryOperator op(q);
                    const int terms = 2 + static_cast<int>(rng() % 3);
                    for (int j = 0; j < terms; ++j) {
                        op.add_point(u(rng), static_cast<int>(rng() % (r + 1)), random_matrix(rng, q, m));
                    }
                    if (rep % 2 == 1 && q > 1) {
                        // duplicated row: rank-deficient variant
                        BoundaryOperator dup(q);
                        for (const auto& t : op.point_terms()) {
                            CMatrix mat = t.matrix;
                            mat.row(q - 1) = mat.row(0);
                            dup.add_point(t.point, t.order, mat);
                        }
                        op = dup;
                    }
                    out.push_back({ProblemSpec{Interval(0, 1), coeffs, op, LebesgueExponent(2), std::nullopt}, r, m, q});
                }
            }
        }
    }
    return out;
}

void fredholm_identities(Outcome& out, const std::vector<RandomProblem>& corpus) {
    int checked = 0, rank_deficient = 0;
    for (const auto& p : corpus) {
        const auto cm = build_characteristic_matrix(p.spec, Grid(p.spec.interval, 401));
        const auto report = solvability_report(cm);
        out.require(report.index == p.r * p.m - p.q, "index mismatch");
        out.require(report.dim_kernel - report.dim_cokernel == report.index, "dim ker - dim coker != index");
        rank_deficient += cm.numerical_rank < std::min(p.q, p.r * p.m);
        ++checked;
    }
    out.require(checked >= 50, "fewer than 50 problems");
    out.detail << checked << " problems (" << rank_deficient << " rank-deficient), index = rm - q and dim ker - dim coker = index";
}

void kernel_realization(Outcome& out, const std::vector<RandomProblem>& corpus) {
    constexpr double kTolerance = 1e-6;
    int directions = 0;
    double worst_eq = 0.0, worst_bc = 0.0;
    for (const auto& p : corpus) {
        const Grid grid(p.spec.interval, 1001);
        const auto set = fundamental_set(p.spec.coefficients, grid);
        const auto cm = characteristic_matrix(p.spec.boundary, set);
        const auto kernel = kernel_directions(cm);
        out.require(static_cast<int>(kernel.size()) == p.r * p.m - cm.numerical_rank, "direction count != rm - rank");
        for (const auto& xi : kernel) {
            const auto y = combine(set, xi);
            worst_eq = std::max(worst_eq, ode_residual(p.spec.coefficients, y));
            worst_bc = std::max(worst_bc, entry_sum_norm(p.spec.boundary.apply(y)));
            ++directions;
        }
    }
    out.require(directions > 0, "no kernel directions exercised");
    out.require(worst_eq < kTolerance, "|L y| " + fmt(worst_eq));
    out.require(worst_bc < kTolerance, "|B y| " + fmt(worst_bc));
    out.detail << directions << " directions, max |L y| " << fmt(worst_eq) << ", max |B y| " << fmt(worst_bc);
}

// -- AC6 ---------------------------------------------------------------------------

void solver_oracles(Outcome& out) {
    const CMatrix one = CMatrix::Constant(1, 1, Complex(1.0));
    CoefficientSet first;
    first.order = 1;
    first.dimension = 1;
    first.coefficients = {MatrixFunction::constant(one)};
    const ProblemSpec decay{Interval(0, 1), first, BoundaryOperator::evaluation(0.0, 1), LebesgueExponent(2),
                            RightHandSide{MatrixFunction::constant(one), CVector::Zero(1)}};
    const Grid grid(Interval(0, 1), 1001);
    const auto s1 = solve(decay, grid);
    double err1 = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) err1 = std::max(err1, std::abs(s1.y.at(0, i)(0) - (1.0 - std::exp(-grid[i]))));

    BoundaryOperator ends(2);
    CMatrix e0(2, 1), e1(2, 1);
    e0 << 1.0, 0.0;
    e1 << 0.0, 1.0;
    ends.add_point(0.0, 0, e0).add_point(1.0, 0, e1);
    CVector c(2);
    c << 0.0, 1.0;
    const ProblemSpec line{Interval(0, 1), CoefficientSet::zero(2, 1, 0), ends, LebesgueExponent(2),
                           RightHandSide{MatrixFunction::zero(1, 1), c}};
    const auto s2 = solve(line, grid);
    double err2 = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) err2 = std::max(err2, std::abs(s2.y.at(0, i)(0) - grid[i]));

    out.require(err1 <= 1e-8, "first-order error " + fmt(err1));
    out.require(err2 <= 1e-10, "second-order error " + fmt(err2));
    out.detail << "y'+y=1: max error " << fmt(err1) << "; y''=0: max error " << fmt(err2) << " (1001 nodes)";
}

// -- AC7 ---------------------------------------------------------------------------

void limit_rate(Outcome& out) {
    std::mt19937 rng(1007);
    double worst_slope = 1.0, worst_bracket = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
        const int m = 1 + trial;
        const auto family = testing::perturbed_family(random_matrix(rng, m, m), random_matrix(rng, m, m));
        const auto report = convergence_experiment(family);
        out.require(report.condition_0, "limit not well-posed");
        out.require(std::abs(report.error_slope - 1.0) <= 0.15, "slope " + fmt(report.error_slope));
        out.require(report.ratio_min.has_value(), "ratio undefined");
        const double bracket = report.ratio_min ? *report.ratio_max / *report.ratio_min : INFINITY;
        out.require(bracket < 1e3, "ratio bracket " + fmt(bracket));
        if (trial == 0 || std::abs(report.error_slope - 1.0) > std::abs(worst_slope - 1.0)) worst_slope = report.error_slope;
        worst_bracket = std::max(worst_bracket, bracket);
    }
    out.detail << "3 families on eps 1e-1..1e-4, worst slope " << fmt(worst_slope) << ", worst ratio bracket "
               << fmt(worst_bracket);
}

// -- AC8 ---------------------------------------------------------------------------

void multipoint_splitting(Outcome& out) {
    std::mt19937 rng(1008);
    LimitOptions options;
    options.nodes = 401;
    const CMatrix a = random_matrix(rng, 2, 2);
    for (double pv : {2.0, LebesgueExponent::kInfinity}) {
        const LebesgueExponent p(pv);
        const std::string tag = p.is_infinite() ? "p=inf" : "p=2";
        const auto good = testing::splitting_family(rng);
        const auto assumptions = check_multipoint_assumptions(good, p, kLongSchedule);
        std::vector<std::string> names = {"alpha", "beta", "gamma", "delta"};
        if (!p.is_infinite()) {
            names.push_back("gamma_p");
            names.push_back("gamma_prime");
        }
        for (const auto& n : names) out.require(assumptions.get(n).verdict, tag + " assumption " + n);
        out.require(assumptions.verdict, tag + " assumption verdict");
        const auto report = convergence_experiment(
            multipoint_problem_family(good, testing::multipoint_base(a, p), kLongSchedule), options);
        out.require(report.solution_convergence, tag + " splitting family does not converge");

        const auto bad = testing::splitting_family(rng, 2, 1.0);
        const auto bad_assumptions = check_multipoint_assumptions(bad, p, kLongSchedule);
        out.require(!bad_assumptions.get("delta").verdict, tag + " zero series passes delta");
        const auto bad_report = convergence_experiment(
            multipoint_problem_family(bad, testing::multipoint_base(a, p), kLongSchedule), options);
        out.require(!bad_report.solution_convergence, tag + " zero-series family converges");
        if (!p.is_infinite()) {
            out.detail << "p=2 and p=inf: splitting passes " << names.size() << " assumptions, error slope "
                       << fmt(report.error_slope) << "; zero series fails delta and convergence";
        }
    }
}

// -- AC9 ---------------------------------------------------------------------------

void semicontinuity(Outcome& out) {
    LimitOptions options;
    options.nodes = 401;
    // y' = 0, m = 2, B(eps) = eps * I at a: M(0) = 0, M(eps) invertible
    auto make = [](double eps) {
        BoundaryOperator op(2);
        op.add_point(0.0, 0, eps * CMatrix::Identity(2, 2));
        return ProblemSpec{Interval(0, 1), CoefficientSet::zero(1, 2, 1), op, LebesgueExponent(2),
                           RightHandSide{MatrixFunction::zero(2, 1), CVector::Ones(2)}};
    };
    const ProblemFamily jump{kDefaultSchedule, make(0.0), make};
    const auto result = semicontinuity_check(jump, options);
    out.require(result.limit_dim_kernel == 2 && result.limit_dim_cokernel == 2, "limit not rank-deficient");
    for (std::size_t i = 0; i < result.parameters.size(); ++i) {
        out.require(result.dim_kernel[i] <= result.limit_dim_kernel, "dim ker exceeds the limit");
        out.require(result.dim_cokernel[i] <= result.limit_dim_cokernel, "dim coker exceeds the limit");
        out.require(result.dim_kernel[i] == 0, "member not full rank");
    }

    // invertible limit with conditions (I) and (II): members are invertible too
    std::mt19937 rng(1009);
    const auto family = testing::perturbed_family(random_matrix(rng, 2, 2), 1e-3 * random_matrix(rng, 2, 2));
    const Grid grid(Interval(0, 1), options.nodes);
    const bool c0 = check_condition_0(family.at_zero, options);
    const bool c1 = check_condition_I(family, options).verdict;
    const bool c2 = check_condition_II(family, default_probes(grid, 2, 2), options).verdict;
    out.require(c0 && c1 && c2, "perturbed family does not satisfy (0), (I), (II)");
    const auto nearby = semicontinuity_check(family, options);
    bool all_invertible = true;
    for (std::size_t i = 0; i < nearby.parameters.size(); ++i) {
        all_invertible = all_invertible && nearby.dim_kernel[i] == 0 && nearby.dim_cokernel[i] == 0;
    }
    out.require(all_invertible, "a member near an invertible limit is singular");
    out.detail << "jump family: limit dims (2, 2), members (0, 0) on " << result.parameters.size()
               << " parameters; perturbed family with (0), (I), (II): all members invertible";
}

// -- AC10 --------------------------------------------------------------------------

void numerics_hygiene(Outcome& out) {
    std::mt19937 rng(1010);
    const CMatrix a = testing::random_matrix_with_norm(rng, 2, 3.0);
    const CMatrix exact = closed_forms::eigen_function(a, closed_forms::scalar_exp, -1.0);
    CoefficientSet coeffs;
    coeffs.order = 1;
    coeffs.dimension = 2;
    coeffs.coefficients = {MatrixFunction::constant(a)};
    std::vector<double> errors;
    for (std::size_t nodes : {11, 21, 41, 81}) {
        const auto y = fundamental_set(coeffs, Grid(Interval(0, 1), nodes)).members[0];
        errors.push_back(max_abs(y.at(0, nodes - 1) - exact));
    }
    std::string ratios;
    for (std::size_t i = 1; i < errors.size(); ++i) {
        const double ratio = errors[i - 1] / errors[i];
        out.require(std::abs(ratio - 16.0) <= 4.0, "error ratio " + fmt(ratio));
        ratios += (i > 1 ? ", " : "") + fmt(ratio);
    }

    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const int m = 2 + trial % 3;
        // V diag(lambda) V^-1 with a well-conditioned V
        const CMatrix v = CMatrix::Identity(m, m) + random_matrix(rng, m, m, 0.3);
        CMatrix d = CMatrix::Zero(m, m);
        for (int i = 0; i < m; ++i) d(i, i) = random_matrix(rng, 1, 1, 2.0)(0, 0);
        const CMatrix x = v * d * v.inverse();
        for (double s : {0.5, 1.0, 2.0}) {
            using namespace closed_forms;
            worst = std::max({worst, max_abs(matrix_exp(x, s).value - eigen_function(x, scalar_exp, s)),
                              max_abs(phi(x, s).value - eigen_function(x, scalar_phi, s)),
                              max_abs(cos_sqrt(x, s).value - eigen_function(x, scalar_cos_sqrt, s)),
                              max_abs(sinc_sqrt(x, s).value - eigen_function(x, scalar_sinc_sqrt, s))});
        }
    }
    out.require(worst <= 1e-8, "series vs eigendecomposition " + fmt(worst));
    out.detail << "RK4 error ratios " << ratios << "; series vs eigendecomposition max " << fmt(worst);
}

}  // namespace

int main() {
    const auto corpus = random_corpus();
    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
        {"AC1 first-order one-point oracle", first_order_oracle},
        {"AC2 pure-derivative multipoint oracle", pure_derivative_oracle},
        {"AC3 second-order two-point oracles", second_order_oracle},
        {"AC4 index identities", [&](Outcome& o) { fredholm_identities(o, corpus); }},
        {"AC5 kernel realization", [&](Outcome& o) { kernel_realization(o, corpus); }},
        {"AC6 solver oracles", solver_oracles},
        {"AC7 linear-rate limit", limit_rate},
        {"AC8 multipoint splitting", multipoint_splitting},
        {"AC9 semicontinuity", semicontinuity},
        {"AC10 numerics hygiene", numerics_hygiene},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        Outcome out;
        try {
            check(out);
        } catch (const std::exception& e) {
            out.require(false, std::string("exception: ") + e.what());
        }
        failures += !out.pass;
        std::printf("%s %s: %s\n", out.pass ? "PASS" : "FAIL", name.c_str(), out.text().c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
