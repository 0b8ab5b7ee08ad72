#include <doctest.h>

#include <cmath>

#include "fredholm/limits.hpp"
#include "test_support.hpp"

using namespace fredholm;
using fredholm::testing::random_matrix;

namespace {

const std::vector<double> kLongSchedule = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};

LimitOptions coarse() {
    LimitOptions options;
    options.nodes = 401;
    return options;
}

// B(eps) built by `boundary`, equation y' = 0 on [0, 1] with m = 2.
ProblemFamily boundary_family(std::function<BoundaryOperator(double)> boundary) {
    auto make = [boundary](double eps) {
        return ProblemSpec{Interval(0, 1), CoefficientSet::zero(1, 2, 1), boundary(eps), LebesgueExponent(2),
                           RightHandSide{MatrixFunction::zero(2, 1), CVector::Ones(2)}};
    };
    return ProblemFamily{kDefaultSchedule, make(0.0), make};
}

}  // namespace

TEST_CASE("trend rules") {
    CHECK(tends_to_zero({0, 0, 0, 0}));
    CHECK(tends_to_zero({1e-3, 1e-4, 1e-5, 1e-8}));
    CHECK_FALSE(tends_to_zero({1e-1, 1e-2, 1e-3, 1e-4}));  // last value above the absolute cutoff
    CHECK_FALSE(tends_to_zero({1e-8, 1e-8, 1e-8, 1e-8}));   // no relative drop
    CHECK_FALSE(tends_to_zero({1e-11, 1e-11, 1e-11}));
    CHECK(tends_to_zero({4.4e-16, 0.0, 4.4e-16}));  // roundoff only
    CHECK_FALSE(tends_to_zero({}));
    CHECK_FALSE(tends_to_zero({1.0, NAN}));
    CHECK(stays_bounded({1.0, 2.0, 5.0}));
    CHECK_FALSE(stays_bounded({1.0, 100.0}));
    CHECK(loglog_slope({1e-1, 1e-2, 1e-3}, {2e-2, 2e-4, 2e-6}) == doctest::Approx(2.0));
    CHECK(std::isnan(loglog_slope({1.0}, {1.0})));
}

TEST_CASE("condition (0)") {
    std::mt19937 rng(79);
    auto family = testing::perturbed_family(random_matrix(rng, 2, 2), CMatrix::Zero(2, 2));
    CHECK(check_condition_0(family.at_zero, coarse()));

    auto spec = family.at_zero;
    BoundaryOperator zero(2);
    zero.add_point(0.0, 0, CMatrix::Zero(2, 2));
    spec.boundary = zero;
    CHECK_FALSE(check_condition_0(spec, coarse()));

    BoundaryOperator short_op(1);
    short_op.add_point(0.0, 0, random_matrix(rng, 1, 2));
    spec.boundary = short_op;
    CHECK_FALSE(check_condition_0(spec, coarse()));
}

TEST_CASE("condition (I) examples") {
    std::mt19937 rng(83);
    const CMatrix a0 = random_matrix(rng, 2, 2);
    const CMatrix e = random_matrix(rng, 2, 2);

    auto constant = testing::perturbed_family(a0, CMatrix::Zero(2, 2));
    auto table = check_condition_I(constant, coarse());
    CHECK(table.verdict);
    for (double v : table.column(0)) CHECK(v == 0.0);

    // A(eps) = A(0) + eps E: values proportional to eps; E small enough that
    // eps = 1e-4 lands below the absolute cutoff
    auto linear = testing::perturbed_family(a0, 1e-3 * e);
    table = check_condition_I(linear, coarse());
    CHECK(table.verdict);
    const auto col = table.column(0);
    for (std::size_t i = 1; i < col.size(); ++i) CHECK(col[i - 1] / col[i] == doctest::Approx(10.0).epsilon(1e-9));

    // A(eps) = A(0) + E does not converge
    ProblemFamily fixed = constant;
    fixed.at = [a0, e](double) { return testing::perturbed_family(a0 + e, CMatrix::Zero(2, 2)).at_zero; };
    table = check_condition_I(fixed, coarse());
    CHECK_FALSE(table.verdict);
    CHECK(table.column(0).back() == doctest::Approx(table.column(0).front()));
}

TEST_CASE("condition (II) examples") {
    const Grid grid(Interval(0, 1), 401);
    const auto probes = default_probes(grid, 2, 2);
    CHECK(probes.size() == 10);

    auto constant = boundary_family([](double) { return BoundaryOperator::evaluation(0.5, 2); });
    CHECK(check_condition_II(constant, probes, coarse()).verdict);

    auto split = boundary_family([](double eps) {
        BoundaryOperator op(2);
        const CMatrix half = 0.5 * CMatrix::Identity(2, 2);
        if (eps == 0.0) return BoundaryOperator::evaluation(0.5, 2);
        op.add_point(0.5 - eps, 0, half).add_point(0.5 + eps, 0, half);
        return op;
    });
    const auto table = check_condition_II(split, probes, coarse());
    CHECK(table.verdict);
    // Taylor: (y(t0 - e) + y(t0 + e)) / 2 - y(t0) = y''(t0) e^2 / 2 + O(e^4); probe t^2 has y'' = 2
    const std::size_t t_squared = 4;  // first coordinate of the t^2 probe
    for (std::size_t i = 0; i < table.parameters.size(); ++i) {
        const double e = table.parameters[i];
        CHECK(table.values[i][t_squared] == doctest::Approx(e * e).epsilon(1e-6));
    }

    std::mt19937 rng(89);
    CMatrix beta = random_matrix(rng, 2, 2);
    beta /= entry_sum_norm(beta);
    auto divergent = boundary_family([beta](double eps) {
        auto op = BoundaryOperator::evaluation(0.0, 2);
        if (eps > 0.0) op.add_point(0.5, 0, beta);
        return op;
    });
    CHECK_FALSE(check_condition_II(divergent, probes, coarse()).verdict);
    CHECK_THROWS_AS(check_condition_II(divergent, {}, coarse()), StructuralError);
}

TEST_CASE("multipoint assumptions match hand computations") {
    std::mt19937 rng(97);
    const auto family = testing::splitting_family(rng, 2, 1.0);
    const std::vector<double> schedule = {1e-1, 1e-2, 1e-3, 1e-4};
    const auto report = check_multipoint_assumptions(family, LebesgueExponent(2), schedule);

    for (std::size_t i = 0; i < schedule.size(); ++i) {
        const double eps = schedule[i];
        double alpha = 0, gamma = 0, gamma_p = 0, gamma_prime = 0;
        for (std::size_t j = 0; j < 2; ++j) {
            const double tj = *family.series[j].limit_point;
            const double lo = std::abs((tj - eps) - tj), hi = std::abs((tj + eps) - tj);
            alpha = std::max({alpha, lo, hi});
            for (int d = 0; d < 2; ++d) {
                const double half = 0.5 * entry_sum_norm(family.series[j].limit_matrices[d]);
                gamma = std::max(gamma, half * (lo + hi));
                if (d == 1) gamma_p = std::max(gamma_p, half * (std::sqrt(lo) + std::sqrt(hi)));
                if (d == 0) gamma_prime = std::max(gamma_prime, half * (lo + hi));
            }
        }
        CHECK(std::abs(report.get("alpha").values[i] - alpha) <= 1e-12 * alpha);
        CHECK(report.get("beta").values[i] <= 1e-12);
        CHECK(std::abs(report.get("gamma").values[i] - gamma) <= 1e-12 * gamma);
        CHECK(std::abs(report.get("gamma_p").values[i] - gamma_p) <= 1e-12 * gamma_p);
        CHECK(std::abs(report.get("gamma_prime").values[i] - gamma_prime) <= 1e-12 * gamma_prime);
        CHECK(std::abs(report.get("delta").values[i] - 1.0) <= 1e-12);
    }
    CHECK_FALSE(report.get("delta").verdict);
    CHECK_FALSE(report.verdict);
    CHECK(report.get("gamma_p").verdict);
    CHECK(report.get("gamma_p").required);
    CHECK_FALSE(report.get("gamma").required);
    CHECK_THROWS_AS(report.get("epsilon"), StructuralError);
}

TEST_CASE("multipoint assumption verdicts") {
    std::mt19937 rng(101);
    SUBCASE("static family passes everything") {
        MultipointFamily family;
        family.rows = 2;
        family.dimension = 2;
        family.top_order = 2;
        MultipointSeries s;
        s.limit_point = 0.4;
        s.limit_matrices = {random_matrix(rng, 2, 2), random_matrix(rng, 2, 2)};
        const auto limits = s.limit_matrices;
        s.at = [limits](double) { return SeriesSnapshot{{0.4}, {limits}}; };
        family.series = {s};
        family.data = [](double) { return CVector::Ones(2); };
        for (double p : {2.0, LebesgueExponent::kInfinity}) {
            const auto report = check_multipoint_assumptions(family, LebesgueExponent(p), kLongSchedule);
            for (const auto& c : report.checks) CHECK_MESSAGE(c.verdict, c.name);
            CHECK(report.verdict);
        }
    }
    SUBCASE("splitting family passes on a schedule reaching small eps") {
        const auto family = testing::splitting_family(rng);
        for (double p : {2.0, LebesgueExponent::kInfinity}) {
            const auto report = check_multipoint_assumptions(family, LebesgueExponent(p), kLongSchedule);
            CHECK(report.verdict);
            CHECK(report.get("alpha").verdict);
            CHECK(report.get("beta").verdict);
            CHECK(report.get("gamma").verdict);
            CHECK(report.get("delta").verdict);
        }
    }
    SUBCASE("malformed series are rejected") {
        auto family = testing::splitting_family(rng);
        family.series[0].at = [](double) { return SeriesSnapshot{{0.3, 0.4}, {}}; };
        CHECK_THROWS_AS(check_multipoint_assumptions(family, LebesgueExponent(2), {1e-1}), StructuralError);
        family = testing::splitting_family(rng);
        family.series_cap = 1;
        CHECK_THROWS_AS(family.boundary_at(0.1), StructuralError);
    }
}

TEST_CASE("characteristic convergence examples") {
    std::mt19937 rng(103);
    const CMatrix a0 = random_matrix(rng, 2, 2);
    auto constant = testing::perturbed_family(a0, CMatrix::Zero(2, 2));
    auto table = characteristic_convergence(constant, coarse());
    for (double v : table.column(0)) CHECK(v == 0.0);

    // evaluation at the right end sees the perturbation through Y(b)
    auto moving = testing::perturbed_family(a0, 1e-3 * random_matrix(rng, 2, 2));
    moving.at_zero.boundary = BoundaryOperator::evaluation(1.0, 2);
    auto inner = moving.at;
    moving.at = [inner](double eps) {
        auto spec = inner(eps);
        spec.boundary = BoundaryOperator::evaluation(1.0, 2);
        return spec;
    };
    table = characteristic_convergence(moving, coarse());
    CHECK(table.verdict);
    for (std::size_t i = 1; i < table.values.size(); ++i) CHECK(table.values[i][0] < table.values[i - 1][0]);

    CMatrix beta = random_matrix(rng, 2, 2);
    auto divergent = boundary_family([beta](double eps) {
        auto op = BoundaryOperator::evaluation(0.0, 2);
        if (eps > 0.0) op.add_point(0.5, 0, beta);
        return op;
    });
    CHECK_FALSE(characteristic_convergence(divergent, coarse()).verdict);
}

TEST_CASE("semicontinuity examples") {
    auto jump = boundary_family([](double eps) {
        BoundaryOperator op(2);
        op.add_point(0.0, 0, eps * CMatrix::Identity(2, 2));
        return op;
    });
    auto result = semicontinuity_check(jump, coarse());
    CHECK(result.limit_dim_kernel == 2);
    CHECK(result.limit_dim_cokernel == 2);
    for (int d : result.dim_kernel) CHECK(d == 0);
    CHECK(result.violations.empty());
    CHECK(result.threshold == doctest::Approx(1e-1));
    CHECK(result.holds_at_limit_end);

    auto constant = boundary_family([](double) { return BoundaryOperator::evaluation(0.0, 2); });
    result = semicontinuity_check(constant, coarse());
    for (int d : result.dim_kernel) CHECK(d == result.limit_dim_kernel);

    // a family that is singular away from the limit: violation reported, threshold below it
    auto late = boundary_family([](double eps) {
        BoundaryOperator op(2);
        CMatrix mat = CMatrix::Identity(2, 2);
        if (eps >= 1e-2) mat(1, 1) = 0.0;
        op.add_point(0.0, 0, mat);
        return op;
    });
    result = semicontinuity_check(late, coarse());
    CHECK(result.violations.size() == 2);
    CHECK(result.threshold == doctest::Approx(1e-3));
    CHECK(result.holds_at_limit_end);
}

TEST_CASE("convergence experiment examples") {
    std::mt19937 rng(107);
    const CMatrix a0 = random_matrix(rng, 2, 2);

    const auto constant = convergence_experiment(testing::perturbed_family(a0, CMatrix::Zero(2, 2)), coarse());
    REQUIRE(constant.rows.size() == 4);
    for (const auto& row : constant.rows) {
        CHECK(*row.solution_error < 1e-12);
        CHECK(std::find(row.flags.begin(), row.flags.end(), "ratio-undefined") != row.flags.end());
        CHECK_FALSE(row.ratio.has_value());
    }

    const auto linear = convergence_experiment(testing::perturbed_family(a0, random_matrix(rng, 2, 2)), coarse());
    CHECK(linear.condition_0);
    CHECK(linear.error_slope == doctest::Approx(1.0).epsilon(0.15));
    REQUIRE(linear.ratio_min.has_value());
    CHECK(*linear.ratio_max / *linear.ratio_min < 1e3);
    for (const auto& row : linear.rows) {
        CHECK(row.well_posed);
        CHECK(*row.discrepancy > 0.0);
    }

    auto singular = testing::perturbed_family(a0, CMatrix::Zero(2, 2));
    BoundaryOperator zero(2);
    zero.add_point(0.0, 0, CMatrix::Zero(2, 2));
    singular.at_zero.boundary = zero;
    CHECK_THROWS_AS(convergence_experiment(singular, coarse()), NotWellPosed);
}

TEST_CASE("splitting family: solutions converge, zero series breaks convergence") {
    std::mt19937 rng(109);
    const CMatrix a = random_matrix(rng, 2, 2);
    const auto base = testing::multipoint_base(a, LebesgueExponent(2));

    auto good = multipoint_problem_family(testing::splitting_family(rng), base, kLongSchedule);
    const auto report = convergence_experiment(good, coarse());
    CHECK(report.solution_convergence);
    CHECK(report.characteristic_convergence);
    // symmetric splitting is second order in eps
    CHECK(report.error_slope == doctest::Approx(2.0).epsilon(0.15));

    auto bad = multipoint_problem_family(testing::splitting_family(rng, 2, 1.0), base, kLongSchedule);
    const auto failing = convergence_experiment(bad, coarse());
    CHECK_FALSE(failing.solution_convergence);
}

TEST_CASE("convergence implications over a family corpus") {
    std::mt19937 rng(113);
    for (int trial = 0; trial < 8; ++trial) {
        const int m = 1 + trial % 2;
        const double scale = trial % 4 == 3 ? 1.0 : 1e-3;  // some families fail condition (I)
        auto family = testing::perturbed_family(random_matrix(rng, m, m), scale * random_matrix(rng, m, m));
        const bool right_end = trial % 2 == 0;
        if (right_end) {
            family.at_zero.boundary = BoundaryOperator::evaluation(1.0, m);
            auto inner = family.at;
            family.at = [inner, m](double eps) {
                auto spec = inner(eps);
                spec.boundary = BoundaryOperator::evaluation(1.0, m);
                return spec;
            };
        }
        const auto grid = Grid(Interval(0, 1), 401);
        const bool cond_i = check_condition_I(family, coarse()).verdict;
        const bool cond_ii = check_condition_II(family, default_probes(grid, m, 2), coarse()).verdict;
        const bool converges = characteristic_convergence(family, coarse()).verdict;
        const auto semi = semicontinuity_check(family, coarse());
        if (cond_i && cond_ii) {
            CHECK(converges);
            CHECK(semi.holds_at_limit_end);
        }
    }
}
