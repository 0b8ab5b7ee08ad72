#include <doctest.h>

#include <cmath>

#include "fredholm/grid.hpp"
#include "test_support.hpp"

using namespace fredholm;

namespace {

DerivativeStack scalar_stack(const Grid& grid, int max_order, double (*fn)(double, int)) {
    return DerivativeStack::from_function(grid, 1, max_order, [fn](double t, int k) {
        CVector v(1);
        v(0) = fn(t, k);
        return v;
    });
}

double one(double, int k) { return k == 0 ? 1.0 : 0.0; }
double identity(double t, int k) { return k == 0 ? t : (k == 1 ? 1.0 : 0.0); }
double exponential(double t, int) { return std::exp(t); }
double sine(double t, int k) {
    switch (k % 4) {
        case 0: return std::sin(t);
        case 1: return std::cos(t);
        case 2: return -std::sin(t);
        default: return -std::cos(t);
    }
}

}  // namespace

TEST_CASE("interval and grid invariants") {
    CHECK_THROWS_AS(Interval(1.0, 1.0), StructuralError);
    CHECK_THROWS_AS(Interval(0.0, INFINITY), StructuralError);
    CHECK_THROWS_AS(Grid(Interval(0, 1), 1), StructuralError);

    const Grid grid(Interval(-1.0, 2.0), 7);
    CHECK(grid.size() == 7);
    CHECK(grid[0] == -1.0);
    CHECK(grid[6] == 2.0);
    CHECK(grid.step() == doctest::Approx(0.5));
    for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
    CHECK(Grid(Interval(0, 1)).size() == 1001);
}

TEST_CASE("Lebesgue exponent conjugates") {
    CHECK(LebesgueExponent(1.0).conjugate() == LebesgueExponent::kInfinity);
    CHECK(LebesgueExponent::infinity().conjugate() == 1.0);
    CHECK(LebesgueExponent(2.0).conjugate() == 2.0);
    CHECK(LebesgueExponent(3.0).conjugate() == doctest::Approx(1.5));
    CHECK_THROWS_AS(LebesgueExponent(0.5), StructuralError);
}

TEST_CASE("lp_norm examples") {
    const Grid grid(Interval(0, 1), 1001);
    const auto c = scalar_stack(grid, 0, one);
    CHECK(lp_norm(grid, c.order(0), LebesgueExponent(2)) == doctest::Approx(1.0).epsilon(1e-14));

    const auto t = scalar_stack(grid, 0, identity);
    CHECK(lp_norm(grid, t.order(0), LebesgueExponent::infinity()) == 1.0);
    // integral of t over [0,1] is 1/2; trapezoid is exact for linear data
    CHECK(std::abs(lp_norm(grid, t.order(0), LebesgueExponent(1)) - 0.5) < 1e-14);

    std::vector<CVector> short_values(3, CVector::Zero(1));
    CHECK_THROWS_AS(lp_norm(grid, short_values, LebesgueExponent(1)), StructuralError);
}

TEST_CASE("sobolev_norm examples") {
    const Grid grid(Interval(0, 1), 1001);
    DerivativeStack zero(grid, 2, 3);
    for (double p : {1.0, 2.0, LebesgueExponent::kInfinity}) CHECK(sobolev_norm(zero, LebesgueExponent(p)) == 0.0);

    CHECK(sobolev_norm(scalar_stack(grid, 1, one), LebesgueExponent(1)) == doctest::Approx(1.0));

    // 2 * integral_0^1 e^t dt = 2(e - 1); trapezoid error ~ h^2/12 per order
    const double exact = 2.0 * (std::exp(1.0) - 1.0);
    CHECK(std::abs(sobolev_norm(scalar_stack(grid, 1, exponential), LebesgueExponent(1)) - exact) < 1e-6);
}

TEST_CASE("lp_norm converges at second order") {
    const double exact = std::exp(1.0) - 1.0;
    double previous = 0.0;
    for (std::size_t nodes : {51, 101, 201, 401}) {
        const Grid grid(Interval(0, 1), nodes);
        const double err =
            std::abs(lp_norm(grid, scalar_stack(grid, 0, exponential).order(0), LebesgueExponent(1)) - exact);
        if (previous > 0.0) CHECK(previous / err == doctest::Approx(4.0).epsilon(0.05));
        previous = err;
    }
}

TEST_CASE("resample examples") {
    const Grid grid(Interval(0, 1), 501);
    const auto s = scalar_stack(grid, 2, sine);
    const auto same = resample(s, grid);
    for (int k = 0; k <= 2; ++k) {
        for (std::size_t i = 0; i < grid.size(); ++i) CHECK(same.at(k, i) == s.at(k, i));
    }

    const Grid coarse(Interval(0, 1), 11);
    const Grid fine(Interval(0, 1), 37);
    const auto line = resample(scalar_stack(coarse, 1, identity), fine);
    for (std::size_t i = 0; i < fine.size(); ++i) {
        CHECK(std::abs(line.at(0, i)(0) - fine[i]) < 1e-14);
        CHECK(std::abs(line.at(1, i)(0) - 1.0) < 1e-14);
    }

    const Grid finer(Interval(0, 1), 1001);
    const auto up = resample(s, finer);
    double worst = 0.0;
    for (std::size_t i = 0; i < finer.size(); ++i) {
        worst = std::max(worst, std::abs(up.at(0, i)(0) - std::sin(finer[i])));
    }
    CHECK(worst <= 1e-8);
    CHECK(up.at(0, 0) == s.at(0, 0));
    CHECK(up.at(0, finer.size() - 1) == s.at(0, grid.size() - 1));

    CHECK_THROWS_AS(resample(s, Grid(Interval(0, 2), 11)), StructuralError);
}

TEST_CASE("stored orders are consistent with finite differences") {
    std::mt19937 rng(7);
    for (std::size_t nodes : {201, 401}) {
        const Grid grid(Interval(0, 1), nodes);
        const auto y = testing::random_smooth_stack(rng, grid, 2, 2);
        for (int k = 0; k < 2; ++k) {
            const auto fd = detail::differentiate<CVector>(grid, y.order(k));
            double worst = 0.0;
            for (std::size_t i = 0; i < grid.size(); ++i) worst = std::max(worst, entry_sum_norm(CVector(fd[i] - y.at(k + 1, i))));
            CHECK(worst < 1e-6);
        }
    }
}

TEST_CASE("norm properties on random stacks") {
    std::mt19937 rng(11);
    const Grid grid(Interval(-0.5, 1.5), 301);
    for (int trial = 0; trial < 20; ++trial) {
        const auto x = testing::random_smooth_stack(rng, grid, 3, 3);
        const auto y = testing::random_smooth_stack(rng, grid, 3, 3);
        const Complex c(std::uniform_real_distribution<double>(-3, 3)(rng), 0.7);
        for (double pv : {1.0, 2.0, LebesgueExponent::kInfinity}) {
            const LebesgueExponent p(pv);
            CHECK(sobolev_norm(x + y, p) <= sobolev_norm(x, p) + sobolev_norm(y, p) + 1e-12);
            const double scaled = sobolev_norm(c * x, p);
            CHECK(std::abs(scaled - std::abs(c) * sobolev_norm(x, p)) <= 1e-12 * scaled);
            double last = -1.0;
            for (int k = 0; k <= 3; ++k) {
                const double partial = sobolev_norm(x, p, k);
                CHECK(partial >= last);
                last = partial;
            }
        }
    }
}

TEST_CASE("stack arithmetic rejects incompatible operands") {
    const Grid grid(Interval(0, 1), 11);
    DerivativeStack a(grid, 2, 1);
    DerivativeStack b(grid, 2, 2);
    DerivativeStack c(Grid(Interval(0, 1), 12), 2, 1);
    CHECK_THROWS_AS(a += b, StructuralError);
    CHECK_THROWS_AS(a += c, StructuralError);
    CHECK_THROWS_AS(a.evaluate(0, 1.5), StructuralError);
}
