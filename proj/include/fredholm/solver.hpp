#pragma once

#include <optional>
#include <stdexcept>

#include "fredholm/characteristic.hpp"

namespace fredholm {

/// Thrown by solve() when the problem is not uniquely solvable for every
/// right-hand side. Carries the report that led to the refusal.
class NotWellPosed : public std::runtime_error {
public:
    explicit NotWellPosed(SolvabilityReport report);
    const SolvabilityReport& report() const { return report_; }

private:
    SolvabilityReport report_;
};

struct SolveOptions {
    RankPolicy rank_policy;
    // Initial data (y, y', ..., y^(r-1)) at a for the particular solution.
    // Any choice gives the same solution once corrected through M.
    std::optional<CVector> particular_seed;
    double ill_conditioned_above = 1e12;
};

struct Solution {
    DerivativeStack y;
    CVector coefficients;        // xi, with y = y_p + sum_i Y_i xi_i
    double equation_residual;    // max-node |L y - f|, top order from differences
    double boundary_residual;    // |B y - c|
    double condition_number;     // of M
    Diagnostics diagnostics;
};

Solution solve(const ProblemSpec& spec, const Grid& grid, const SolveOptions& options = {});

/// ||L y0 - f||_{n,p} + |B y0 - c| for a candidate y0 carrying orders 0..n+r.
double discrepancy(const ProblemSpec& spec, const DerivativeStack& y0);

}  // namespace fredholm
