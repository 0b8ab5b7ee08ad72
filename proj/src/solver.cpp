#include "fredholm/solver.hpp"

#include <sstream>

namespace fredholm {

namespace {

std::string refusal_message(const SolvabilityReport& report) {
    std::ostringstream msg;
    msg << "problem is not well posed: index " << report.index << ", dim ker " << report.dim_kernel
        << ", dim coker " << report.dim_cokernel;
    return msg.str();
}

}  // namespace

NotWellPosed::NotWellPosed(SolvabilityReport report)
    : std::runtime_error(refusal_message(report)), report_(std::move(report)) {}

Solution solve(const ProblemSpec& spec, const Grid& grid, const SolveOptions& options) {
    if (!spec.rhs) throw StructuralError("solve requires a right-hand side (f, c)");
    if (!(grid.interval() == spec.interval)) throw StructuralError("grid does not span the problem interval");
    Diagnostics diags = spec.validate();

    const auto set = fundamental_set(spec.coefficients, grid);
    const auto m = characteristic_matrix(spec.boundary, set, options.rank_policy);
    auto report = solvability_report(m);
    if (!report.well_posed) throw NotWellPosed(std::move(report));
    diags.insert(diags.end(), m.diagnostics.begin(), m.diagnostics.end());

    const double cond = m.condition_number();
    if (cond > options.ill_conditioned_above) {
        std::ostringstream msg;
        msg << "characteristic matrix is ill-conditioned (cond = " << cond << ")";
        diags.push_back({Severity::Warning, "ill-conditioned", msg.str()});
    }

    DerivativeStack yp = particular_solution(spec.coefficients, spec.rhs->forcing, grid,
                                             options.particular_seed);
    const CVector rhs = spec.rhs->values - spec.boundary.apply(yp);
    const CVector xi = Eigen::PartialPivLU<CMatrix>(m.entries).solve(rhs);
    DerivativeStack y = yp + combine(set, xi);

    const double eq = grid.size() >= 5 ? ode_residual(spec.coefficients, y, &spec.rhs->forcing) : 0.0;
    const double bc = entry_sum_norm(CVector(spec.boundary.apply(y) - spec.rhs->values));
    return Solution{std::move(y), xi, eq, bc, cond, std::move(diags)};
}

double discrepancy(const ProblemSpec& spec, const DerivativeStack& y0) {
    if (!spec.rhs) throw StructuralError("discrepancy requires a right-hand side (f, c)");
    if (!(y0.grid().interval() == spec.interval)) throw StructuralError("candidate lives on another interval");
    spec.validate();
    const auto residual = apply_differential_operator(spec.coefficients, y0, &spec.rhs->forcing);
    const double equation = sobolev_norm(residual, spec.p);
    const double boundary = entry_sum_norm(CVector(spec.boundary.apply(y0) - spec.rhs->values));
    return equation + boundary;
}

}  // namespace fredholm
