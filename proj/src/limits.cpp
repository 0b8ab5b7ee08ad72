#include "fredholm/limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fredholm {

namespace {

constexpr double kUndefinedRatio = 1e-14;

Grid grid_for(const ProblemSpec& spec, const LimitOptions& options) {
    return Grid(spec.interval, options.nodes);
}

void check_member(const ProblemSpec& member, const ProblemSpec& limit) {
    if (!(member.interval == limit.interval) || !(member.p == limit.p) ||
        member.coefficients.order != limit.coefficients.order ||
        member.coefficients.dimension != limit.coefficients.dimension ||
        member.coefficients.smoothness != limit.coefficients.smoothness) {
        throw StructuralError("family members must share interval, m, r, n and p");
    }
}

// Derivative stack of vec(A(t) - B(t)) for orders 0..n, to reuse lp norms on matrices.
DerivativeStack difference_stack(const MatrixFunction& x, const MatrixFunction& y, const Grid& grid,
                                 int max_order) {
    const int size = x.rows() * x.cols();
    return DerivativeStack::from_function(grid, size, max_order, [&](double t, int k) {
        CMatrix d = x(t, k) - y(t, k);
        return CVector(Eigen::Map<CVector>(d.data(), size));
    });
}

double max_abs_entry(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

ConditionTable finish(ConditionTable table, const TrendRule& rule) {
    table.column_verdicts.clear();
    table.verdict = true;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        const bool ok = tends_to_zero(table.column(c), rule);
        table.column_verdicts.push_back(ok);
        table.verdict = table.verdict && ok;
    }
    return table;
}

}  // namespace

bool tends_to_zero(const std::vector<double>& values, const TrendRule& rule) {
    if (values.empty()) return false;
    for (double v : values) {
        if (!std::isfinite(v)) return false;
    }
    const double first = values.front();
    const double last = values.back();
    if (last <= rule.noise_floor) return true;  // roundoff, nothing left to drop
    return last < rule.absolute && last <= first / rule.relative_drop;
}

bool stays_bounded(const std::vector<double>& values, const TrendRule& rule) {
    if (values.empty()) return false;
    double worst = 0.0;
    for (double v : values) {
        if (!std::isfinite(v)) return false;
        worst = std::max(worst, v);
    }
    return worst <= rule.growth_limit * std::max(values.front(), rule.absolute);
}

double loglog_slope(const std::vector<double>& parameters, const std::vector<double>& values) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (std::size_t i = 0; i < std::min(parameters.size(), values.size()); ++i) {
        if (!(parameters[i] > 0.0) || !(values[i] > 0.0)) continue;
        const double x = std::log(parameters[i]);
        const double y = std::log(values[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count < 2) return std::numeric_limits<double>::quiet_NaN();
    const double denom = count * sxx - sx * sx;
    if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return (count * sxy - sx * sy) / denom;
}

std::vector<double> ConditionTable::column(std::size_t c) const {
    std::vector<double> out;
    out.reserve(values.size());
    for (const auto& row : values) out.push_back(row.at(c));
    return out;
}

bool check_condition_0(const ProblemSpec& at_zero, const LimitOptions& options) {
    if (at_zero.conditions() != at_zero.equations()) return false;
    const auto m = build_characteristic_matrix(at_zero, grid_for(at_zero, options), options.rank_policy);
    return m.numerical_rank == at_zero.equations();
}

ConditionTable check_condition_I(const ProblemFamily& family, const LimitOptions& options) {
    const auto& limit = family.at_zero;
    const Grid grid = grid_for(limit, options);
    const int r = limit.coefficients.order;
    const int n = limit.coefficients.smoothness;
    ConditionTable table;
    for (int k = 0; k < r; ++k) table.columns.push_back("A_" + std::to_string(k));
    for (double eps : family.schedule) {
        const ProblemSpec member = family.at(eps);
        check_member(member, limit);
        std::vector<double> row;
        for (int k = 0; k < r; ++k) {
            const auto diff = difference_stack(member.coefficients.coefficients[k],
                                               limit.coefficients.coefficients[k], grid, n);
            row.push_back(sobolev_norm(diff, limit.p));
        }
        table.parameters.push_back(eps);
        table.values.push_back(std::move(row));
    }
    return finish(std::move(table), options.trend);
}

std::vector<DerivativeStack> default_probes(const Grid& grid, int dimension, int top_order) {
    using Scalar = std::function<double(double t, int k)>;
    const std::vector<std::pair<std::string, Scalar>> shapes = {
        {"1", [](double, int k) { return k == 0 ? 1.0 : 0.0; }},
        {"t", [](double t, int k) { return k == 0 ? t : (k == 1 ? 1.0 : 0.0); }},
        {"t^2", [](double t, int k) { return k == 0 ? t * t : (k == 1 ? 2 * t : (k == 2 ? 2.0 : 0.0)); }},
        {"sin", [](double t, int k) {
             switch (k % 4) {
                 case 0: return std::sin(t);
                 case 1: return std::cos(t);
                 case 2: return -std::sin(t);
                 default: return -std::cos(t);
             }
         }},
        {"cos", [](double t, int k) {
             switch (k % 4) {
                 case 0: return std::cos(t);
                 case 1: return -std::sin(t);
                 case 2: return -std::cos(t);
                 default: return std::sin(t);
             }
         }},
    };
    std::vector<DerivativeStack> probes;
    for (const auto& [name, fn] : shapes) {
        for (int i = 0; i < dimension; ++i) {
            probes.push_back(DerivativeStack::from_function(grid, dimension, top_order,
                                                            [&, i](double t, int k) {
                                                                CVector v = CVector::Zero(dimension);
                                                                v(i) = fn(t, k);
                                                                return v;
                                                            }));
        }
    }
    return probes;
}

ConditionTable check_condition_II(const ProblemFamily& family,
                                  const std::vector<DerivativeStack>& probes,
                                  const LimitOptions& options) {
    if (probes.empty()) throw StructuralError("condition (II) needs at least one probe");
    const auto& limit = family.at_zero;
    ConditionTable table;
    std::vector<CVector> reference;
    for (std::size_t i = 0; i < probes.size(); ++i) {
        table.columns.push_back("probe_" + std::to_string(i));
        reference.push_back(limit.boundary.apply(probes[i]));
    }
    for (double eps : family.schedule) {
        const ProblemSpec member = family.at(eps);
        check_member(member, limit);
        std::vector<double> row;
        for (std::size_t i = 0; i < probes.size(); ++i) {
            row.push_back(entry_sum_norm(CVector(member.boundary.apply(probes[i]) - reference[i])));
        }
        table.parameters.push_back(eps);
        table.values.push_back(std::move(row));
    }
    return finish(std::move(table), options.trend);
}

// ---------------------------------------------------------------------------

SeriesSnapshot MultipointFamily::snapshot(std::size_t j, double eps) const {
    const auto& s = series.at(j);
    SeriesSnapshot snap = s.at(eps);
    if (snap.points.size() != snap.matrices.size()) {
        throw StructuralError("series " + std::to_string(j) + ": points and matrices differ in count");
    }
    if (snap.points.size() > series_cap) {
        throw StructuralError("series " + std::to_string(j) + " exceeds the size cap of " +
                              std::to_string(series_cap));
    }
    if (!s.is_zero_series() && snap.points.empty()) {
        throw StructuralError("series " + std::to_string(j) + " must contain at least one point");
    }
    for (const auto& per_order : snap.matrices) {
        if (static_cast<int>(per_order.size()) != top_order) {
            throw StructuralError("series " + std::to_string(j) + ": expected one matrix per order below n+r");
        }
        for (const auto& m : per_order) {
            if (m.rows() != rows || m.cols() != dimension) {
                throw StructuralError("series " + std::to_string(j) + ": matrices must be q x m");
            }
        }
    }
    return snap;
}

BoundaryOperator MultipointFamily::boundary_at(double eps) const {
    BoundaryOperator op(rows);
    for (std::size_t j = 0; j < series.size(); ++j) {
        const auto snap = snapshot(j, eps);
        for (std::size_t k = 0; k < snap.points.size(); ++k) {
            for (int d = 0; d < top_order; ++d) op.add_point(snap.points[k], d, snap.matrices[k][d]);
        }
    }
    return op;
}

BoundaryOperator MultipointFamily::limit_boundary() const {
    BoundaryOperator op(rows);
    for (const auto& s : series) {
        if (s.is_zero_series()) continue;
        if (static_cast<int>(s.limit_matrices.size()) != top_order) {
            throw StructuralError("limit matrices must cover orders 0..n+r-1");
        }
        for (int d = 0; d < top_order; ++d) op.add_point(*s.limit_point, d, s.limit_matrices[d]);
    }
    return op;
}

const AssumptionCheck& AssumptionReport::get(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) return c;
    }
    throw StructuralError("unknown assumption " + name);
}

AssumptionReport check_multipoint_assumptions(const MultipointFamily& family,
                                              const LebesgueExponent& p,
                                              const std::vector<double>& schedule,
                                              const TrendRule& rule) {
    const int top = family.top_order;
    const double exponent = p.is_infinite() ? 1.0 : 1.0 - 1.0 / p.value();  // 1/p'
    AssumptionReport report;
    report.parameters = schedule;
    auto named = [](const char* name) {
        AssumptionCheck c;
        c.name = name;
        return c;
    };
    AssumptionCheck alpha = named("alpha"), beta = named("beta"), gamma = named("gamma"),
                    delta = named("delta"), gamma_p = named("gamma_p"),
                    gamma_prime = named("gamma_prime");

    for (double eps : schedule) {
        double a = 0, b = 0, g = 0, dl = 0, gp = 0, gq = 0;
        for (std::size_t j = 0; j < family.series.size(); ++j) {
            const auto& s = family.series[j];
            const auto snap = family.snapshot(j, eps);
            if (s.is_zero_series()) {
                for (int d = 0; d < top; ++d) {
                    double sum = 0;
                    for (const auto& per_order : snap.matrices) sum += entry_sum_norm(per_order[d]);
                    dl = std::max(dl, sum);
                }
                continue;
            }
            const double tj = *s.limit_point;
            for (double t : snap.points) a = std::max(a, std::abs(t - tj));
            for (int d = 0; d < top; ++d) {
                CMatrix total = CMatrix::Zero(family.rows, family.dimension);
                double weighted = 0;
                double weighted_p = 0;
                for (std::size_t k = 0; k < snap.points.size(); ++k) {
                    const double dist = std::abs(snap.points[k] - tj);
                    const double norm = entry_sum_norm(snap.matrices[k][d]);
                    total += snap.matrices[k][d];
                    weighted += norm * dist;
                    // |t - t_j|^0 is taken as 1 (p = 1).
                    weighted_p += norm * (exponent == 0.0 ? 1.0 : std::pow(dist, exponent));
                }
                b = std::max(b, entry_sum_norm(CMatrix(total - s.limit_matrices.at(d))));
                g = std::max(g, weighted);
                if (d == top - 1) gp = std::max(gp, weighted_p);
                if (d <= top - 2) gq = std::max(gq, weighted);
            }
        }
        alpha.values.push_back(a);
        beta.values.push_back(b);
        gamma.values.push_back(g);
        delta.values.push_back(dl);
        gamma_p.values.push_back(gp);
        gamma_prime.values.push_back(gq);
    }

    alpha.verdict = tends_to_zero(alpha.values, rule);
    beta.verdict = tends_to_zero(beta.values, rule);
    gamma.verdict = tends_to_zero(gamma.values, rule);
    delta.verdict = tends_to_zero(delta.values, rule);
    gamma_p.verdict = stays_bounded(gamma_p.values, rule);
    gamma_prime.verdict = tends_to_zero(gamma_prime.values, rule);

    alpha.required = beta.required = delta.required = true;
    if (p.is_infinite()) {
        gamma.required = true;
    } else {
        gamma_p.required = gamma_prime.required = true;
    }
    report.checks = {alpha, beta, gamma, delta, gamma_p, gamma_prime};
    report.verdict = true;
    for (const auto& c : report.checks) {
        if (c.required && !c.verdict) report.verdict = false;
    }
    return report;
}

ProblemFamily multipoint_problem_family(const MultipointFamily& family,
                                        const std::function<ProblemSpec(double)>& base,
                                        std::vector<double> schedule) {
    auto with_boundary = [](ProblemSpec spec, BoundaryOperator op, CVector data) {
        spec.boundary = std::move(op);
        if (spec.rhs) {
            spec.rhs->values = std::move(data);
        } else {
            spec.rhs = RightHandSide{MatrixFunction::zero(spec.coefficients.dimension, 1), std::move(data)};
        }
        return spec;
    };
    ProblemSpec limit = with_boundary(base(0.0), family.limit_boundary(), family.data(0.0));
    auto at = [family, base, with_boundary](double eps) {
        return with_boundary(base(eps), family.boundary_at(eps), family.data(eps));
    };
    return ProblemFamily{std::move(schedule), std::move(limit), std::move(at)};
}

// ---------------------------------------------------------------------------

ConditionTable characteristic_convergence(const ProblemFamily& family, const LimitOptions& options) {
    const auto& limit = family.at_zero;
    const Grid grid = grid_for(limit, options);
    const auto m0 = build_characteristic_matrix(limit, grid, options.rank_policy);
    ConditionTable table;
    table.columns = {"max|M(eps)-M(0)|"};
    for (double eps : family.schedule) {
        const ProblemSpec member = family.at(eps);
        check_member(member, limit);
        const auto m = build_characteristic_matrix(member, grid, options.rank_policy);
        if (m.entries.rows() != m0.entries.rows()) throw StructuralError("family members differ in q");
        table.parameters.push_back(eps);
        table.values.push_back({max_abs_entry(m.entries - m0.entries)});
    }
    return finish(std::move(table), options.trend);
}

SemicontinuityResult semicontinuity_check(const ProblemFamily& family, const LimitOptions& options) {
    const auto& limit = family.at_zero;
    const Grid grid = grid_for(limit, options);
    const auto r0 = solvability_report(build_characteristic_matrix(limit, grid, options.rank_policy));
    SemicontinuityResult out;
    out.limit_dim_kernel = r0.dim_kernel;
    out.limit_dim_cokernel = r0.dim_cokernel;
    std::vector<bool> ok;
    for (double eps : family.schedule) {
        const ProblemSpec member = family.at(eps);
        check_member(member, limit);
        const auto rep = solvability_report(build_characteristic_matrix(member, grid, options.rank_policy));
        out.parameters.push_back(eps);
        out.dim_kernel.push_back(rep.dim_kernel);
        out.dim_cokernel.push_back(rep.dim_cokernel);
        const bool holds = rep.dim_kernel <= r0.dim_kernel && rep.dim_cokernel <= r0.dim_cokernel;
        ok.push_back(holds);
        if (!holds) out.violations.push_back(eps);
    }
    for (std::size_t i = ok.size(); i-- > 0;) {
        if (!ok[i]) break;
        out.threshold = out.parameters[i];
    }
    out.holds_at_limit_end = !ok.empty() && ok.back();
    return out;
}

LimitReport convergence_experiment(const ProblemFamily& family, const LimitOptions& options) {
    const auto& limit = family.at_zero;
    if (!limit.rhs) throw StructuralError("convergence experiment needs right-hand sides");
    const Grid grid = grid_for(limit, options);

    LimitReport report;
    const auto m0 = build_characteristic_matrix(limit, grid, options.rank_policy);
    const auto r0 = solvability_report(m0);
    report.condition_0 = r0.well_posed;
    if (!r0.well_posed) throw NotWellPosed(r0);

    SolveOptions solve_options;
    solve_options.rank_policy = options.rank_policy;
    const Solution y0 = solve(limit, grid, solve_options);

    const int r = limit.coefficients.order;
    const int n = limit.coefficients.smoothness;
    std::vector<double> errors;
    std::vector<double> error_params;
    std::vector<double> m_dev;
    std::vector<std::vector<double>> a_dev(r);

    for (double eps : family.schedule) {
        const ProblemSpec member = family.at(eps);
        check_member(member, limit);
        LimitRow row;
        row.parameter = eps;
        for (int k = 0; k < r; ++k) {
            const auto diff = difference_stack(member.coefficients.coefficients[k],
                                               limit.coefficients.coefficients[k], grid, n);
            row.coefficient_deviation.push_back(sobolev_norm(diff, limit.p));
            a_dev[k].push_back(row.coefficient_deviation.back());
        }
        const auto m = build_characteristic_matrix(member, grid, options.rank_policy);
        const auto rep = solvability_report(m);
        row.characteristic_deviation = max_abs_entry(m.entries - m0.entries);
        m_dev.push_back(row.characteristic_deviation);
        row.dim_kernel = rep.dim_kernel;
        row.dim_cokernel = rep.dim_cokernel;
        row.well_posed = rep.well_posed;
        if (!member.rhs) throw StructuralError("family member lacks right-hand sides");
        row.discrepancy = discrepancy(member, y0.y);
        if (rep.well_posed) {
            const Solution y = solve(member, grid, solve_options);
            row.solution_error = sobolev_norm(y.y - y0.y, limit.p);
            errors.push_back(*row.solution_error);
            error_params.push_back(family.direction == LimitDirection::ParameterToZero ? eps : 1.0 / eps);
            if (*row.discrepancy > kUndefinedRatio) {
                row.ratio = *row.solution_error / *row.discrepancy;
            } else {
                row.flags.push_back("ratio-undefined");
            }
        } else {
            row.flags.push_back("not-well-posed");
        }
        report.rows.push_back(std::move(row));
    }

    report.condition_I = true;
    for (const auto& col : a_dev) report.condition_I = report.condition_I && tends_to_zero(col, options.trend);
    report.characteristic_convergence = tends_to_zero(m_dev, options.trend);
    // Rows far from the limit may be singular; the one closest to it may not.
    report.solution_convergence = !report.rows.empty() && report.rows.back().well_posed &&
                                  tends_to_zero(errors, options.trend);
    for (const auto& row : report.rows) {
        if (!row.ratio) continue;
        report.ratio_min = std::min(report.ratio_min.value_or(*row.ratio), *row.ratio);
        report.ratio_max = std::max(report.ratio_max.value_or(*row.ratio), *row.ratio);
    }
    report.error_slope = loglog_slope(error_params, errors);
    return report;
}

}  // namespace fredholm
