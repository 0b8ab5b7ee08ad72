#include "fredholm/characteristic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fredholm {

Diagnostics ProblemSpec::validate() const {
    coefficients.validate();
    Diagnostics diags = fredholm::validate(boundary, coefficients, interval);
    for (const auto& d : diags) {
        if (d.severity == Severity::Error) throw StructuralError(d.message);
    }
    if (rhs) {
        if (rhs->forcing.rows() != coefficients.dimension || rhs->forcing.cols() != 1) {
            throw StructuralError("right-hand side f must be m x 1");
        }
        if (rhs->values.size() != boundary.rows()) {
            throw StructuralError("boundary data c must have q entries");
        }
    }
    return diags;
}

double CharacteristicMatrix::condition_number() const {
    if (singular_values.empty()) return std::numeric_limits<double>::infinity();
    const double smallest = singular_values.back();
    if (smallest == 0.0) return std::numeric_limits<double>::infinity();
    return singular_values.front() / smallest;
}

CharacteristicMatrix analyze_matrix(CMatrix entries, int blocks, int block_cols,
                                    const RankPolicy& policy) {
    if (entries.cols() != static_cast<Eigen::Index>(blocks) * block_cols) {
        throw StructuralError("characteristic matrix must have r*m columns");
    }
    CharacteristicMatrix out;
    out.blocks = blocks;
    out.block_cols = block_cols;

    Eigen::JacobiSVD<CMatrix> svd(entries, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    out.singular_values.assign(sv.data(), sv.data() + sv.size());
    out.right_singular_vectors = svd.matrixV();

    const double q = static_cast<double>(entries.rows());
    const double rm = static_cast<double>(entries.cols());
    const double sigma_max = out.singular_values.empty() ? 0.0 : out.singular_values.front();
    out.rank_tolerance = policy.absolute_tolerance.value_or(sigma_max * std::max(q, rm) *
                                                            policy.relative_tolerance);
    out.numerical_rank = static_cast<int>(
        std::count_if(out.singular_values.begin(), out.singular_values.end(),
                      [&](double s) { return s > out.rank_tolerance; }));

    const int rank = out.numerical_rank;
    const auto count = static_cast<int>(out.singular_values.size());
    if (rank > 0) {
        const double kept = out.singular_values[rank - 1];
        const double next = rank < count ? out.singular_values[rank] : out.rank_tolerance;
        const double gap = next > 0.0 ? kept / next : std::numeric_limits<double>::infinity();
        if (gap < policy.fragile_ratio) {
            std::ostringstream msg;
            msg << "rank decision is fragile: sigma_" << rank << " / "
                << (rank < count ? "sigma_" + std::to_string(rank + 1) : std::string("tolerance"))
                << " = " << gap << " < " << policy.fragile_ratio;
            out.diagnostics.push_back({Severity::Warning, "rank-fragile", msg.str()});
        }
    }
    out.entries = std::move(entries);
    return out;
}

CharacteristicMatrix characteristic_matrix(const BoundaryOperator& boundary,
                                           const FundamentalSet& set, const RankPolicy& policy) {
    if (set.members.empty()) throw StructuralError("empty fundamental set");
    const int m = set.members.front().cols();
    const int r = static_cast<int>(set.members.size());
    CMatrix entries(boundary.rows(), r * m);
    for (int i = 0; i < r; ++i) entries.middleCols(i * m, m) = boundary.apply_to_matrix(set.members[i]);
    return analyze_matrix(std::move(entries), r, m, policy);
}

CharacteristicMatrix build_characteristic_matrix(const ProblemSpec& spec, const Grid& grid,
                                                 const RankPolicy& policy) {
    if (!(grid.interval() == spec.interval)) throw StructuralError("grid does not span the problem interval");
    auto diags = spec.validate();
    const auto set = fundamental_set(spec.coefficients, grid);
    auto out = characteristic_matrix(spec.boundary, set, policy);
    diags.insert(diags.end(), out.diagnostics.begin(), out.diagnostics.end());
    out.diagnostics = std::move(diags);
    return out;
}

SolvabilityReport solvability_report(const CharacteristicMatrix& m) {
    SolvabilityReport report;
    const int q = m.rows();
    const int rm = m.cols();
    report.index = rm - q;
    report.dim_kernel = rm - m.numerical_rank;
    report.dim_cokernel = q - m.numerical_rank;
    report.well_posed = q == rm && report.dim_kernel == 0;
    report.diagnostics = m.diagnostics;
    return report;
}

std::vector<CVector> kernel_directions(const CharacteristicMatrix& m) {
    std::vector<CVector> out;
    for (int j = m.numerical_rank; j < m.cols(); ++j) out.emplace_back(m.right_singular_vectors.col(j));
    return out;
}

}  // namespace fredholm
