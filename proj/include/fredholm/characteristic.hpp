#pragma once

#include <optional>
#include <vector>

#include "fredholm/boundary.hpp"
#include "fredholm/ode.hpp"

namespace fredholm {

struct RightHandSide {
    MatrixFunction forcing;  // m x 1, derivatives to order n
    CVector values;          // length q
};

/// L y = f on (a, b), B y = c, posed in the Sobolev space W_p^{n+r}.
struct ProblemSpec {
    Interval interval;
    CoefficientSet coefficients;
    BoundaryOperator boundary;
    LebesgueExponent p;
    std::optional<RightHandSide> rhs;

    int equations() const { return coefficients.state_size(); }  // r*m
    int conditions() const { return boundary.rows(); }           // q

    /// Shape checks plus boundary diagnostics. Throws StructuralError on
    /// errors that make the problem meaningless (mismatched m, bad orders).
    Diagnostics validate() const;
};

/// Numerical-rank policy. The default cutoff is
/// sigma_max * max(q, rm) * relative_tolerance.
struct RankPolicy {
    std::optional<double> absolute_tolerance;
    double relative_tolerance = 1e-10;
    // A rank decision with sigma_rank / sigma_{rank+1} below this is flagged.
    double fragile_ratio = 1e3;
};

/// q x (r*m) matrix ([B Y_1], ..., [B Y_r]) with its singular value analysis.
struct CharacteristicMatrix {
    CMatrix entries;
    int blocks = 1;      // r
    int block_cols = 1;  // m
    std::vector<double> singular_values;  // non-increasing
    double rank_tolerance = 0.0;
    int numerical_rank = 0;
    CMatrix right_singular_vectors;  // (r*m) x (r*m)
    Diagnostics diagnostics;

    int rows() const { return static_cast<int>(entries.rows()); }
    int cols() const { return static_cast<int>(entries.cols()); }
    CMatrix block(int i) const { return entries.middleCols(i * block_cols, block_cols); }
    /// sigma_max / sigma_min over the min(q, rm) singular values; inf if singular.
    double condition_number() const;
};

struct SolvabilityReport {
    int index = 0;
    int dim_kernel = 0;
    int dim_cokernel = 0;
    bool well_posed = false;
    Diagnostics diagnostics;
};

/// SVD-based rank analysis of an assembled q x (r*m) matrix.
CharacteristicMatrix analyze_matrix(CMatrix entries, int blocks, int block_cols,
                                    const RankPolicy& policy = {});

/// Block i is apply_to_matrix(B, Y_i).
CharacteristicMatrix characteristic_matrix(const BoundaryOperator& boundary,
                                           const FundamentalSet& set,
                                           const RankPolicy& policy = {});

CharacteristicMatrix build_characteristic_matrix(const ProblemSpec& spec, const Grid& grid,
                                                 const RankPolicy& policy = {});

SolvabilityReport solvability_report(const CharacteristicMatrix& m);

/// Orthonormal basis of the numerical null space; size equals dim ker.
std::vector<CVector> kernel_directions(const CharacteristicMatrix& m);

}  // namespace fredholm
