#pragma once

#include <vector>

#include "fredholm/types.hpp"

namespace fredholm::closed_forms {

struct MatrixFunctionResult {
    CMatrix value;
    int series_terms = 0;
    double truncation_bound = 0.0;
};

/// exp(A s) by scaling and squaring of a truncated Taylor series.
MatrixFunctionResult matrix_exp(const CMatrix& a, double s);

/// sum_k (-1)^k A^k s^(k+1) / (k+1)!  ==  (I - exp(-A s)) A^{-1} when A is invertible.
MatrixFunctionResult phi(const CMatrix& a, double s);

/// sum_k (-1)^k A^k s^(2k) / (2k)!  ==  cos(sqrt(A) s)
MatrixFunctionResult cos_sqrt(const CMatrix& a, double s);

/// sum_k (-1)^k A^k s^(2k+1) / (2k+1)!  ==  sin(sqrt(A) s) sqrt(A)^{-1}
MatrixFunctionResult sinc_sqrt(const CMatrix& a, double s);

enum class Example { Ex1, Ex2, Ex3, Ex4, Ex5 };

/// Data of the constant-coefficient closed forms.
///
/// Ex1: y' + A y, B y = sum_k alpha[k] y^(k)(a).
/// Ex2: y' = f, order-zero matrices alpha[k] at arbitrary points (higher
///      orders do not contribute).
/// Ex3: y'' + A y', B y = sum_k alpha[k] y^(k)(a) + beta[k] y^(k)(b).
/// Ex4: y'' + A y, same boundary form as Ex3.
/// Ex5: y' = f, canonical form with alpha[0] the order-zero matrix at a.
struct OracleParameters {
    CMatrix a;                   // coefficient matrix A (unused by Ex2, Ex5)
    std::vector<CMatrix> alpha;  // q x m each
    std::vector<CMatrix> beta;   // q x m each; Ex3/Ex4 only, may be empty
    double length = 1.0;         // b - a
};

/// Closed-form q x (r*m) characteristic matrix.
CMatrix oracle_characteristic(Example example, const OracleParameters& params);

/// V diag(f(lambda)) V^{-1} for a diagonalizable matrix; used to cross-check
/// the series evaluations.
CMatrix eigen_function(const CMatrix& a, Complex (*scalar)(Complex lambda, double s), double s);

Complex scalar_exp(Complex lambda, double s);
Complex scalar_phi(Complex lambda, double s);
Complex scalar_cos_sqrt(Complex lambda, double s);
Complex scalar_sinc_sqrt(Complex lambda, double s);

}  // namespace fredholm::closed_forms
