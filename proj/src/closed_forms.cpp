#include "fredholm/closed_forms.hpp"

#include <cmath>
#include <functional>

#include <Eigen/Eigenvalues>

namespace fredholm::closed_forms {

namespace {

constexpr double kRelativeStop = 1e-14;
constexpr int kMaxTerms = 400;

// Sums term_0 + term_1 + ... with term_{k+1} = term_k * x * ratio(k).
// `ratio` must decrease to zero so that |x| * ratio(k) eventually drops
// below one; the tail after the last included term is bounded geometrically.
MatrixFunctionResult sum_series(CMatrix first_term, const CMatrix& x,
                                const std::function<double(int)>& ratio) {
    const double x_norm = entry_sum_norm(x);
    MatrixFunctionResult out;
    out.value = first_term;
    CMatrix term = std::move(first_term);
    out.series_terms = 1;
    for (int k = 0; k < kMaxTerms; ++k) {
        term = term * x * ratio(k);
        out.value += term;
        ++out.series_terms;
        if (!out.value.allFinite()) throw NumericalError("matrix series overflowed");
        const double rho = x_norm * ratio(k + 1);
        if (rho < 1.0) {
            out.truncation_bound = entry_sum_norm(term) * rho / (1.0 - rho);
            if (out.truncation_bound <= kRelativeStop * entry_sum_norm(out.value)) return out;
        }
    }
    throw NumericalError("matrix series did not converge within the term limit");
}

void require_square(const CMatrix& a) {
    if (a.rows() != a.cols()) throw StructuralError("matrix function needs a square argument");
    if (!a.allFinite()) throw NumericalError("matrix function argument has non-finite entries");
}

CMatrix power(const CMatrix& a, int k) {
    CMatrix out = CMatrix::Identity(a.rows(), a.cols());
    for (int i = 0; i < k; ++i) out = out * a;
    return out;
}

const CMatrix& at_or_zero(const std::vector<CMatrix>& list, std::size_t k, const CMatrix& zero) {
    return k < list.size() ? list[k] : zero;
}

}  // namespace

MatrixFunctionResult matrix_exp(const CMatrix& a, double s) {
    require_square(a);
    const CMatrix x = a * s;
    const double norm = entry_sum_norm(x);
    int squarings = 0;
    if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    if (squarings > 1000) throw NumericalError("matrix exponential argument too large");
    const CMatrix scaled = x / std::ldexp(1.0, squarings);
    auto result = sum_series(CMatrix::Identity(a.rows(), a.cols()), scaled,
                             [](int k) { return 1.0 / (k + 1); });
    for (int i = 0; i < squarings; ++i) result.value = result.value * result.value;
    if (!result.value.allFinite()) throw NumericalError("matrix exponential overflowed");
    return result;
}

MatrixFunctionResult phi(const CMatrix& a, double s) {
    require_square(a);
    const CMatrix x = -a * s;
    return sum_series(CMatrix::Identity(a.rows(), a.cols()) * s, x,
                      [](int k) { return 1.0 / (k + 2); });
}

MatrixFunctionResult cos_sqrt(const CMatrix& a, double s) {
    require_square(a);
    const CMatrix x = -a * (s * s);
    return sum_series(CMatrix::Identity(a.rows(), a.cols()), x,
                      [](int k) { return 1.0 / ((2.0 * k + 1) * (2.0 * k + 2)); });
}

MatrixFunctionResult sinc_sqrt(const CMatrix& a, double s) {
    require_square(a);
    const CMatrix x = -a * (s * s);
    return sum_series(CMatrix::Identity(a.rows(), a.cols()) * s, x,
                      [](int k) { return 1.0 / ((2.0 * k + 2) * (2.0 * k + 3)); });
}

CMatrix oracle_characteristic(Example example, const OracleParameters& params) {
    if (params.alpha.empty()) throw StructuralError("oracle needs at least one alpha matrix");
    const auto q = params.alpha.front().rows();
    const auto m = params.alpha.front().cols();
    for (const auto& mat : params.alpha) {
        if (mat.rows() != q || mat.cols() != m) throw StructuralError("alpha matrices differ in shape");
    }
    for (const auto& mat : params.beta) {
        if (mat.rows() != q || mat.cols() != m) throw StructuralError("beta matrices differ in shape");
    }
    const bool uses_a = example == Example::Ex1 || example == Example::Ex3 || example == Example::Ex4;
    if (uses_a && (params.a.rows() != m || params.a.cols() != m)) {
        throw StructuralError("coefficient matrix must be m x m");
    }
    const CMatrix zero = CMatrix::Zero(q, m);
    const std::size_t terms = std::max(params.alpha.size(), params.beta.size());

    switch (example) {
        case Example::Ex1: {
            CMatrix out = CMatrix::Zero(q, m);
            const CMatrix minus_a = -params.a;
            for (std::size_t k = 0; k < params.alpha.size(); ++k) {
                out += params.alpha[k] * power(minus_a, static_cast<int>(k));
            }
            return out;
        }
        case Example::Ex2: {
            CMatrix out = CMatrix::Zero(q, m);
            for (const auto& mat : params.alpha) out += mat;
            return out;
        }
        case Example::Ex5:
            return params.alpha.front();
        case Example::Ex3: {
            // Y_1 = I, Y_2 = phi(A, t - a), Y_2^(k) = (-A)^(k-1) exp(-A (t - a)) for k >= 1.
            const CMatrix minus_a = -params.a;
            const CMatrix e = matrix_exp(params.a, -params.length).value;
            CMatrix out(q, 2 * m);
            out.leftCols(m) = at_or_zero(params.alpha, 0, zero) + at_or_zero(params.beta, 0, zero);
            CMatrix second = at_or_zero(params.beta, 0, zero) * phi(params.a, params.length).value;
            for (std::size_t k = 1; k < terms; ++k) {
                second += (at_or_zero(params.alpha, k, zero) + at_or_zero(params.beta, k, zero) * e) *
                          power(minus_a, static_cast<int>(k) - 1);
            }
            out.rightCols(m) = second;
            return out;
        }
        case Example::Ex4: {
            // Y_1 = cos(sqrt(A)(t-a)), Y_2 = sin(sqrt(A)(t-a)) sqrt(A)^{-1};
            // Y_1^(2j) = (-A)^j C, Y_1^(2j+1) = (-A)^(j+1) S, Y_2^(2j) = (-A)^j S, Y_2^(2j+1) = (-A)^j C.
            const CMatrix minus_a = -params.a;
            const CMatrix c = cos_sqrt(params.a, params.length).value;
            const CMatrix s = sinc_sqrt(params.a, params.length).value;
            CMatrix first = CMatrix::Zero(q, m);
            CMatrix second = CMatrix::Zero(q, m);
            for (std::size_t k = 0; k < terms; ++k) {
                const CMatrix& alpha = at_or_zero(params.alpha, k, zero);
                const CMatrix& beta = at_or_zero(params.beta, k, zero);
                const int j = static_cast<int>(k / 2);
                if (k % 2 == 0) {
                    const CMatrix p = power(minus_a, j);
                    first += (alpha + beta * c) * p;
                    second += beta * s * p;
                } else {
                    first += beta * s * power(minus_a, j + 1);
                    second += (alpha + beta * c) * power(minus_a, j);
                }
            }
            CMatrix out(q, 2 * m);
            out.leftCols(m) = first;
            out.rightCols(m) = second;
            return out;
        }
    }
    throw StructuralError("unknown example");
}

CMatrix eigen_function(const CMatrix& a, Complex (*scalar)(Complex lambda, double s), double s) {
    require_square(a);
    Eigen::ComplexEigenSolver<CMatrix> solver(a);
    if (solver.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
    const CMatrix& v = solver.eigenvectors();
    CVector f(a.rows());
    for (Eigen::Index i = 0; i < a.rows(); ++i) f(i) = scalar(solver.eigenvalues()(i), s);
    return v * f.asDiagonal() * v.inverse();
}

Complex scalar_exp(Complex lambda, double s) { return std::exp(lambda * s); }

Complex scalar_phi(Complex lambda, double s) {
    if (std::abs(lambda * s) < 1e-8) return s - lambda * s * s / 2.0;
    return (1.0 - std::exp(-lambda * s)) / lambda;
}

Complex scalar_cos_sqrt(Complex lambda, double s) { return std::cos(std::sqrt(lambda) * s); }

Complex scalar_sinc_sqrt(Complex lambda, double s) {
    const Complex root = std::sqrt(lambda);
    if (std::abs(root * s) < 1e-8) return s - lambda * s * s * s / 6.0;
    return std::sin(root * s) / root;
}

}  // namespace fredholm::closed_forms
