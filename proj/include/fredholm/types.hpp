#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fredholm {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Raised when shapes, orders or intervals of two objects do not fit together.
class StructuralError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Raised when a numerical procedure cannot produce a finite result.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Severity { Info, Warning, Error };

struct Diagnostic {
    Severity severity = Severity::Info;
    std::string code;
    std::string message;
};

using Diagnostics = std::vector<Diagnostic>;

/// Entrywise absolute-value sum. This is the single finite-dimensional norm
/// used for vectors and matrices throughout the library.
inline double entry_sum_norm(const CMatrix& x) {
    return x.cwiseAbs().sum();
}

inline double entry_sum_norm(const CVector& x) {
    return x.cwiseAbs().sum();
}

inline bool has_code(const Diagnostics& diags, const std::string& code) {
    for (const auto& d : diags) {
        if (d.code == code) return true;
    }
    return false;
}

}  // namespace fredholm
