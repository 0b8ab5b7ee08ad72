#pragma once

#include <string>
#include <vector>

#include "fredholm/cli/document.hpp"

namespace fredholm::cli {

/// Deterministic JSON: insertion-ordered keys, two-space indent, floats at
/// 17 significant digits, non-finite floats as the strings "inf", "-inf", "nan".
std::string dump_machine(const OrderedJson& json);

OrderedJson complex_json(Complex v);
OrderedJson matrix_json(const CMatrix& m);
OrderedJson vector_json(const CVector& v);
OrderedJson real_json(double v);

/// Column-aligned plain-text table.
class TextTable {
public:
    explicit TextTable(std::vector<std::string> headers) : headers_(std::move(headers)) {}
    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
    std::string render() const;

private:
    std::vector<std::string> headers_;
    std::vector<std::vector<std::string>> rows_;
};

std::string format_real(double v, int digits = 6);
std::string format_complex(Complex v, int digits = 6);

}  // namespace fredholm::cli
