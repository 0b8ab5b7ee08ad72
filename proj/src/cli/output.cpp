#include "fredholm/cli/output.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace fredholm::cli {

namespace {

std::string escape(const std::string& s) {
    // nlohmann's serializer handles escaping of a lone string value.
    return OrderedJson(s).dump();
}

std::string format_float(double v) {
    if (std::isnan(v)) return "\"nan\"";
    if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string out = buf;
    // keep floats recognizable as floats
    if (out.find_first_of(".eE") == std::string::npos) out += ".0";
    return out;
}

void write(std::ostringstream& os, const OrderedJson& j, int depth) {
    const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(depth + 1) * 2, ' ');
    switch (j.type()) {
        case OrderedJson::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) os << ",\n";
                first = false;
                os << inner << escape(key) << ": ";
                write(os, value, depth + 1);
            }
            os << "\n" << pad << "}";
            return;
        }
        case OrderedJson::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            // arrays of scalars stay on one line
            bool flat = true;
            for (const auto& v : j) {
                if (v.is_structured() && !(v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())) {
                    flat = false;
                }
            }
            if (flat) {
                os << "[";
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i) os << ", ";
                    write(os, j[i], depth + 1);
                }
                os << "]";
                return;
            }
            os << "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) os << ",\n";
                os << inner;
                write(os, j[i], depth + 1);
            }
            os << "\n" << pad << "]";
            return;
        }
        case OrderedJson::value_t::number_float: os << format_float(j.get<double>()); return;
        default: os << j.dump(); return;
    }
}

}  // namespace

std::string dump_machine(const OrderedJson& json) {
    std::ostringstream os;
    write(os, json, 0);
    os << "\n";
    return os.str();
}

OrderedJson real_json(double v) { return v; }

OrderedJson complex_json(Complex v) { return OrderedJson::array({v.real(), v.imag()}); }

OrderedJson matrix_json(const CMatrix& m) {
    OrderedJson out = OrderedJson::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        OrderedJson row = OrderedJson::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_json(m(i, k)));
        out.push_back(row);
    }
    return out;
}

OrderedJson vector_json(const CVector& v) {
    OrderedJson out = OrderedJson::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
    return out;
}

std::string format_real(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::string format_complex(Complex v, int digits) {
    if (v.imag() == 0.0) return format_real(v.real(), digits);
    const char sign = v.imag() < 0 ? '-' : '+';
    return format_real(v.real(), digits) + sign + format_real(std::abs(v.imag()), digits) + "i";
}

std::string TextTable::render() const {
    std::vector<std::size_t> widths(headers_.size(), 0);
    for (std::size_t c = 0; c < headers_.size(); ++c) widths[c] = headers_[c].size();
    for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size() && c < widths.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
    }
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < widths.size(); ++c) {
            const std::string cell = c < cells.size() ? cells[c] : "";
            if (c) os << "  ";
            os << cell << std::string(widths[c] - cell.size(), ' ');
        }
        os << "\n";
    };
    line(headers_);
    std::vector<std::string> rule;
    for (auto w : widths) rule.emplace_back(w, '-');
    line(rule);
    for (const auto& row : rows_) line(row);
    return os.str();
}

}  // namespace fredholm::cli
