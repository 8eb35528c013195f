#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "kahler/polynomial.hpp"
#include "kahler/tensor.hpp"

namespace kahler {

/// Shortest round-trip decimal form ("-4", "0.5", "1e-17").
inline std::string format_number(double v) {
    if (v == 0.0) return "0";
    std::ostringstream os;
    os.precision(17);
    os << v;
    std::string s = os.str();
    // prefer a shorter representation when it round-trips
    for (int p = 1; p < 17; ++p) {
        std::ostringstream t;
        t.precision(p);
        t << v;
        if (std::stod(t.str()) == v) return t.str();
    }
    return s;
}

inline std::string variable_name(int m_bar, int var) {
    return (var < m_bar ? "x" : "y") + std::to_string((var % m_bar) + 1);
}

/// "2*x1-y3+0.5*x1^2"; "0" for the zero polynomial.
inline std::string format_polynomial(const Polynomial& p, int m_bar) {
    if (p.is_zero()) return "0";
    std::string out;
    for (const auto& [e, c] : p.terms()) {
        std::string mono;
        for (std::size_t k = 0; k < e.size(); ++k) {
            if (e[k] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += variable_name(m_bar, static_cast<int>(k));
            if (e[k] > 1) mono += "^" + std::to_string(e[k]);
        }
        std::string coeff;
        if (mono.empty()) {
            coeff = format_number(c);
        } else if (c == 1.0) {
            coeff = "";
        } else if (c == -1.0) {
            coeff = "-";
        } else {
            coeff = format_number(c) + "*";
        }
        std::string term = coeff + mono;
        if (!out.empty() && term.front() != '-') out += "+";
        out += term;
    }
    return out;
}

/// "2*f1-1*e2"; "0" for the zero vector.
inline std::string format_vector(const SpaceConfig& s, const std::vector<double>& v) {
    std::string out;
    for (int d = 0; d < s.m(); ++d) {
        const double c = v[static_cast<std::size_t>(d)];
        if (c == 0.0) continue;
        std::string term = format_number(c) + "*" + s.basis_name(d);
        if (!out.empty() && term.front() != '-') out += "+";
        out += term;
    }
    return out.empty() ? "0" : out;
}

/// "(x3)*e2+(y3)*f2"; "0" for the zero vector field.
inline std::string format_poly_vector(const SpaceConfig& s, const std::vector<Polynomial>& v) {
    std::string out;
    for (int d = 0; d < s.m(); ++d) {
        const Polynomial& p = v[static_cast<std::size_t>(d)];
        if (p.is_zero()) continue;
        if (!out.empty()) out += "+";
        out += "(" + format_polynomial(p, s.m_bar()) + ")*" + s.basis_name(d);
    }
    return out.empty() ? "0" : out;
}

} // namespace kahler
