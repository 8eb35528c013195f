#pragma once

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "kahler/connection.hpp"
#include "kahler/decomposition.hpp"
#include "kahler/error.hpp"
#include "kahler/realization.hpp"
#include "kahler/symmetry.hpp"
#include "kahler/witnesses.hpp"

namespace kahler {

using Json = nlohmann::ordered_json;

namespace detail {

[[noreturn]] inline void schema_error(const std::string& what, const std::string& rule) {
    throw InvalidArgument(what + ": " + rule);
}

inline const Json& require_field(const Json& obj, const char* key, const std::string& what) {
    if (!obj.is_object()) schema_error(what, "expected a JSON object");
    auto it = obj.find(key);
    if (it == obj.end()) schema_error(what, std::string("missing field '") + key + "'");
    return *it;
}

inline int require_int(const Json& v, const std::string& what, const std::string& field) {
    if (!v.is_number_integer()) schema_error(what, "'" + field + "' must be an integer");
    return v.get<int>();
}

inline double require_finite_number(const Json& v, const std::string& what, const std::string& field) {
    if (!v.is_number()) schema_error(what, "'" + field + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) schema_error(what, "'" + field + "' must be finite");
    return d;
}

inline int require_m_bar(const Json& j, const std::string& what) {
    const int mb = require_int(require_field(j, "m_bar", what), what, "m_bar");
    if (mb < 1) schema_error(what, "'m_bar' must be >= 1");
    return mb;
}

inline Polynomial polynomial_from_json(const Json& terms, int nvars, const std::string& what) {
    if (!terms.is_array()) schema_error(what, "polynomial must be a list of {coeff, powers}");
    Polynomial p(nvars);
    std::set<std::vector<int>> seen;
    for (const Json& t : terms) {
        const double c = require_finite_number(require_field(t, "coeff", what), what, "coeff");
        const Json& pw = require_field(t, "powers", what);
        if (!pw.is_array() || static_cast<int>(pw.size()) != nvars) {
            schema_error(what, "'powers' must list " + std::to_string(nvars) + " exponents");
        }
        std::vector<int> e;
        for (const Json& x : pw) {
            const int v = require_int(x, what, "powers");
            if (v < 0) schema_error(what, "'powers' entries must be nonnegative");
            e.push_back(v);
        }
        if (!seen.insert(e).second) schema_error(what, "duplicate exponent vector in polynomial");
        p.add_term(std::move(e), c);
    }
    return p;
}

inline Json polynomial_to_json(const Polynomial& p) {
    Json out = Json::array();
    for (const auto& [e, c] : p.terms()) out.push_back(Json{{"coeff", c}, {"powers", e}});
    return out;
}

} // namespace detail

inline Json tensor_to_json(const Tensor4& t) {
    return Json{{"m_bar", t.config().m_bar()}, {"tensor", t.data()}};
}

inline Tensor4 tensor_from_json(const Json& j) {
    const std::string what = "TensorFile";
    const int mb = detail::require_m_bar(j, what);
    const Json& list = detail::require_field(j, "tensor", what);
    const SpaceConfig cfg(mb);
    const std::size_t n = Tensor4::size_for(cfg);
    if (!list.is_array()) detail::schema_error(what, "'tensor' must be a list");
    if (list.size() != n) {
        detail::schema_error(what, "'tensor' must have (2*m_bar)^4 = " + std::to_string(n) + " entries, got " +
                                       std::to_string(list.size()));
    }
    std::vector<double> data;
    data.reserve(n);
    for (const Json& v : list) data.push_back(detail::require_finite_number(v, what, "tensor"));
    return Tensor4(cfg, std::move(data));
}

/// Entries use 1-based indices with i <= j.
inline Json theta_to_json(const ThetaField& theta) {
    Json entries = Json::array();
    for (const auto& [key, e] : theta.entries()) {
        entries.push_back(Json{{"i", key.i + 1},
                               {"j", key.j + 1},
                               {"k", key.k + 1},
                               {"u", detail::polynomial_to_json(e.u)},
                               {"v", detail::polynomial_to_json(e.v)}});
    }
    return Json{{"m_bar", theta.m_bar()}, {"entries", entries}};
}

inline ThetaField theta_from_json(const Json& j) {
    const std::string what = "ThetaFile";
    const int mb = detail::require_m_bar(j, what);
    const Json& entries = detail::require_field(j, "entries", what);
    if (!entries.is_array()) detail::schema_error(what, "'entries' must be a list");
    ThetaField theta(mb);
    std::set<std::tuple<int, int, int>> seen;
    for (const Json& e : entries) {
        const int i = detail::require_int(detail::require_field(e, "i", what), what, "i");
        const int jj = detail::require_int(detail::require_field(e, "j", what), what, "j");
        const int k = detail::require_int(detail::require_field(e, "k", what), what, "k");
        if (i < 1 || jj < 1 || k < 1) detail::schema_error(what, "indices are 1-based");
        if (i > jj) detail::schema_error(what, "entry indices must satisfy i <= j");
        if (jj > mb || k > mb) detail::schema_error(what, "indices must not exceed m_bar");
        if (!seen.insert({i, jj, k}).second) {
            detail::schema_error(what, "duplicate entry (" + std::to_string(i) + "," + std::to_string(jj) + "," +
                                           std::to_string(k) + ")");
        }
        ThetaEntry t(detail::polynomial_from_json(detail::require_field(e, "u", what), 2 * mb, what),
                     detail::polynomial_from_json(detail::require_field(e, "v", what), 2 * mb, what));
        theta.set(i - 1, jj - 1, k - 1, std::move(t));
    }
    return theta;
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InvalidArgument(path + ": invalid JSON (" + e.what() + ")");
    }
}

inline void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot write " + path);
    out << j.dump(2) << '\n';
}

inline Tensor4 read_tensor_file(const std::string& path) { return tensor_from_json(read_json_file(path)); }
inline ThetaField read_theta_file(const std::string& path) { return theta_from_json(read_json_file(path)); }
inline void write_tensor_file(const std::string& path, const Tensor4& t) { write_json_file(path, tensor_to_json(t)); }
inline void write_theta_file(const std::string& path, const ThetaField& t) { write_json_file(path, theta_to_json(t)); }

// Reports

inline Json to_json(const SymmetryReport& r) {
    Json flags = Json::object(), viol = Json::object();
    r.for_each([&](const char* name, const IdentityCheck& c) {
        flags[name] = c.holds;
        viol[name] = c.max_violation;
    });
    return Json{{"in_K", r.in_K}, {"tolerance", r.tolerance}, {"flags", flags}, {"max_violation", viol}};
}

inline Json to_json(const WDecomposition& w) {
    Json norms = Json::object();
    for (int i = 1; i <= kModuleCount; ++i) norms[module_label(i - 1)] = w.module(i).norm;
    return Json{{"norms", norms}, {"residual", w.residual}, {"plus_norm", w.plus_norm}, {"minus_norm", w.minus_norm}};
}

inline Json to_json(const DimensionTable& t) {
    Json dims = Json::object();
    for (const std::string& label : dimension_labels()) dims[label] = t.dims.at(label);
    return Json{{"m_bar", t.m_bar}, {"dims", dims}};
}

inline Json to_json(const RealizationReport& r) {
    return Json{{"input_k_violation", r.input_k_violation},
                {"curvature_match", r.curvature_match},
                {"torsion", r.torsion},
                {"nabla_J", r.nabla_j},
                {"degree", r.degree},
                {"vanishes_at_origin", r.vanishes_at_origin}};
}

inline Json to_json(const WitnessReport& r) {
    Json checks = Json::array();
    for (const WitnessCheck& c : r.checks) {
        checks.push_back(Json{{"label", c.label}, {"expected", c.expected}, {"computed", c.computed}, {"ok", c.ok}});
    }
    Json out{{"case", r.case_id}, {"m_bar", r.m_bar}, {"rho", r.rho}, {"ok", r.ok()}, {"checks", checks}};
    if (!r.notice.empty()) out["notice"] = r.notice;
    return out;
}

} // namespace kahler
