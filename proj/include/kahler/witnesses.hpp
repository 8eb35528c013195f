#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kahler/connection.hpp"
#include "kahler/decomposition.hpp"
#include "kahler/error.hpp"
#include "kahler/format.hpp"
#include "kahler/symmetry.hpp"

namespace kahler {

struct WitnessCase {
    std::string id;
    int rho_count = 0;
    int min_m_bar = 2;
    std::string summary;
};

inline const std::vector<WitnessCase>& witness_cases() {
    static const std::vector<WitnessCase> cases{
        {"4.1.1", 2, 2, "W5 + W6 via Theta111 = r1*conj(z1), Theta122 = i*r2*conj(z1)"},
        {"4.1.2", 2, 2, "W2 + W4 via Theta111 = r1*z2, Theta222 = r2*z1"},
        {"4.1.3a", 4, 2, "W1 + W3 + W7 via Theta111, Theta222 antiholomorphic"},
        {"4.1.3b", 1, 2, "W8 via Theta122 = r5*conj(z2)"},
        {"4.2.w9w10", 3, 2, "W9 and W10 via A1 - A2 and A3 + A4"},
        {"4.2.w12", 0, 3, "W12 via Theta112 = z3"},
        {"4.2.w11", 0, 3, "W11 via Theta112 = conj(z3)"},
    };
    return cases;
}

inline const WitnessCase& witness_case(const std::string& id) {
    const auto& cases = witness_cases();
    auto it = std::find_if(cases.begin(), cases.end(), [&](const WitnessCase& c) { return c.id == id; });
    if (it == cases.end()) {
        std::string known;
        for (const auto& c : cases) known += (known.empty() ? "" : ", ") + c.id;
        throw InvalidArgument("unknown case '" + id + "' (known: " + known + ")");
    }
    return *it;
}

namespace detail {

inline void require_case_inputs(const WitnessCase& wc, const std::vector<double>& rho, int m_bar) {
    if (static_cast<int>(rho.size()) < wc.rho_count) {
        throw InvalidArgument("case " + wc.id + " needs " + std::to_string(wc.rho_count) + " rho values, got " +
                              std::to_string(rho.size()));
    }
    if (m_bar < wc.min_m_bar) {
        throw InvalidArgument("case " + wc.id + " needs m_bar >= " + std::to_string(wc.min_m_bar));
    }
}

} // namespace detail

/// Theta of the named witness. Indices in the case ids and displays are
/// 1-based; rho holds the case parameters in display order (case 4.1.3b
/// takes its single parameter r5).
inline ThetaField paper_example_theta(const std::string& id, const std::vector<double>& rho, int m_bar) {
    const WitnessCase& wc = witness_case(id);
    detail::require_case_inputs(wc, rho, m_bar);
    using C = std::complex<double>;
    auto r = [&](int k) { return rho.at(static_cast<std::size_t>(k - 1)); };
    const int mb = m_bar;
    ThetaField t(mb);
    auto z = [mb](int a, C c) { return ThetaEntry::z(mb, a - 1, c); };
    auto zb = [mb](int a, C c) { return ThetaEntry::zbar(mb, a - 1, c); };
    auto add = [&](int i, int j, int k, const ThetaEntry& e) { t.add(i - 1, j - 1, k - 1, e); };

    if (id == "4.1.1") {
        add(1, 1, 1, zb(1, r(1)));
        add(1, 2, 2, zb(1, C(0.0, r(2))));
    } else if (id == "4.1.2") {
        add(1, 1, 1, z(2, r(1)));
        add(2, 2, 2, z(1, r(2)));
    } else if (id == "4.1.3a") {
        add(1, 1, 1, zb(1, r(1)) + zb(2, r(2)));
        add(2, 2, 2, zb(2, r(3)) + zb(1, r(4)));
    } else if (id == "4.1.3b") {
        add(1, 2, 2, zb(2, r(1)));
    } else if (id == "4.2.w9w10") {
        add(1, 1, 2, zb(1, r(1)));
        add(1, 1, 1, zb(2, r(3)));
        add(1, 2, 1, zb(1, r(2)));
    } else if (id == "4.2.w12") {
        add(1, 1, 2, z(3, 1.0));
    } else if (id == "4.2.w11") {
        add(1, 1, 2, zb(3, 1.0));
    }
    return t;
}

/// A1, A2, A3, A4: curvature at 0 of case 4.2.w9w10 with rho = (-1/2,-1/2,-1/2)
/// and (1/2,-1/2,1/2), each followed by its copy under the index swap 1 <-> 2.
inline std::array<Tensor4, 4> w9w10_tensors(int m_bar) {
    std::vector<int> swap12(static_cast<std::size_t>(m_bar));
    for (int i = 0; i < m_bar; ++i) swap12[static_cast<std::size_t>(i)] = i;
    std::swap(swap12[0], swap12[1]);
    auto curv = [&](std::vector<double> r) {
        return curvature_at_origin(connection_from_theta(paper_example_theta("4.2.w9w10", r, m_bar)));
    };
    const Tensor4 a1 = curv({-0.5, -0.5, -0.5});
    const Tensor4 a3 = curv({0.5, -0.5, 0.5});
    return {a1, a1.relabeled(swap12), a3, a3.relabeled(swap12)};
}

struct WitnessCheck {
    std::string label;
    std::string expected;
    std::string computed;
    bool ok = false;
};

struct WitnessReport {
    std::string case_id;
    int m_bar = 0;
    std::vector<double> rho;
    std::vector<WitnessCheck> checks;
    std::string notice;  // set when the case was skipped

    bool ok() const {
        return std::all_of(checks.begin(), checks.end(), [](const WitnessCheck& c) { return c.ok; });
    }
};

namespace detail {

/// Builds checks against exact expected values written in basis notation.
class CheckBuilder {
public:
    CheckBuilder(SpaceConfig cfg, std::vector<WitnessCheck>& out) : cfg_(cfg), out_(out) {}

    int slot(const std::string& name) const {
        for (int a = 0; a < cfg_.m(); ++a)
            if (cfg_.basis_name(a) == name) return a;
        throw InternalError("witness table: unknown basis vector " + name);
    }

    Polynomial poly(std::initializer_list<std::pair<const char*, double>> terms) const {
        Polynomial p(cfg_.m());
        for (const auto& [var, c] : terms) {
            const std::string v(var);
            const int idx = std::stoi(v.substr(1)) - 1 + (v[0] == 'y' ? cfg_.m_bar() : 0);
            p += Polynomial::variable(cfg_.m(), idx, c);
        }
        return p;
    }

    using PolyVec = std::vector<std::pair<const char*, Polynomial>>;
    using NumVec = std::vector<std::pair<const char*, double>>;
    using Index4 = std::array<const char*, 4>;

    std::vector<Polynomial> field(const PolyVec& parts) const {
        std::vector<Polynomial> v(static_cast<std::size_t>(cfg_.m()), Polynomial(cfg_.m()));
        for (const auto& [b, p] : parts) v[static_cast<std::size_t>(slot(b))] += p;
        return v;
    }

    std::vector<double> vec(const NumVec& parts) const {
        std::vector<double> v(static_cast<std::size_t>(cfg_.m()), 0.0);
        for (const auto& [b, c] : parts) v[static_cast<std::size_t>(slot(b))] += c;
        return v;
    }

    /// nabla_{x} y = expected
    void nabla(const AffineConnection& conn, const char* x, const char* y, const PolyVec& expected) {
        const int a = slot(x), b = slot(y);
        std::vector<Polynomial> got;
        for (int c = 0; c < cfg_.m(); ++c) got.push_back(conn.gamma(a, b, c));
        const auto want = field(expected);
        push("nabla(" + std::string(x) + ")" + y, format_poly_vector(cfg_, want), format_poly_vector(cfg_, got),
             want == got);
    }

    /// nabla_x y = s * expected for each (x, y, s) listed
    void nabla_all(const AffineConnection& conn, std::initializer_list<std::tuple<const char*, const char*, double>> lhs,
                   const PolyVec& expected) {
        for (const auto& [x, y, s] : lhs) {
            PolyVec scaled;
            for (const auto& [b, p] : expected) scaled.emplace_back(b, s * p);
            nabla(conn, x, y, scaled);
        }
    }

    /// A(x, y) z = expected
    void op(const Tensor4& t, const std::string& name, const char* x, const char* y, const char* z,
            const NumVec& expected) {
        const auto got = apply_as_operator(t, slot(x), slot(y), slot(z));
        const auto want = vec(expected);
        push(name + "(" + x + "," + y + ")" + z, format_vector(cfg_, want), format_vector(cfg_, got), want == got);
    }

    void entry(const Tensor4& t, const std::string& name, const Index4& idx, double expected) {
        std::vector<int> s;
        std::string label = name + "(";
        for (const char* b : idx) {
            s.push_back(slot(b));
            label += std::string(b) + ",";
        }
        label.back() = ')';
        scalar(label, expected, t(s[0], s[1], s[2], s[3]));
    }

    void form(const Bilinear2& b, const std::string& name, const char* x, const char* y, double expected) {
        scalar(name + "(" + x + "," + y + ")", expected, b(slot(x), slot(y)));
    }

    void scalar(const std::string& label, double expected, double got) {
        push(label, format_number(expected), format_number(got), expected == got);
    }

    void small(const std::string& label, double got, double tol) {
        push(label, "0", format_number(got), std::abs(got) <= tol);
    }

    void positive(const std::string& label, double got) { push(label, ">0", format_number(got), got > 0.0); }

    void text(const std::string& label, const std::string& expected, const std::string& got) {
        push(label, expected, got, expected == got);
    }

    void info(const std::string& label, double got) { push(label, "any", format_number(got), true); }

private:
    void push(std::string label, std::string expected, std::string computed, bool ok) {
        out_.push_back({std::move(label), std::move(expected), std::move(computed), ok});
    }

    SpaceConfig cfg_;
    std::vector<WitnessCheck>& out_;
};

/// Names of the nonzero summands of a bilinear form, joined by '+'.
inline std::string bilinear_class(const Bilinear2& b, double tol = kDefaultTolerance) {
    const BilinearDecomposition d = bilinear_decompose(b);
    const std::pair<const char*, const Bilinear2*> parts[] = {
        {"S2-", &d.s2_minus},          {"S2_0+", &d.s2_zero_plus},      {"R<.,.>", &d.scalar_metric_part},
        {"L2-", &d.lambda2_minus},     {"L2_0+", &d.lambda2_zero_plus}, {"R.Omega", &d.scalar_omega_part},
    };
    std::string out;
    for (const auto& [name, part] : parts)
        if (part->max_abs() > tol) out += (out.empty() ? "" : "+") + std::string(name);
    return out.empty() ? "0" : out;
}

/// Module placement checks: every module in `nonzero` has a positive
/// component; modules in `zero` vanish; if `only` is non-empty, the
/// projection outside those modules vanishes.
inline void membership(CheckBuilder& cb, const std::string& name, const Tensor4& t, std::vector<int> nonzero,
                       std::vector<int> zero, std::vector<int> only, int parity) {
    const WDecomposition w = w_project(t);
    const double tol = kDefaultTolerance * std::max(1.0, t.norm());
    if (parity > 0) cb.small(name + ":K-", w.minus_norm, tol);
    if (parity < 0) cb.small(name + ":K+", w.plus_norm, tol);
    for (int i : nonzero) cb.positive(name + ":" + module_label(i - 1), w.module(i).norm);
    for (int i : zero) cb.small(name + ":" + module_label(i - 1), w.module(i).norm, tol);
    if (!only.empty()) {
        double off = 0.0;
        std::string label = name + ":outside(";
        for (int i = 1; i <= kModuleCount; ++i)
            if (std::find(only.begin(), only.end(), i) == only.end()) off += std::pow(w.module(i).norm, 2);
        for (int i : only) label += module_label(i - 1) + ",";
        label.back() = ')';
        cb.small(label, std::sqrt(off), tol);
    }
}

inline void checks_4_1_1(CheckBuilder& cb, const std::vector<double>& rho, int m_bar) {
    const double r1 = rho[0], r2 = rho[1];
    const ThetaField theta = paper_example_theta("4.1.1", rho, m_bar);
    const AffineConnection conn = connection_from_theta(theta);
    cb.nabla_all(conn, {{"e1", "e1", 1.0}, {"f1", "f1", -1.0}}, {{"e1", cb.poly({{"x1", r1}})}, {"f1", cb.poly({{"y1", -r1}})}});
    cb.nabla_all(conn, {{"e1", "f1", 1.0}, {"f1", "e1", 1.0}}, {{"e1", cb.poly({{"y1", r1}})}, {"f1", cb.poly({{"x1", r1}})}});
    const CheckBuilder::PolyVec a{{"e2", cb.poly({{"y1", r2}})}, {"f2", cb.poly({{"x1", r2}})}};
    cb.nabla_all(conn, {{"e1", "e2", 1.0}, {"f1", "f2", -1.0}, {"e2", "e1", 1.0}, {"f2", "f1", -1.0}}, a);
    const CheckBuilder::PolyVec b{{"e2", cb.poly({{"x1", -r2}})}, {"f2", cb.poly({{"y1", r2}})}};
    cb.nabla_all(conn, {{"e1", "f2", 1.0}, {"f1", "e2", 1.0}, {"e2", "f1", 1.0}, {"f2", "e1", 1.0}}, b);

    const Tensor4 A = curvature_at_origin(conn);
    cb.op(A, "A", "e1", "f1", "e1", {{"f1", 2 * r1}});
    cb.op(A, "A", "e1", "f1", "f1", {{"e1", -2 * r1}});
    cb.op(A, "A", "e1", "e2", "e1", {{"f2", r2}});
    cb.op(A, "A", "e1", "f2", "f1", {{"f2", -r2}});
    cb.op(A, "A", "e1", "e2", "f1", {{"e2", -r2}});
    cb.op(A, "A", "e1", "f2", "e1", {{"e2", -r2}});
    cb.op(A, "A", "f1", "e2", "e1", {{"e2", r2}});
    cb.op(A, "A", "f1", "f2", "f1", {{"e2", -r2}});
    cb.op(A, "A", "f1", "e2", "f1", {{"f2", r2}});
    cb.op(A, "A", "f1", "f2", "e1", {{"f2", r2}});
    cb.op(A, "A", "e1", "f1", "f2", {{"f2", -2 * r2}});
    cb.op(A, "A", "e1", "f1", "e2", {{"e2", -2 * r2}});

    const TraceSet tr = ricci_traces(A);
    cb.form(tr.rho14, "rho14", "e1", "e1", -2 * r1);
    cb.form(tr.rho14, "rho14", "f1", "f1", -2 * r1);
    cb.form(tr.rho14, "rho14", "e1", "f1", 2 * r2);
    cb.form(tr.rho14, "rho14", "f1", "e1", -2 * r2);
    cb.scalar("tau", -4 * r1, tr.tau);
    cb.scalar("tau_tilde_J", -4 * r2, tr.tau_tilde_J);

    std::vector<int> nonzero, zero;
    (r1 != 0.0 ? nonzero : zero).push_back(5);
    (r2 != 0.0 ? nonzero : zero).push_back(6);
    membership(cb, "A", A, nonzero, zero, {}, +1);
}

inline void checks_4_1_2(CheckBuilder& cb, const std::vector<double>& rho, int m_bar) {
    const double r1 = rho[0], r2 = rho[1];
    const ThetaField theta = paper_example_theta("4.1.2", rho, m_bar);
    const AffineConnection conn = connection_from_theta(theta);
    cb.nabla_all(conn, {{"e1", "e1", 1.0}, {"f1", "f1", -1.0}}, {{"e1", cb.poly({{"x2", r1}})}, {"f1", cb.poly({{"y2", r1}})}});
    cb.nabla_all(conn, {{"e1", "f1", 1.0}, {"f1", "e1", 1.0}}, {{"e1", cb.poly({{"y2", -r1}})}, {"f1", cb.poly({{"x2", r1}})}});
    cb.nabla_all(conn, {{"e2", "e2", 1.0}, {"f2", "f2", -1.0}}, {{"e2", cb.poly({{"x1", r2}})}, {"f2", cb.poly({{"y1", r2}})}});
    cb.nabla_all(conn, {{"e2", "f2", 1.0}, {"f2", "e2", 1.0}}, {{"e2", cb.poly({{"y1", -r2}})}, {"f2", cb.poly({{"x1", r2}})}});

    const Tensor4 A = curvature_at_origin(conn);
    cb.op(A, "A", "e2", "e1", "e1", {{"e1", r1}});
    cb.op(A, "A", "e2", "f1", "f1", {{"e1", -r1}});
    cb.op(A, "A", "f2", "e1", "e1", {{"f1", r1}});
    cb.op(A, "A", "f2", "f1", "f1", {{"f1", -r1}});
    cb.op(A, "A", "e2", "e1", "f1", {{"f1", r1}});
    cb.op(A, "A", "e2", "f1", "e1", {{"f1", r1}});
    cb.op(A, "A", "f2", "e1", "f1", {{"e1", -r1}});
    cb.op(A, "A", "f2", "f1", "e1", {{"e1", -r1}});
    cb.op(A, "A", "e1", "e2", "e2", {{"e2", r2}});
    cb.op(A, "A", "e1", "f2", "f2", {{"e2", -r2}});
    cb.op(A, "A", "f1", "e2", "e2", {{"f2", r2}});
    cb.op(A, "A", "f1", "f2", "f2", {{"f2", -r2}});
    cb.op(A, "A", "e1", "e2", "f2", {{"f2", r2}});
    cb.op(A, "A", "e1", "f2", "e2", {{"f2", r2}});
    cb.op(A, "A", "f1", "e2", "f2", {{"e2", -r2}});
    cb.op(A, "A", "f1", "f2", "e2", {{"e2", -r2}});

    const Bilinear2 r14 = rho14(A);
    cb.form(r14, "rho14", "e2", "e1", -2 * r1);
    cb.form(r14, "rho14", "f2", "f1", 2 * r1);
    cb.form(r14, "rho14", "e1", "e2", -2 * r2);
    cb.form(r14, "rho14", "f1", "f2", 2 * r2);

    if (r1 == r2 && r1 != 0.0) {
        cb.text("rho14_class", "S2-", bilinear_class(r14));
        membership(cb, "A", A, {2}, {4}, {}, -1);
    } else if (r1 == -r2 && r1 != 0.0) {
        cb.text("rho14_class", "L2-", bilinear_class(r14));
        membership(cb, "A", A, {4}, {2}, {}, -1);
    } else {
        membership(cb, "A", A, {}, {}, {}, -1);
    }
}

inline void checks_4_1_3a(CheckBuilder& cb, const std::vector<double>& rho, int m_bar) {
    const double r1 = rho[0], r2 = rho[1], r3 = rho[2], r4 = rho[3];
    const ThetaField theta = paper_example_theta("4.1.3a", rho, m_bar);
    const AffineConnection conn = connection_from_theta(theta);
    cb.nabla_all(conn, {{"e1", "e1", 1.0}, {"f1", "f1", -1.0}},
                 {{"e1", cb.poly({{"x1", r1}, {"x2", r2}})}, {"f1", cb.poly({{"y1", -r1}, {"y2", -r2}})}});
    cb.nabla_all(conn, {{"e1", "f1", 1.0}, {"f1", "e1", 1.0}},
                 {{"e1", cb.poly({{"y1", r1}, {"y2", r2}})}, {"f1", cb.poly({{"x1", r1}, {"x2", r2}})}});
    cb.nabla_all(conn, {{"e2", "e2", 1.0}, {"f2", "f2", -1.0}},
                 {{"e2", cb.poly({{"x2", r3}, {"x1", r4}})}, {"f2", cb.poly({{"y2", -r3}, {"y1", -r4}})}});
    cb.nabla_all(conn, {{"e2", "f2", 1.0}, {"f2", "e2", 1.0}},
                 {{"e2", cb.poly({{"y2", r3}, {"y1", r4}})}, {"f2", cb.poly({{"x2", r3}, {"x1", r4}})}});

    const Tensor4 A = curvature_at_origin(conn);
    cb.op(A, "A", "e1", "f1", "f1", {{"e1", -2 * r1}});
    cb.op(A, "A", "e1", "f1", "e1", {{"f1", 2 * r1}});
    cb.op(A, "A", "e2", "e1", "e1", {{"e1", r2}});
    cb.op(A, "A", "e2", "f1", "f1", {{"e1", -r2}});
    cb.op(A, "A", "e2", "e1", "f1", {{"f1", r2}});
    cb.op(A, "A", "e2", "f1", "e1", {{"f1", r2}});
    cb.op(A, "A", "f2", "e1", "e1", {{"f1", -r2}});
    cb.op(A, "A", "f2", "f1", "f1", {{"f1", r2}});
    cb.op(A, "A", "f2", "e1", "f1", {{"e1", r2}});
    cb.op(A, "A", "f2", "f1", "e1", {{"e1", r2}});
    cb.op(A, "A", "e2", "f2", "f2", {{"e2", -2 * r3}});
    cb.op(A, "A", "e2", "f2", "e2", {{"f2", 2 * r3}});
    cb.op(A, "A", "e1", "e2", "e2", {{"e2", r4}});
    cb.op(A, "A", "e1", "f2", "f2", {{"e2", -r4}});
    cb.op(A, "A", "e1", "e2", "f2", {{"f2", r4}});
    cb.op(A, "A", "e1", "f2", "e2", {{"f2", r4}});
    cb.op(A, "A", "f1", "e2", "e2", {{"f2", -r4}});
    cb.op(A, "A", "f1", "f2", "f2", {{"f2", r4}});
    cb.op(A, "A", "f1", "e2", "f2", {{"e2", r4}});
    cb.op(A, "A", "f1", "f2", "e2", {{"e2", r4}});

    const TraceSet tr = ricci_traces(A);
    for (const char* p : {"e", "f"}) {
        const std::string a = std::string(p) + "1", b = std::string(p) + "2";
        cb.form(tr.rho14, "rho14", a.c_str(), a.c_str(), -2 * r1);
        cb.form(tr.rho14, "rho14", a.c_str(), b.c_str(), -2 * r4);
        cb.form(tr.rho14, "rho14", b.c_str(), b.c_str(), -2 * r3);
        cb.form(tr.rho14, "rho14", b.c_str(), a.c_str(), -2 * r2);
        cb.form(tr.rho13, "rho13", a.c_str(), a.c_str(), 2 * r1);
        cb.form(tr.rho13, "rho13", a.c_str(), b.c_str(), 0.0);
        cb.form(tr.rho13, "rho13", b.c_str(), b.c_str(), 2 * r3);
        cb.form(tr.rho13, "rho13", b.c_str(), a.c_str(), 0.0);
    }
    cb.scalar("tau", -4 * r1 - 4 * r3, tr.tau);
    cb.scalar("tau_tilde_J", 0.0, tr.tau_tilde_J);

    const std::vector<double> v{r1, r2, r3, r4};
    if (v == std::vector<double>{0, 1, 0, 1}) {
        cb.text("rho14_class", "S2_0+", bilinear_class(tr.rho14));
        cb.small("max|rho13|", tr.rho13.max_abs(), 0.0);
        membership(cb, "A", A, {1}, {3, 5, 6, 7, 8}, {}, +1);
    } else if (v == std::vector<double>{0, 1, 0, -1}) {
        cb.text("rho14_class", "L2_0+", bilinear_class(tr.rho14));
        cb.small("max|rho13|", tr.rho13.max_abs(), 0.0);
        membership(cb, "A", A, {3}, {1, 5, 6, 7, 8}, {}, +1);
    } else if (v == std::vector<double>{1, 0, -1, 0}) {
        cb.text("rho13_class", "S2_0+", bilinear_class(tr.rho13));
        membership(cb, "A", A, {7}, {8, 5, 6}, {}, +1);
    } else {
        membership(cb, "A", A, {}, {}, {}, +1);
    }
}

inline void checks_4_1_3b(CheckBuilder& cb, const std::vector<double>& rho, int m_bar) {
    const double r5 = rho[0];
    const ThetaField theta = paper_example_theta("4.1.3b", rho, m_bar);
    const AffineConnection conn = connection_from_theta(theta);
    const CheckBuilder::PolyVec a{{"e2", cb.poly({{"x2", r5}})}, {"f2", cb.poly({{"y2", -r5}})}};
    const CheckBuilder::PolyVec b{{"e2", cb.poly({{"y2", r5}})}, {"f2", cb.poly({{"x2", r5}})}};
    cb.nabla_all(conn, {{"e1", "e2", 1.0}, {"f1", "f2", -1.0}, {"e2", "e1", 1.0}, {"f2", "f1", -1.0}}, a);
    cb.nabla_all(conn, {{"e1", "f2", 1.0}, {"f1", "e2", 1.0}, {"f2", "e1", 1.0}, {"e2", "f1", 1.0}}, b);

    const Tensor4 A = curvature_at_origin(conn);
    cb.op(A, "A", "e2", "e1", "e2", {{"e2", r5}});
    cb.op(A, "A", "e2", "f1", "f2", {{"e2", -r5}});
    cb.op(A, "A", "f2", "e1", "e2", {{"f2", -r5}});
    cb.op(A, "A", "f2", "f1", "f2", {{"f2", r5}});
    cb.op(A, "A", "e2", "e1", "f2", {{"f2", r5}});
    cb.op(A, "A", "e2", "f1", "e2", {{"f2", r5}});
    cb.op(A, "A", "f2", "e1", "f2", {{"e2", r5}});
    cb.op(A, "A", "f2", "f1", "e2", {{"e2", r5}});
    cb.op(A, "A", "e2", "f2", "e1", {{"f2", 2 * r5}});
    cb.op(A, "A", "e2", "f2", "f1", {{"e2", -2 * r5}});

    const Bilinear2 r13 = rho13(A);
    cb.form(r13, "rho13", "e1", "e2", 2 * r5);
    cb.form(r13, "rho13", "f1", "f2", 2 * r5);
    if (r5 != 0.0) {
        cb.positive("rho13:L2_0+", bilinear_decompose(r13).lambda2_zero_plus.norm());
        membership(cb, "A", A, {8}, {}, {}, +1);
    } else {
        membership(cb, "A", A, {}, {}, {}, +1);
    }
}

/// S = (A + swap34 A) / 2; S(f3,f1,e2,e1) + S(f1,e2,f3,e1) + S(e2,f3,f1,e1)
inline double w11_bianchi_combination(const Tensor4& a) {
    const SpaceConfig& s = a.config();
    const Tensor4 sym = 0.5 * (a + swap_last_pair(a));
    const int e1 = s.e(0), e2 = s.e(1), f1 = s.f(0), f3 = s.f(2);
    return sym(f3, f1, e2, e1) + sym(f1, e2, f3, e1) + sym(e2, f3, f1, e1);
}

inline void checks_w9w10(CheckBuilder& cb, const std::vector<double>& rho, int m_bar) {
    const double r1 = rho[0], r2 = rho[1], r3 = rho[2];
    const ThetaField theta = paper_example_theta("4.2.w9w10", rho, m_bar);
    const AffineConnection conn = connection_from_theta(theta);
    cb.nabla_all(conn, {{"e1", "e1", 1.0}, {"f1", "f1", -1.0}},
                 {{"e2", cb.poly({{"x1", r1}})}, {"f2", cb.poly({{"y1", -r1}})},
                  {"e1", cb.poly({{"x2", r3}})}, {"f1", cb.poly({{"y2", -r3}})}});
    cb.nabla_all(conn, {{"f1", "e1", 1.0}, {"e1", "f1", 1.0}},
                 {{"e2", cb.poly({{"y1", r1}})}, {"f2", cb.poly({{"x1", r1}})},
                  {"e1", cb.poly({{"y2", r3}})}, {"f1", cb.poly({{"x2", r3}})}});
    cb.nabla_all(conn, {{"e1", "e2", 1.0}, {"f1", "f2", -1.0}, {"e2", "e1", 1.0}, {"f2", "f1", -1.0}},
                 {{"e1", cb.poly({{"x1", r2}})}, {"f1", cb.poly({{"y1", -r2}})}});
    cb.nabla_all(conn, {{"f1", "e2", 1.0}, {"e1", "f2", 1.0}, {"e2", "f1", 1.0}, {"f2", "e1", 1.0}},
                 {{"e1", cb.poly({{"y1", r2}})}, {"f1", cb.poly({{"x1", r2}})}});

    const Tensor4 A = curvature_at_origin(conn);
    cb.op(A, "A", "e1", "f1", "e1", {{"f2", 2 * r1}});
    cb.op(A, "A", "e1", "f1", "f1", {{"e2", -2 * r1}});
    cb.op(A, "A", "e1", "f1", "e2", {{"f1", 2 * r2}});
    cb.op(A, "A", "e1", "f1", "f2", {{"e1", -2 * r2}});
    cb.op(A, "A", "e1", "e2", "e1", {{"e1", r2 - r3}});
    cb.op(A, "A", "e1", "e2", "f1", {{"f1", r2 - r3}});
    cb.op(A, "A", "e1", "f2", "e1", {{"f1", r2 + r3}});
    cb.op(A, "A", "e1", "f2", "f1", {{"e1", -(r2 + r3)}});
    cb.op(A, "A", "f1", "f2", "e1", {{"e1", r2 - r3}});
    cb.op(A, "A", "f1", "f2", "f1", {{"f1", r2 - r3}});
    cb.op(A, "A", "f1", "e2", "e1", {{"f1", -(r2 + r3)}});
    cb.op(A, "A", "f1", "e2", "f1", {{"e1", r2 + r3}});
    membership(cb, "A", A, {}, {}, {}, +1);

    const auto [A1, A2, A3, A4] = w9w10_tensors(m_bar);

    for (const auto& [idx, v] : std::vector<std::pair<CheckBuilder::Index4, double>>{
             {{"e1", "f1", "e1", "f2"}, -1}, {{"f1", "e1", "f1", "e2"}, -1}, {{"f2", "e1", "f1", "e1"}, -1},
             {{"e2", "f1", "e1", "f1"}, -1}, {{"e1", "f1", "f2", "e1"}, 1},  {{"f1", "e1", "e2", "f1"}, 1},
             {{"f2", "e1", "e1", "f1"}, 1},  {{"e2", "f1", "f1", "e1"}, 1}})
        cb.entry(A1, "A1", idx, v);
    for (const auto& [idx, v] : std::vector<std::pair<CheckBuilder::Index4, double>>{
             {{"e2", "f2", "e2", "f1"}, -1}, {{"f2", "e2", "f2", "e1"}, -1}, {{"f1", "e2", "f2", "e2"}, -1},
             {{"e1", "f2", "e2", "f2"}, -1}, {{"e2", "f2", "f1", "e2"}, 1},  {{"f2", "e2", "e1", "f2"}, 1},
             {{"f1", "e2", "e2", "f2"}, 1},  {{"e1", "f2", "f2", "e2"}, 1}})
        cb.entry(A2, "A2", idx, v);
    for (const auto& [name, t] : {std::pair<const char*, const Tensor4*>{"A1", &A1}, {"A2", &A2}}) {
        const TraceSet tr = ricci_traces(*t);
        for (const auto& [x, y] : {std::pair{"e1", "e2"}, {"e2", "e1"}, {"f1", "f2"}, {"f2", "f1"}})
            cb.form(tr.rho14, std::string("rho14[") + name + "]", x, y, 1.0);
        cb.scalar(std::string("antisym34[") + name + "]", 0.0, (*t + swap_last_pair(*t)).max_abs());
        cb.scalar(std::string("rho13+rho14[") + name + "]", 0.0, (tr.rho13 + tr.rho14).max_abs());
    }

    for (const auto& [idx, v] : std::vector<std::pair<CheckBuilder::Index4, double>>{
             {{"e1", "f1", "e1", "f2"}, 1},  {{"e1", "f1", "f2", "e1"}, 1},  {{"e1", "f1", "f1", "e2"}, -1},
             {{"e1", "f1", "e2", "f1"}, -1}, {{"e1", "e2", "f1", "f1"}, -1}, {{"e1", "e2", "e1", "e1"}, -1},
             {{"f1", "f2", "e1", "e1"}, -1}, {{"f1", "f2", "f1", "f1"}, -1}})
        cb.entry(A3, "A3", idx, v);
    for (const auto& [idx, v] : std::vector<std::pair<CheckBuilder::Index4, double>>{
             {{"e2", "f2", "e2", "f1"}, 1},  {{"e2", "f2", "f1", "e2"}, 1},  {{"e2", "f2", "f2", "e1"}, -1},
             {{"e2", "f2", "e1", "f2"}, -1}, {{"e2", "e1", "f2", "f2"}, -1}, {{"e2", "e1", "e2", "e2"}, -1},
             {{"f2", "f1", "e2", "e2"}, -1}, {{"f2", "f1", "f2", "f2"}, -1}})
        cb.entry(A4, "A4", idx, v);
    for (const auto& [name, t, sign] :
         {std::tuple<const char*, const Tensor4*, double>{"A3", &A3, 1.0}, {"A4", &A4, -1.0}}) {
        const TraceSet tr = ricci_traces(*t);
        for (const auto& [x, y, s] :
             {std::tuple{"e1", "e2", 1.0}, {"f1", "f2", 1.0}, {"e2", "e1", -1.0}, {"f2", "f1", -1.0}})
            cb.form(tr.rho14, std::string("rho14[") + name + "]", x, y, sign * s);
        cb.scalar(std::string("sym34[") + name + "]", 0.0, (*t - swap_last_pair(*t)).max_abs());
        cb.scalar(std::string("rho13-rho14[") + name + "]", 0.0, (tr.rho13 - tr.rho14).max_abs());
    }

    const Tensor4 w9 = A1 - A2;
    const Tensor4 w10 = A3 + A4;
    membership(cb, "A1-A2", w9, {9}, {}, {9}, +1);
    membership(cb, "A3+A4", w10, {10}, {}, {10}, +1);
}

inline void checks_w12(CheckBuilder& cb, int m_bar) {
    const ThetaField theta = paper_example_theta("4.2.w12", {}, m_bar);
    const AffineConnection conn = connection_from_theta(theta);
    cb.nabla_all(conn, {{"e1", "e1", 1.0}, {"f1", "f1", -1.0}}, {{"e2", cb.poly({{"x3", 1}})}, {"f2", cb.poly({{"y3", 1}})}});
    cb.nabla_all(conn, {{"e1", "f1", 1.0}, {"f1", "e1", 1.0}}, {{"e2", cb.poly({{"y3", -1}})}, {"f2", cb.poly({{"x3", 1}})}});

    const Tensor4 A = curvature_at_origin(conn);
    cb.op(A, "A", "e3", "e1", "e1", {{"e2", 1}});
    cb.op(A, "A", "e3", "f1", "f1", {{"e2", -1}});
    cb.op(A, "A", "f3", "e1", "e1", {{"f2", 1}});
    cb.op(A, "A", "f3", "f1", "f1", {{"f2", -1}});
    cb.op(A, "A", "e3", "e1", "f1", {{"f2", 1}});
    cb.op(A, "A", "e3", "f1", "e1", {{"f2", 1}});
    cb.op(A, "A", "f3", "e1", "f1", {{"e2", -1}});
    cb.op(A, "A", "f3", "f1", "e1", {{"e2", -1}});
    cb.scalar("max|rho14|", 0.0, rho14(A).max_abs());
    membership(cb, "A", A, {12}, {}, {12}, -1);
}

inline void checks_w11(CheckBuilder& cb, int m_bar) {
    const ThetaField theta = paper_example_theta("4.2.w11", {}, m_bar);
    const AffineConnection conn = connection_from_theta(theta);
    cb.nabla_all(conn, {{"e1", "e1", 1.0}, {"f1", "f1", -1.0}}, {{"e2", cb.poly({{"x3", 1}})}, {"f2", cb.poly({{"y3", -1}})}});
    cb.nabla_all(conn, {{"e1", "f1", 1.0}, {"f1", "e1", 1.0}}, {{"e2", cb.poly({{"y3", 1}})}, {"f2", cb.poly({{"x3", 1}})}});

    const Tensor4 A = curvature_at_origin(conn);
    cb.op(A, "A", "e3", "e1", "e1", {{"e2", 1}});
    cb.op(A, "A", "e3", "f1", "f1", {{"e2", -1}});
    cb.op(A, "A", "f3", "e1", "e1", {{"f2", -1}});
    cb.op(A, "A", "f3", "f1", "f1", {{"f2", 1}});
    cb.op(A, "A", "e3", "e1", "f1", {{"f2", 1}});
    cb.op(A, "A", "e3", "f1", "e1", {{"f2", 1}});
    cb.op(A, "A", "f3", "e1", "f1", {{"e2", 1}});
    cb.op(A, "A", "f3", "f1", "e1", {{"e2", 1}});
    const TraceSet tr = ricci_traces(A);
    cb.scalar("max|rho13|", 0.0, tr.rho13.max_abs());
    cb.scalar("max|rho14|", 0.0, tr.rho14.max_abs());
    cb.scalar("bianchi_combination", 0.5, w11_bianchi_combination(A));

    const WDecomposition w = w_project(A);
    cb.info("A:W9", w.module(9).norm);
    cb.info("A:W10", w.module(10).norm);
    membership(cb, "A", A, {11}, {}, {9, 10, 11}, +1);
}

} // namespace detail

/// Reproduces the displayed values of one witness case and confirms its
/// module placement. Throws InvalidArgument for an unknown case, missing
/// parameters, or too small m_bar.
inline WitnessReport witness_checks(const std::string& id, const std::vector<double>& rho, int m_bar) {
    const WitnessCase& wc = witness_case(id);
    detail::require_case_inputs(wc, rho, m_bar);
    WitnessReport rep{id, m_bar, rho, {}, {}};
    detail::CheckBuilder cb(SpaceConfig(m_bar), rep.checks);
    if (id == "4.1.1") detail::checks_4_1_1(cb, rho, m_bar);
    else if (id == "4.1.2") detail::checks_4_1_2(cb, rho, m_bar);
    else if (id == "4.1.3a") detail::checks_4_1_3a(cb, rho, m_bar);
    else if (id == "4.1.3b") detail::checks_4_1_3b(cb, rho, m_bar);
    else if (id == "4.2.w9w10") detail::checks_w9w10(cb, rho, m_bar);
    else if (id == "4.2.w12") detail::checks_w12(cb, m_bar);
    else if (id == "4.2.w11") detail::checks_w11(cb, m_bar);
    return rep;
}

/// Every witness item at the given m_bar; cases needing m_bar >= 3 are
/// reported with a notice when m_bar = 2.
inline std::vector<WitnessReport> witness_suite(int m_bar) {
    SpaceConfig(m_bar).require_decomposable();
    const std::vector<std::pair<std::string, std::vector<double>>> items{
        {"4.1.1", {1, 1}},          {"4.1.1", {1, 0}},          {"4.1.2", {1, 1}},
        {"4.1.2", {1, -1}},         {"4.1.3a", {0, 1, 0, 1}},   {"4.1.3a", {0, 1, 0, -1}},
        {"4.1.3a", {1, 0, -1, 0}},  {"4.1.3b", {1}},            {"4.2.w9w10", {-0.5, -0.5, -0.5}},
        {"4.2.w12", {}},            {"4.2.w11", {}},
    };
    std::vector<WitnessReport> out;
    for (const auto& [id, rho] : items) {
        const WitnessCase& wc = witness_case(id);
        if (m_bar < wc.min_m_bar) {
            out.push_back({id, m_bar, rho, {}, "skipped: needs m_bar >= " + std::to_string(wc.min_m_bar)});
            continue;
        }
        out.push_back(witness_checks(id, rho, m_bar));
    }
    return out;
}

/// One fixture per witness display: the Theta (when the tensor comes from
/// one) and the curvature tensor at the origin.
struct WitnessFixture {
    std::string name;
    std::string case_id;
    std::vector<double> rho;
    int m_bar = 2;
    std::optional<ThetaField> theta;
    Tensor4 tensor;
    std::string modules;  // where the tensor is placed, e.g. "W9"
};

inline std::vector<WitnessFixture> witness_fixtures() {
    std::vector<WitnessFixture> out;
    auto from_case = [&](std::string name, const std::string& id, std::vector<double> rho, int m_bar,
                         std::string modules) {
        ThetaField theta = paper_example_theta(id, rho, m_bar);
        Tensor4 t = curvature_at_origin(connection_from_theta(theta));
        out.push_back({std::move(name), id, std::move(rho), m_bar, std::move(theta), std::move(t), std::move(modules)});
    };
    from_case("4.1.1", "4.1.1", {1, 1}, 2, "W5+W6+K+");
    from_case("4.1.2", "4.1.2", {1, 1}, 2, "W2+K-");
    from_case("4.1.3a", "4.1.3a", {0, 1, 0, 1}, 2, "W1+K+");
    from_case("4.1.3b", "4.1.3b", {1}, 2, "W8+K+");
    from_case("4.2.w9w10", "4.2.w9w10", {-0.5, -0.5, -0.5}, 2, "K+");
    const auto [a1, a2, a3, a4] = w9w10_tensors(2);
    out.push_back({"4.2.w9", "4.2.w9w10", {-0.5, -0.5, -0.5}, 2, std::nullopt, a1 - a2, "W9"});
    out.push_back({"4.2.w10", "4.2.w9w10", {0.5, -0.5, 0.5}, 2, std::nullopt, a3 + a4, "W10"});
    from_case("4.2.w12", "4.2.w12", {}, 3, "W12");
    from_case("4.2.w11", "4.2.w11", {}, 3, "W9+W10+W11");
    return out;
}

} // namespace kahler
