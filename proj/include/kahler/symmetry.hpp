#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "kahler/error.hpp"
#include "kahler/tensor.hpp"

namespace kahler {

inline constexpr double kDefaultTolerance = 1e-9;

struct IdentityCheck {
    bool holds = true;
    double max_violation = 0.0;
};

/// Residuals of every curvature identity the library knows about.
struct SymmetryReport {
    IdentityCheck antisym12;        // A(x,y,z,w) + A(y,x,z,w) = 0
    IdentityCheck bianchi1;         // cyclic sum over (x,y,z)
    IdentityCheck weyl_1d;          // Weyl compatibility with g
    IdentityCheck riemann_pair_1e;  // A(x,y,z,w) = A(z,w,x,y)
    IdentityCheck antisym34;        // A(x,y,z,w) = -A(x,y,w,z)
    IdentityCheck gray_1g;          // Gray's Hermitian identity
    IdentityCheck kahler_last2_1h;  // A(x,y,z,w) = A(x,y,Jz,Jw)
    IdentityCheck kahler_operator_1i;  // R(x,y) J = J R(x,y)
    bool in_K = true;
    double tolerance = kDefaultTolerance;

    /// Name of the first violated identity among those defining K, or empty.
    std::string first_k_violation() const {
        if (!antisym12.holds) return "antisym12";
        if (!bianchi1.holds) return "bianchi1";
        if (!kahler_last2_1h.holds) return "kahler_last2_1h";
        return {};
    }

    template <class F>
    void for_each(F&& f) const {
        f("antisym12", antisym12);
        f("bianchi1", bianchi1);
        f("weyl_1d", weyl_1d);
        f("riemann_pair_1e", riemann_pair_1e);
        f("antisym34", antisym34);
        f("gray_1g", gray_1g);
        f("kahler_last2_1h", kahler_last2_1h);
        f("kahler_operator_1i", kahler_operator_1i);
    }
};

namespace detail {

// A evaluated with J applied to the slots selected by `mask` (bit 0 = first slot).
inline double with_j(const Tensor4& t, int a, int b, int c, int d, unsigned mask) {
    const SpaceConfig& s = t.config();
    std::array<int, 4> idx{a, b, c, d};
    double sign = 1.0;
    for (unsigned k = 0; k < 4; ++k) {
        if (mask & (1u << k)) {
            sign *= s.j_sign(idx[k]);
            idx[k] = s.j_index(idx[k]);
        }
    }
    return sign * t(idx[0], idx[1], idx[2], idx[3]);
}

inline void record(IdentityCheck& check, double residual) {
    check.max_violation = std::max(check.max_violation, std::abs(residual));
}

} // namespace detail

/// rho13(x, y) = sum_i A(e_i, x, e_i, y)
inline Bilinear2 rho13(const Tensor4& t) {
    Bilinear2 r(t.config());
    const int m = t.dim();
    for (int b = 0; b < m; ++b)
        for (int d = 0; d < m; ++d) {
            double s = 0.0;
            for (int a = 0; a < m; ++a) s += t(a, b, a, d);
            r(b, d) = s;
        }
    return r;
}

/// rho14(x, y) = sum_i A(e_i, x, y, e_i)
inline Bilinear2 rho14(const Tensor4& t) {
    Bilinear2 r(t.config());
    const int m = t.dim();
    for (int b = 0; b < m; ++b)
        for (int c = 0; c < m; ++c) {
            double s = 0.0;
            for (int a = 0; a < m; ++a) s += t(a, b, c, a);
            r(b, c) = s;
        }
    return r;
}

struct TraceSet {
    Bilinear2 rho13;
    Bilinear2 rho14;
    double tau = 0.0;
    double tau_tilde_J = 0.0;
};

inline double trace(const Bilinear2& theta) {
    double s = 0.0;
    for (int a = 0; a < theta.dim(); ++a) s += theta(a, a);
    return s;
}

/// sum_j theta(J e_j, e_j) over the full orthonormal basis.
inline double j_trace(const Bilinear2& theta) {
    const SpaceConfig& s = theta.config();
    double r = 0.0;
    for (int b = 0; b < theta.dim(); ++b) r += s.j_sign(b) * theta(s.j_index(b), b);
    return r;
}

inline TraceSet ricci_traces(const Tensor4& t) {
    TraceSet out{rho13(t), rho14(t)};
    out.tau = trace(out.rho14);
    out.tau_tilde_J = j_trace(out.rho14);
    return out;
}

/// (T A)(x, y, z, w) = A(Jx, Jy, Jz, Jw). An involution; on K its +1 and -1
/// eigenspaces are K+ and K-.
inline Tensor4 j_conjugate(const Tensor4& t) {
    Tensor4 out(t.config());
    const int m = t.dim();
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c)
                for (int d = 0; d < m; ++d) out(a, b, c, d) = detail::with_j(t, a, b, c, d, 0xF);
    return out;
}

/// A(x, y, w, z)
inline Tensor4 swap_last_pair(const Tensor4& t) {
    Tensor4 out(t.config());
    const int m = t.dim();
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c)
                for (int d = 0; d < m; ++d) out(a, b, c, d) = t(a, b, d, c);
    return out;
}

/// A(x, y, z, Jw)
inline Tensor4 j_on_last_slot(const Tensor4& t) {
    Tensor4 out(t.config());
    const int m = t.dim();
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c)
                for (int d = 0; d < m; ++d) out(a, b, c, d) = detail::with_j(t, a, b, c, d, 0x8);
    return out;
}

inline SymmetryReport classify_symmetries(const Tensor4& t, double tol = kDefaultTolerance) {
    detail::require_finite(t.data(), "Tensor4");
    const SpaceConfig& s = t.config();
    const int m = t.dim();
    const Bilinear2 r14 = rho14(t);
    const Bilinear2 jm = standard_complex_structure(s);

    SymmetryReport rep;
    rep.tolerance = tol;
    using detail::record;
    using detail::with_j;

    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c)
                for (int d = 0; d < m; ++d) {
                    const double v = t(a, b, c, d);
                    record(rep.antisym12, v + t(b, a, c, d));
                    record(rep.bianchi1, v + t(b, c, a, d) + t(c, a, b, d));
                    const double g_cd = (c == d) ? 1.0 : 0.0;
                    record(rep.weyl_1d, v + t(a, b, d, c) - (2.0 / m) * (r14(b, a) - r14(a, b)) * g_cd);
                    record(rep.riemann_pair_1e, v - t(c, d, a, b));
                    record(rep.antisym34, v + t(a, b, d, c));
                    // slot masks: x=1, y=2, z=4, w=8
                    record(rep.gray_1g, v + with_j(t, a, b, c, d, 0xF) - with_j(t, a, b, c, d, 0x3) -
                                            with_j(t, a, b, c, d, 0xC) - with_j(t, a, b, c, d, 0x5) -
                                            with_j(t, a, b, c, d, 0xA) - with_j(t, a, b, c, d, 0x9) -
                                            with_j(t, a, b, c, d, 0x6));
                    record(rep.kahler_last2_1h, v - with_j(t, a, b, c, d, 0xC));
                }

    // Operator form: E = R(v_a, v_b) as a matrix E(d, c) = A(a, b, c, d);
    // compare E*J with J*E by plain matrix products.
    std::vector<double> e(static_cast<std::size_t>(m * m));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            for (int c = 0; c < m; ++c)
                for (int d = 0; d < m; ++d) e[static_cast<std::size_t>(d * m + c)] = t(a, b, c, d);
            for (int r = 0; r < m; ++r)
                for (int c = 0; c < m; ++c) {
                    double ej = 0.0, je = 0.0;
                    for (int k = 0; k < m; ++k) {
                        ej += e[static_cast<std::size_t>(r * m + k)] * jm(k, c);
                        je += jm(r, k) * e[static_cast<std::size_t>(k * m + c)];
                    }
                    record(rep.kahler_operator_1i, ej - je);
                }
        }

    auto finish = [tol](IdentityCheck& c) { c.holds = c.max_violation <= tol; };
    finish(rep.antisym12);
    finish(rep.bianchi1);
    finish(rep.weyl_1d);
    finish(rep.riemann_pair_1e);
    finish(rep.antisym34);
    finish(rep.gray_1g);
    finish(rep.kahler_last2_1h);
    finish(rep.kahler_operator_1i);
    rep.in_K = rep.antisym12.holds && rep.bianchi1.holds && rep.kahler_last2_1h.holds;
    return rep;
}

/// Tolerance used for precondition checks: `tol` absolute for O(1) tensors,
/// scaled by the largest entry otherwise.
inline double scaled_tolerance(const Tensor4& t, double tol) {
    return tol * std::max(1.0, t.max_abs());
}

inline void require_in_K(const Tensor4& t, double tol, const char* who) {
    const SymmetryReport rep = classify_symmetries(t, scaled_tolerance(t, tol));
    if (!rep.in_K) {
        throw DomainError(std::string(who) + ": tensor is not in K (violates " +
                          rep.first_k_violation() + ")");
    }
}

/// Split A in K into its J-parity components A = A_plus + A_minus.
inline std::pair<Tensor4, Tensor4> j_parity_split(const Tensor4& t, double tol = kDefaultTolerance) {
    require_in_K(t, tol, "j_parity_split");
    Tensor4 plus = t + j_conjugate(t);
    plus *= 0.5;
    Tensor4 minus = t - plus;
    return {std::move(plus), std::move(minus)};
}

/// Components of R(v_a, v_b) v_c.
inline std::vector<double> apply_as_operator(const Tensor4& t, int a, int b, int c) {
    const int m = t.dim();
    auto in_range = [m](int i) { return i >= 0 && i < m; };
    if (!in_range(a) || !in_range(b) || !in_range(c)) {
        throw InvalidArgument("apply_as_operator: basis index out of range");
    }
    std::vector<double> out(static_cast<std::size_t>(m));
    for (int d = 0; d < m; ++d) out[static_cast<std::size_t>(d)] = t(a, b, c, d);
    return out;
}

} // namespace kahler
