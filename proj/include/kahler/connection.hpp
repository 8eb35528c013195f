#pragma once

#include <algorithm>
#include <complex>
#include <compare>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "kahler/error.hpp"
#include "kahler/polynomial.hpp"
#include "kahler/tensor.hpp"

namespace kahler {

inline constexpr int kDefaultMaxDegree = 6;

/// One complex coefficient function Theta_ijk = u + i v.
struct ThetaEntry {
    Polynomial u;
    Polynomial v;

    explicit ThetaEntry(int nvars = 0) : u(nvars), v(nvars) {}
    ThetaEntry(Polynomial re, Polynomial im) : u(std::move(re)), v(std::move(im)) {}

    /// c * z_a with z_a = x_a + i y_a (a is a 0-based complex index).
    static ThetaEntry z(int m_bar, int a, std::complex<double> c) {
        const int n = 2 * m_bar;
        const Polynomial x = Polynomial::variable(n, a), y = Polynomial::variable(n, m_bar + a);
        return {c.real() * x - c.imag() * y, c.imag() * x + c.real() * y};
    }

    /// c * conj(z_a)
    static ThetaEntry zbar(int m_bar, int a, std::complex<double> c) {
        const int n = 2 * m_bar;
        const Polynomial x = Polynomial::variable(n, a), y = Polynomial::variable(n, m_bar + a);
        return {c.real() * x + c.imag() * y, c.imag() * x - c.real() * y};
    }

    bool is_zero() const { return u.is_zero() && v.is_zero(); }
    int degree() const { return std::max(u.degree(), v.degree()); }

    ThetaEntry& operator+=(const ThetaEntry& o) {
        u += o.u;
        v += o.v;
        return *this;
    }
    friend ThetaEntry operator+(ThetaEntry a, const ThetaEntry& b) { return a += b; }
    friend bool operator==(const ThetaEntry&, const ThetaEntry&) = default;
};

/// Key (i, j, k) of Theta_ijk, 0-based, normalized so that i <= j.
struct ThetaKey {
    int i = 0;
    int j = 0;
    int k = 0;

    static ThetaKey normalized(int i, int j, int k) { return i <= j ? ThetaKey{i, j, k} : ThetaKey{j, i, k}; }
    auto operator<=>(const ThetaKey&) const = default;
};

/// Complex coefficient field Theta_ijk = u_ijk + i v_ijk, symmetric in (i, j).
/// Entries that are identically zero are not stored.
class ThetaField {
public:
    explicit ThetaField(int m_bar) : config_(m_bar) {}

    const SpaceConfig& config() const noexcept { return config_; }
    int m_bar() const noexcept { return config_.m_bar(); }
    int nvars() const noexcept { return config_.m(); }
    const std::map<ThetaKey, ThetaEntry>& entries() const noexcept { return entries_; }

    /// Sets Theta_ijk (and implicitly Theta_jik).
    void set(int i, int j, int k, ThetaEntry entry) {
        check_index(i);
        check_index(j);
        check_index(k);
        if (entry.u.nvars() != nvars() || entry.v.nvars() != nvars()) {
            throw InvalidArgument("ThetaField: entry polynomials must use " + std::to_string(nvars()) + " variables");
        }
        const ThetaKey key = ThetaKey::normalized(i, j, k);
        if (entry.is_zero()) {
            entries_.erase(key);
        } else {
            entries_.insert_or_assign(key, std::move(entry));
        }
    }

    void add(int i, int j, int k, const ThetaEntry& entry) {
        ThetaEntry sum = this->entry(i, j, k);
        sum += entry;
        set(i, j, k, std::move(sum));
    }

    ThetaEntry entry(int i, int j, int k) const {
        auto it = entries_.find(ThetaKey::normalized(i, j, k));
        return it == entries_.end() ? ThetaEntry(nvars()) : it->second;
    }

    int degree() const {
        int d = 0;
        for (const auto& [key, e] : entries_) d = std::max(d, e.degree());
        return d;
    }

    bool vanishes_at_origin() const {
        return std::all_of(entries_.begin(), entries_.end(), [](const auto& kv) {
            return kv.second.u.constant_term() == 0.0 && kv.second.v.constant_term() == 0.0;
        });
    }

    ThetaField& operator+=(const ThetaField& o) {
        if (o.m_bar() != m_bar()) throw InvalidArgument("ThetaField: m_bar mismatch");
        for (const auto& [key, e] : o.entries_) add(key.i, key.j, key.k, e);
        return *this;
    }
    friend ThetaField operator+(ThetaField a, const ThetaField& b) { return a += b; }
    friend bool operator==(const ThetaField&, const ThetaField&) = default;

private:
    void check_index(int i) const {
        if (i < 0 || i >= m_bar()) throw InvalidArgument("ThetaField: index out of range");
    }

    SpaceConfig config_;
    std::map<ThetaKey, ThetaEntry> entries_;
};

/// Christoffel symbols in the coordinate frame: nabla_{v_a} v_b = sum_c gamma(a,b,c) v_c.
class AffineConnection {
public:
    explicit AffineConnection(int m_bar)
        : config_(m_bar),
          gamma_(static_cast<std::size_t>(config_.m() * config_.m() * config_.m()), Polynomial(config_.m())) {}

    const SpaceConfig& config() const noexcept { return config_; }
    int dim() const noexcept { return config_.m(); }

    Polynomial& gamma(int a, int b, int c) { return gamma_[index(a, b, c)]; }
    const Polynomial& gamma(int a, int b, int c) const { return gamma_[index(a, b, c)]; }

private:
    std::size_t index(int a, int b, int c) const {
        const int m = dim();
        if (a < 0 || b < 0 || c < 0 || a >= m || b >= m || c >= m) {
            throw InvalidArgument("AffineConnection: index out of range");
        }
        return static_cast<std::size_t>((a * m + b) * m + c);
    }

    SpaceConfig config_;
    std::vector<Polynomial> gamma_;
};

/// nabla_{e_i} e_j = -nabla_{f_i} f_j = u_ijk e_k + v_ijk f_k
/// nabla_{f_i} e_j =  nabla_{e_i} f_j = -v_ijk e_k + u_ijk f_k
inline AffineConnection connection_from_theta(const ThetaField& theta, int max_degree = kDefaultMaxDegree) {
    if (theta.degree() > max_degree) {
        throw InvalidArgument("connection_from_theta: degree " + std::to_string(theta.degree()) +
                              " exceeds the cap " + std::to_string(max_degree));
    }
    const SpaceConfig& s = theta.config();
    const int mb = s.m_bar();
    AffineConnection conn(mb);
    for (int i = 0; i < mb; ++i)
        for (int j = 0; j < mb; ++j)
            for (int k = 0; k < mb; ++k) {
                const ThetaEntry t = theta.entry(i, j, k);
                if (t.is_zero()) continue;
                conn.gamma(s.e(i), s.e(j), s.e(k)) = t.u;
                conn.gamma(s.e(i), s.e(j), s.f(k)) = t.v;
                conn.gamma(s.f(i), s.f(j), s.e(k)) = -t.u;
                conn.gamma(s.f(i), s.f(j), s.f(k)) = -t.v;
                conn.gamma(s.f(i), s.e(j), s.e(k)) = -t.v;
                conn.gamma(s.f(i), s.e(j), s.f(k)) = t.u;
                conn.gamma(s.e(i), s.f(j), s.e(k)) = -t.v;
                conn.gamma(s.e(i), s.f(j), s.f(k)) = t.u;
            }
    return conn;
}

/// Largest coefficient of gamma(a,b,c) - gamma(b,a,c).
inline double torsion_residual(const AffineConnection& conn) {
    const int m = conn.dim();
    double worst = 0.0;
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b)
            for (int c = 0; c < m; ++c)
                worst = std::max(worst, (conn.gamma(a, b, c) - conn.gamma(b, a, c)).max_abs_coeff());
    return worst;
}

/// Largest coefficient of the components of (nabla_{v_a} J) v_b.
inline double nabla_J_residual(const AffineConnection& conn) {
    const SpaceConfig& s = conn.config();
    const int m = conn.dim();
    double worst = 0.0;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int d = 0; d < m; ++d) {
                // nabla_a (J v_b) - J (nabla_a v_b), component along v_d
                const int jd = s.j_index(d);
                const Polynomial comp = s.j_sign(b) * conn.gamma(a, s.j_index(b), d) - s.j_sign(jd) * conn.gamma(a, b, jd);
                worst = std::max(worst, comp.max_abs_coeff());
            }
    return worst;
}

/// R(v_a, v_b) v_c = sum_d R(a,b,c,d) v_d, evaluated at `point`:
///   R(a,b,c,d) = d_a G(b,c,d) - d_b G(a,c,d) + sum_s G(a,s,d) G(b,c,s) - G(b,s,d) G(a,c,s)
inline Tensor4 curvature_at(const AffineConnection& conn, std::span<const double> point) {
    const int m = conn.dim();
    if (static_cast<int>(point.size()) != m) {
        throw InvalidArgument("curvature_at: point has " + std::to_string(point.size()) + " coordinates, expected " +
                              std::to_string(m));
    }
    const auto mm = static_cast<std::size_t>(m);
    std::vector<double> g(mm * mm * mm), dg(mm * mm * mm * mm);
    auto gi = [m](int a, int b, int c) { return static_cast<std::size_t>((a * m + b) * m + c); };
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c) {
                const Polynomial& p = conn.gamma(a, b, c);
                if (p.is_zero()) continue;
                g[gi(a, b, c)] = p.evaluate(point);
                for (int e = 0; e < m; ++e) dg[static_cast<std::size_t>(e) * mm * mm * mm + gi(a, b, c)] = p.derivative(e).evaluate(point);
            }
    auto d_of = [&](int e, int a, int b, int c) { return dg[static_cast<std::size_t>(e) * mm * mm * mm + gi(a, b, c)]; };

    Tensor4 r(conn.config());
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c)
                for (int d = 0; d < m; ++d) {
                    double v = d_of(a, b, c, d) - d_of(b, a, c, d);
                    for (int s = 0; s < m; ++s) v += g[gi(a, s, d)] * g[gi(b, c, s)] - g[gi(b, s, d)] * g[gi(a, c, s)];
                    r(a, b, c, d) = v;
                }
    return r;
}

inline Tensor4 curvature_at_origin(const AffineConnection& conn) {
    return curvature_at(conn, std::vector<double>(static_cast<std::size_t>(conn.dim()), 0.0));
}

enum class Holomorphy { holomorphic, antiholomorphic, both, neither };

inline const char* to_string(Holomorphy h) {
    switch (h) {
    case Holomorphy::holomorphic: return "holomorphic";
    case Holomorphy::antiholomorphic: return "antiholomorphic";
    case Holomorphy::both: return "both";
    case Holomorphy::neither: return "neither";
    }
    return "?";
}

struct HolomorphyType {
    Holomorphy kind = Holomorphy::both;
    bool vanishes_at_origin = true;
};

/// Cauchy-Riemann checks as exact polynomial identities, per entry and
/// per complex coordinate:
///   holomorphic:      d_x u =  d_y v,  d_y u = -d_x v
///   antiholomorphic:  d_x u = -d_y v,  d_y u =  d_x v
inline HolomorphyType holomorphy_type(const ThetaField& theta) {
    const int mb = theta.m_bar();
    bool hol = true, anti = true;
    for (const auto& [key, t] : theta.entries()) {
        for (int a = 0; a < mb; ++a) {
            const Polynomial ux = t.u.derivative(a), uy = t.u.derivative(mb + a);
            const Polynomial vx = t.v.derivative(a), vy = t.v.derivative(mb + a);
            hol = hol && (ux - vy).is_zero() && (uy + vx).is_zero();
            anti = anti && (ux + vy).is_zero() && (uy - vx).is_zero();
        }
    }
    HolomorphyType out;
    out.kind = hol && anti ? Holomorphy::both
               : hol       ? Holomorphy::holomorphic
               : anti      ? Holomorphy::antiholomorphic
                           : Holomorphy::neither;
    out.vanishes_at_origin = theta.vanishes_at_origin();
    return out;
}

/// Curvature at the origin of a Theta with degree <= 1 entries and
/// Theta(0) = 0, assembled component by component from the first
/// derivatives of u and v (no Christoffel products are involved).
inline Tensor4 linear_curvature_at_zero(const ThetaField& theta) {
    if (theta.degree() > 1) throw InvalidArgument("linear_curvature_at_zero: Theta has degree > 1");
    if (!theta.vanishes_at_origin()) throw InvalidArgument("linear_curvature_at_zero: Theta(0) != 0");
    const SpaceConfig& s = theta.config();
    const int mb = s.m_bar();
    const int n = s.m();

    // du[(j,k,l)][var] = d u_jkl / d var
    auto linear = [n](const Polynomial& p, int var) {
        std::vector<int> e(static_cast<std::size_t>(n), 0);
        e[static_cast<std::size_t>(var)] = 1;
        auto it = p.terms().find(e);
        return it == p.terms().end() ? 0.0 : it->second;
    };
    auto du = [&](int j, int k, int l, int var) { return linear(theta.entry(j, k, l).u, var); };
    auto dv = [&](int j, int k, int l, int var) { return linear(theta.entry(j, k, l).v, var); };

    Tensor4 r(s);
    for (int i = 0; i < mb; ++i)
        for (int j = 0; j < mb; ++j)
            for (int k = 0; k < mb; ++k)
                for (int l = 0; l < mb; ++l) {
                    const int ei = s.e(i), ej = s.e(j), ek = s.e(k), el = s.e(l);
                    const int fi = s.f(i), fj = s.f(j), fk = s.f(k), fl = s.f(l);

                    const double ee_u = du(j, k, l, ei) - du(i, k, l, ej);
                    const double ee_v = dv(j, k, l, ei) - dv(i, k, l, ej);
                    const double ff_u = du(j, k, l, fi) - du(i, k, l, fj);
                    const double ff_v = dv(j, k, l, fi) - dv(i, k, l, fj);

                    r(ei, ej, ek, el) = ee_u;
                    r(ei, ej, fk, fl) = ee_u;
                    r(fi, fj, ek, el) = -ff_v;
                    r(fi, fj, fk, fl) = -ff_v;
                    r(ei, ej, ek, fl) = ee_v;
                    r(ei, ej, fk, el) = -ee_v;
                    r(fi, fj, ek, fl) = ff_u;
                    r(fi, fj, fk, el) = -ff_u;

                    r(ei, fj, ek, el) = -dv(j, k, l, ei) - du(i, k, l, fj);
                    r(ei, fj, fk, fl) = -dv(j, k, l, ei) - du(i, k, l, fj);
                    r(ei, fj, ek, fl) = du(j, k, l, ei) - dv(i, k, l, fj);
                    r(ei, fj, fk, el) = -du(j, k, l, ei) + dv(i, k, l, fj);
                }
    // remaining blocks (f_i, e_j, ., .) by antisymmetry in the first pair
    for (int i = 0; i < mb; ++i)
        for (int j = 0; j < mb; ++j)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) r(s.f(i), s.e(j), c, d) = -r(s.e(j), s.f(i), c, d);
    return r;
}

} // namespace kahler
