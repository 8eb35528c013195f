#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "kahler/connection.hpp"
#include "kahler/decomposition.hpp"

namespace kahler {

/// All randomized behavior goes through one of these, seeded explicitly.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

    double uniform(double lo = -1.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }
    std::mt19937_64& engine() noexcept { return gen_; }

private:
    std::mt19937_64 gen_;
};

inline std::vector<double> random_point(SpaceConfig cfg, SeededRng& rng) {
    std::vector<double> p(static_cast<std::size_t>(cfg.m()));
    for (double& x : p) x = rng.uniform();
    return p;
}

/// Gaussian combination of the orthonormal basis of K.
inline Tensor4 random_kahler_tensor(SpaceConfig cfg, SeededRng& rng) {
    const Subspace& K = kahler_modules(cfg).K;
    FlatVector c(K.dim());
    for (Eigen::Index k = 0; k < c.size(); ++k) c(k) = rng.normal();
    return unflatten_tensor(cfg, K.basis() * c);
}

enum class ThetaKind { holomorphic, antiholomorphic, generic };

namespace detail {

inline void complex_multiply(ThetaEntry& acc, const ThetaEntry& f) {
    Polynomial u = acc.u * f.u - acc.v * f.v;
    Polynomial v = acc.u * f.v + acc.v * f.u;
    acc = ThetaEntry(std::move(u), std::move(v));
}

/// All exponent vectors over `vars` variables with total degree <= deg.
inline void monomials(int vars, int deg, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == vars) {
        out.push_back(cur);
        return;
    }
    for (int p = 0; p <= deg; ++p) {
        cur.push_back(p);
        monomials(vars, deg - p, cur, out);
        cur.pop_back();
    }
}

} // namespace detail

/// Theta with every entry a random polynomial of degree <= `degree`:
/// sum of c * z^alpha (holomorphic), c * conj(z)^alpha (antiholomorphic),
/// or independent real u, v (generic). Coefficients are uniform in [-1, 1].
inline ThetaField random_theta(int m_bar, SeededRng& rng, int degree, ThetaKind kind, bool vanish_at_origin) {
    ThetaField theta(m_bar);
    const int n = 2 * m_bar;
    const int vars = kind == ThetaKind::generic ? n : m_bar;
    std::vector<std::vector<int>> exps;
    std::vector<int> cur;
    detail::monomials(vars, degree, cur, exps);

    for (int i = 0; i < m_bar; ++i)
        for (int j = i; j < m_bar; ++j)
            for (int k = 0; k < m_bar; ++k) {
                ThetaEntry entry(n);
                for (const auto& e : exps) {
                    int total = 0;
                    for (int p : e) total += p;
                    if (vanish_at_origin && total == 0) continue;
                    if (kind == ThetaKind::generic) {
                        entry.u.add_term(e, rng.uniform());
                        entry.v.add_term(e, rng.uniform());
                        continue;
                    }
                    const std::complex<double> c(rng.uniform(), rng.uniform());
                    ThetaEntry term(Polynomial::constant(n, c.real()), Polynomial::constant(n, c.imag()));
                    for (int a = 0; a < m_bar; ++a)
                        for (int p = 0; p < e[static_cast<std::size_t>(a)]; ++p)
                            detail::complex_multiply(term, kind == ThetaKind::holomorphic
                                                               ? ThetaEntry::z(m_bar, a, 1.0)
                                                               : ThetaEntry::zbar(m_bar, a, 1.0));
                    entry += term;
                }
                theta.set(i, j, k, std::move(entry));
            }
    return theta;
}

} // namespace kahler
