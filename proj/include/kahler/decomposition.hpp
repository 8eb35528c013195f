#pragma once

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "kahler/cache.hpp"
#include "kahler/error.hpp"
#include "kahler/linalg.hpp"
#include "kahler/symmetry.hpp"
#include "kahler/tensor.hpp"

namespace kahler {

inline constexpr int kModuleCount = 12;

inline std::string module_label(int index) { return "W" + std::to_string(index + 1); }

// ---------------------------------------------------------------------------
// Bilinear forms: (x)^2 V* = S2- + S2_0+ + R<.,.> + L2- + L2_0+ + R Omega

struct BilinearDecomposition {
    Bilinear2 s2_minus;
    Bilinear2 s2_zero_plus;
    Bilinear2 scalar_metric_part;  // (coefficient) * <.,.>
    Bilinear2 lambda2_minus;
    Bilinear2 lambda2_zero_plus;
    Bilinear2 scalar_omega_part;  // (coefficient) * Omega

    Bilinear2 sum() const {
        return s2_minus + s2_zero_plus + scalar_metric_part + lambda2_minus + lambda2_zero_plus +
               scalar_omega_part;
    }
};

inline BilinearDecomposition bilinear_decompose(const Bilinear2& theta) {
    const SpaceConfig& cfg = theta.config();
    const Bilinear2 t = theta.transpose();
    const Bilinear2 sym = 0.5 * (theta + t);
    const Bilinear2 alt = 0.5 * (theta - t);

    const Bilinear2 sym_j = sym.j_pullback();
    const Bilinear2 alt_j = alt.j_pullback();
    const Bilinear2 sym_plus = 0.5 * (sym + sym_j);
    const Bilinear2 alt_plus = 0.5 * (alt + alt_j);

    const Bilinear2 g = Bilinear2::identity(cfg);
    const Bilinear2 omega = kahler_form(cfg);
    const double m = cfg.m();
    const Bilinear2 metric_part = (sym_plus.dot(g) / m) * g;
    const Bilinear2 omega_part = (alt_plus.dot(omega) / m) * omega;

    return BilinearDecomposition{
        .s2_minus = 0.5 * (sym - sym_j),
        .s2_zero_plus = sym_plus - metric_part,
        .scalar_metric_part = metric_part,
        .lambda2_minus = 0.5 * (alt - alt_j),
        .lambda2_zero_plus = alt_plus - omega_part,
        .scalar_omega_part = omega_part,
    };
}

struct BilinearModules {
    Subspace s2_minus;
    Subspace s2_zero_plus;
    Subspace lambda2_minus;
    Subspace lambda2_zero_plus;
};

namespace detail {

using FlatFn = std::function<FlatVector(const FlatVector&)>;

template <class F>
FlatFn on_tensor(SpaceConfig cfg, F f) {
    return [cfg, f](const FlatVector& v) { return f(unflatten_tensor(cfg, v)); };
}

template <class F>
FlatFn on_bilinear(SpaceConfig cfg, F f) {
    return [cfg, f](const FlatVector& v) { return f(unflatten_bilinear(cfg, v)); };
}

inline FlatVector stack(std::initializer_list<FlatVector> parts) {
    Eigen::Index n = 0;
    for (const auto& p : parts) n += p.size();
    FlatVector out(n);
    Eigen::Index at = 0;
    for (const auto& p : parts) {
        out.segment(at, p.size()) = p;
        at += p.size();
    }
    return out;
}

inline FlatVector scalar(double v) {
    FlatVector out(1);
    out(0) = v;
    return out;
}

inline FlatVector sym_part(const Bilinear2& b) { return flatten(0.5 * (b + b.transpose())); }
inline FlatVector alt_part(const Bilinear2& b) { return flatten(0.5 * (b - b.transpose())); }

inline BilinearModules build_bilinear_modules(SpaceConfig cfg) {
    const Eigen::Index m2 = cfg.m() * cfg.m();
    const Subspace all = Subspace::whole(m2);
    const Bilinear2 g = Bilinear2::identity(cfg);
    const Bilinear2 omega = kahler_form(cfg);
    auto build = [&](double sym_sign, double j_sign, const Bilinear2* trace_against) {
        // theta = sym_sign * theta^T, J^*theta = j_sign * theta, theta _|_ trace_against
        return kernel_within(
            all,
            on_bilinear(cfg,
                        [=](const Bilinear2& b) {
                            FlatVector base = stack({flatten(b - sym_sign * b.transpose()),
                                                     flatten(b.j_pullback() - j_sign * b)});
                            if (trace_against) return stack({base, scalar(b.dot(*trace_against))});
                            return base;
                        }),
            2 * m2 + (trace_against ? 1 : 0));
    };
    return BilinearModules{
        .s2_minus = build(1.0, -1.0, nullptr),
        .s2_zero_plus = build(1.0, 1.0, &g),
        .lambda2_minus = build(-1.0, -1.0, nullptr),
        .lambda2_zero_plus = build(-1.0, 1.0, &omega),
    };
}

} // namespace detail

inline const BilinearModules& bilinear_modules(SpaceConfig cfg) {
    static detail::OnceCache<int, BilinearModules> cache;
    return cache.get(cfg.m_bar(), [&] { return detail::build_bilinear_modules(cfg); });
}

// ---------------------------------------------------------------------------
// Closed-form dimensions

struct DimensionTable {
    int m_bar = 0;
    std::map<std::string, long> dims;

    long at(const std::string& label) const { return dims.at(label); }
};

/// Labels in report order.
inline const std::vector<std::string>& dimension_labels() {
    static const std::vector<std::string> labels = {
        "K",  "K+", "K-", "W1",  "W2",  "W3",  "W4",  "W5",    "W6",  "W7",
        "W8", "W9", "W10", "W11", "W12", "S2-", "S2_0+", "L2-", "L2_0+"};
    return labels;
}

inline DimensionTable module_dimension_table(int m_bar) {
    SpaceConfig(m_bar).require_decomposable();
    const long n = m_bar;
    DimensionTable t;
    t.m_bar = m_bar;
    auto& d = t.dims;
    d["W1"] = n * n - 1;
    d["W2"] = n * (n + 1);
    d["W3"] = n * n - 1;
    d["W4"] = n * (n - 1);
    d["W5"] = 1;
    d["W6"] = 1;
    d["W7"] = n * n - 1;
    d["W8"] = n * n - 1;
    d["W9"] = n * n * (n - 1) * (n + 3) / 4;
    d["W10"] = n * n * (n - 1) * (n + 3) / 4;
    d["W11"] = (n - 1) * (n + 1) * (n - 2) * (n + 2) / 2;
    d["W12"] = 2 * n * n * (n - 2) * (n + 2) / 3;
    d["K"] = n * n * (n + 1) * (5 * n - 2) / 3;
    d["K-"] = d["W2"] + d["W4"] + d["W12"];
    d["K+"] = d["K"] - d["K-"];
    d["S2-"] = n * (n + 1);
    d["S2_0+"] = n * n - 1;
    d["L2-"] = n * (n - 1);
    d["L2_0+"] = n * n - 1;
    return t;
}

// ---------------------------------------------------------------------------
// K and its twelve submodules

namespace detail {

// Span of tensors antisymmetric in the first pair and J-invariant in the last
// pair. Each generator is supported on one orbit of the index symmetries, so
// distinct generators are already orthogonal.
inline Subspace pre_kahler_space(SpaceConfig cfg) {
    const int m = cfg.m();
    const Eigen::Index n = static_cast<Eigen::Index>(Tensor4::size_for(cfg));
    std::vector<FlatVector> gens;
    Tensor4 unit(cfg);
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b)
            for (int c = 0; c < m; ++c)
                for (int d = 0; d < m; ++d) {
                    const std::size_t here = unit.index(a, b, c, d);
                    // representative of the orbit {(c,d), (Jc,Jd)} with the smaller flat index
                    const int jc = cfg.j_index(c), jd = cfg.j_index(d);
                    if (unit.index(a, b, jc, jd) < here) continue;
                    const double s = cfg.j_sign(c) * cfg.j_sign(d);
                    FlatVector v = FlatVector::Zero(n);
                    v(static_cast<Eigen::Index>(here)) += 1.0;
                    v(static_cast<Eigen::Index>(unit.index(b, a, c, d))) -= 1.0;
                    // A(a,b,c,d) = A(a,b,Jc,Jd) = s * A(a,b,jc,jd)
                    v(static_cast<Eigen::Index>(unit.index(a, b, jc, jd))) += s;
                    v(static_cast<Eigen::Index>(unit.index(b, a, jc, jd))) -= s;
                    gens.push_back(v / v.norm());
                }
    Eigen::MatrixXd basis(n, static_cast<Eigen::Index>(gens.size()));
    for (std::size_t k = 0; k < gens.size(); ++k) basis.col(static_cast<Eigen::Index>(k)) = gens[k];
    return Subspace::from_orthonormal(std::move(basis));
}

inline FlatVector bianchi_residual(const Tensor4& t) {
    Tensor4 out(t.config());
    const int m = t.dim();
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c)
                for (int d = 0; d < m; ++d) out(a, b, c, d) = t(a, b, c, d) + t(b, c, a, d) + t(c, a, b, d);
    return flatten(out);
}

} // namespace detail

inline Subspace kahler_space_basis(SpaceConfig cfg) {
    cfg.require_decomposable();
    const Subspace pre = detail::pre_kahler_space(cfg);
    return kernel_within(pre, detail::on_tensor(cfg, detail::bianchi_residual), pre.ambient_dim());
}

/// K, its parity halves, the intermediate spaces used to pin the splitting,
/// and W1..W12 (index 0..11).
struct KahlerModules {
    SpaceConfig config;
    Subspace K;
    Subspace K_plus;
    Subspace K_minus;
    Subspace N_plus;  // K+ n ker rho13 n ker rho14
    Subspace M_plus;  // complement of N+ in K+
    Subspace M_zero;  // M+ n ker tau n ker tau_tilde
    std::array<Subspace, kModuleCount> W;

    const Subspace& module(int one_based) const { return W.at(static_cast<std::size_t>(one_based - 1)); }
};

namespace detail {

inline void verify_modules(const KahlerModules& km) {
    const DimensionTable table = module_dimension_table(km.config.m_bar());
    auto expect = [&](const std::string& label, Eigen::Index got) {
        if (got != table.at(label)) {
            throw InternalError("module construction: dim " + label + " = " + std::to_string(got) +
                                ", expected " + std::to_string(table.at(label)));
        }
    };
    expect("K", km.K.dim());
    expect("K+", km.K_plus.dim());
    expect("K-", km.K_minus.dim());
    for (int i = 0; i < kModuleCount; ++i) expect(module_label(i), km.W[static_cast<std::size_t>(i)].dim());

    for (int i = 0; i < kModuleCount; ++i)
        for (int j = i + 1; j < kModuleCount; ++j) {
            const auto& a = km.W[static_cast<std::size_t>(i)];
            const auto& b = km.W[static_cast<std::size_t>(j)];
            if (a.dim() == 0 || b.dim() == 0) continue;
            const double overlap = (a.basis().transpose() * b.basis()).cwiseAbs().maxCoeff();
            if (overlap > 1e-9) {
                throw InternalError("module construction: " + module_label(i) + " and " + module_label(j) +
                                    " are not orthogonal (overlap " + std::to_string(overlap) + ")");
            }
        }
}

inline KahlerModules build_kahler_modules(SpaceConfig cfg) {
    const Eigen::Index m2 = cfg.m() * cfg.m();
    const Eigen::Index n = static_cast<Eigen::Index>(Tensor4::size_for(cfg));

    const Subspace K = kahler_space_basis(cfg);
    const Subspace K_plus =
        kernel_within(K, on_tensor(cfg, [](const Tensor4& t) { return flatten(j_conjugate(t) - t); }), n);
    const Subspace K_minus =
        kernel_within(K, on_tensor(cfg, [](const Tensor4& t) { return flatten(j_conjugate(t) + t); }), n);

    auto r13 = [](const Tensor4& t) { return rho13(t); };
    auto r14 = [](const Tensor4& t) { return rho14(t); };

    // K-: W12 = ker rho14, W2 / W4 by the symmetry type of rho14
    const Subspace W12 = kernel_within(K_minus, on_tensor(cfg, [&](const Tensor4& t) { return flatten(r14(t)); }), m2);
    const Subspace W24 = complement_within(W12, K_minus);
    const Subspace W2 = kernel_within(W24, on_tensor(cfg, [&](const Tensor4& t) { return alt_part(r14(t)); }), m2);
    const Subspace W4 = kernel_within(W24, on_tensor(cfg, [&](const Tensor4& t) { return sym_part(r14(t)); }), m2);

    // K+: trace-free part N+ splits by the symmetry in the last pair
    const Subspace N_plus = kernel_within(
        K_plus, on_tensor(cfg, [&](const Tensor4& t) { return stack({flatten(r13(t)), flatten(r14(t))}); }),
        2 * m2);
    const Subspace W9 =
        kernel_within(N_plus, on_tensor(cfg, [](const Tensor4& t) { return flatten(t + swap_last_pair(t)); }), n);
    const Subspace W10 =
        kernel_within(N_plus, on_tensor(cfg, [](const Tensor4& t) { return flatten(t - swap_last_pair(t)); }), n);
    const Subspace W11 = complement_within(span_union(W9, W10), N_plus);

    // K+ / N+: scalar part W5 + W6, then W1 + W3 (rho13 = 0) and W7 + W8
    const Subspace M_plus = complement_within(N_plus, K_plus);
    auto tau_of = [](const Tensor4& t) { return trace(rho14(t)); };
    auto tau_tilde_of = [](const Tensor4& t) { return j_trace(rho14(t)); };
    const Subspace M_zero = kernel_within(
        M_plus, on_tensor(cfg, [&](const Tensor4& t) { return stack({scalar(tau_of(t)), scalar(tau_tilde_of(t))}); }),
        2);
    const Subspace W56 = complement_within(M_zero, M_plus);
    const Subspace W5 = kernel_within(W56, on_tensor(cfg, [&](const Tensor4& t) { return scalar(tau_tilde_of(t)); }), 1);
    const Subspace W6 = kernel_within(W56, on_tensor(cfg, [&](const Tensor4& t) { return scalar(tau_of(t)); }), 1);

    const Subspace W13 = kernel_within(M_zero, on_tensor(cfg, [&](const Tensor4& t) { return flatten(r13(t)); }), m2);
    const Subspace W78 = complement_within(W13, M_zero);
    const Subspace W1 = kernel_within(W13, on_tensor(cfg, [&](const Tensor4& t) { return alt_part(r14(t)); }), m2);
    const Subspace W3 = kernel_within(W13, on_tensor(cfg, [&](const Tensor4& t) { return sym_part(r14(t)); }), m2);
    const Subspace W7 = kernel_within(W78, on_tensor(cfg, [&](const Tensor4& t) { return alt_part(r13(t)); }), m2);
    const Subspace W8 = kernel_within(W78, on_tensor(cfg, [&](const Tensor4& t) { return sym_part(r13(t)); }), m2);

    KahlerModules km{
        .config = cfg,
        .K = K,
        .K_plus = K_plus,
        .K_minus = K_minus,
        .N_plus = N_plus,
        .M_plus = M_plus,
        .M_zero = M_zero,
        .W = {W1, W2, W3, W4, W5, W6, W7, W8, W9, W10, W11, W12},
    };
    verify_modules(km);
    return km;
}

} // namespace detail

/// Cached per m_bar; the first call for a given m_bar builds and checks
/// every subspace (throws InternalError if a dimension or orthogonality
/// check fails).
inline const KahlerModules& kahler_modules(SpaceConfig cfg) {
    cfg.require_decomposable();
    static detail::OnceCache<int, KahlerModules> cache;
    return cache.get(cfg.m_bar(), [&] { return detail::build_kahler_modules(cfg); });
}

inline const std::array<Subspace, kModuleCount>& w_subspaces(SpaceConfig cfg) { return kahler_modules(cfg).W; }

/// Dimensions of the constructed subspaces, same labels as the closed forms.
inline DimensionTable computed_dimension_table(int m_bar) {
    const SpaceConfig cfg(m_bar);
    const KahlerModules& km = kahler_modules(cfg);
    const BilinearModules& bm = bilinear_modules(cfg);
    DimensionTable t;
    t.m_bar = m_bar;
    t.dims["K"] = km.K.dim();
    t.dims["K+"] = km.K_plus.dim();
    t.dims["K-"] = km.K_minus.dim();
    for (int i = 0; i < kModuleCount; ++i) t.dims[module_label(i)] = km.W[static_cast<std::size_t>(i)].dim();
    t.dims["S2-"] = bm.s2_minus.dim();
    t.dims["S2_0+"] = bm.s2_zero_plus.dim();
    t.dims["L2-"] = bm.lambda2_minus.dim();
    t.dims["L2_0+"] = bm.lambda2_zero_plus.dim();
    return t;
}

struct WComponent {
    Tensor4 component;
    double norm = 0.0;
};

struct WDecomposition {
    std::vector<WComponent> modules;  // index 0..11 for W1..W12
    double residual = 0.0;
    double plus_norm = 0.0;
    double minus_norm = 0.0;

    const WComponent& module(int one_based) const { return modules.at(static_cast<std::size_t>(one_based - 1)); }
    Tensor4 sum() const {
        Tensor4 s = modules.front().component;
        for (std::size_t i = 1; i < modules.size(); ++i) s += modules[i].component;
        return s;
    }
};

inline WDecomposition w_project(const Tensor4& t, double tol = kDefaultTolerance) {
    require_in_K(t, tol, "w_project");
    const KahlerModules& km = kahler_modules(t.config());
    const FlatVector a = flatten(t);
    WDecomposition out;
    FlatVector total = FlatVector::Zero(a.size());
    for (const Subspace& w : km.W) {
        const FlatVector p = w.project(a);
        total += p;
        out.modules.push_back(WComponent{unflatten_tensor(t.config(), p), p.norm()});
    }
    out.residual = (a - total).norm();
    out.plus_norm = km.K_plus.project(a).norm();
    out.minus_norm = km.K_minus.project(a).norm();
    return out;
}

} // namespace kahler
