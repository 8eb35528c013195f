#pragma once

#include <functional>
#include <string>
#include <vector>

#include "kahler/decomposition.hpp"
#include "kahler/linalg.hpp"
#include "kahler/realization.hpp"
#include "kahler/symmetry.hpp"

namespace kahler {

/// A linear map restricted to a source subspace, checked against a target.
struct MapCheck {
    std::string name;
    long source_dim = 0;
    long target_dim = 0;
    long image_rank = 0;
    double leak = 0.0;  // largest relative distance of an image vector from the target
    bool ok = false;
};

inline constexpr double kStructuralTolerance = 1e-9;

/// ok iff f maps `source` injectively into `target` and, when `onto`, the
/// image is all of `target`.
inline MapCheck check_map(std::string name, const Subspace& source, const Subspace& target,
                          const std::function<FlatVector(const FlatVector&)>& f, bool onto = true) {
    MapCheck out;
    out.name = std::move(name);
    out.source_dim = source.dim();
    out.target_dim = target.dim();
    const LinearMapMatrix images = restricted_map(source, f, target.ambient_dim());
    for (Eigen::Index k = 0; k < images.cols(); ++k) {
        const FlatVector v = images.col(k);
        const double n = v.norm();
        if (n > 0.0) out.leak = std::max(out.leak, (v - target.project(v)).norm() / n);
    }
    out.image_rank = numerical_rank(images, 1e-10);
    out.ok = out.leak <= kStructuralTolerance && out.image_rank == out.source_dim &&
             (!onto || out.image_rank == out.target_dim);
    return out;
}

namespace detail {

inline std::function<FlatVector(const FlatVector&)> tensor_map(SpaceConfig cfg,
                                                               std::function<FlatVector(const Tensor4&)> f) {
    return [cfg, f = std::move(f)](const FlatVector& v) { return f(unflatten_tensor(cfg, v)); };
}

/// Theta(x, J y)
inline Bilinear2 j_on_second_slot(const Bilinear2& b) {
    const SpaceConfig& s = b.config();
    Bilinear2 out(s);
    for (int a = 0; a < s.m(); ++a)
        for (int c = 0; c < s.m(); ++c) out(a, c) = s.j_sign(c) * b(a, s.j_index(c));
    return out;
}

/// Block subspace {(p, q)} of R^(2N) with p in first, q in second.
inline Subspace direct_sum(const Subspace& first, const Subspace& second) {
    const Eigen::Index n = first.ambient_dim();
    Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(2 * n, first.dim() + second.dim());
    basis.topLeftCorner(n, first.dim()) = first.basis();
    basis.bottomRightCorner(n, second.dim()) = second.basis();
    return Subspace::from_orthonormal(std::move(basis));
}

} // namespace detail

/// The two module isomorphisms: L2_0+ -> S2_0+ by Theta(x, Jy), and
/// W9 -> W10 by A(x, y, z, Jw).
inline std::vector<MapCheck> isomorphism_checks(int m_bar) {
    const SpaceConfig cfg(m_bar);
    const BilinearModules& bm = bilinear_modules(cfg);
    const KahlerModules& km = kahler_modules(cfg);
    std::vector<MapCheck> out;
    out.push_back(check_map("L2_0+->S2_0+", bm.lambda2_zero_plus, bm.s2_zero_plus, [cfg](const FlatVector& v) {
        return flatten(detail::j_on_second_slot(unflatten_bilinear(cfg, v)));
    }));
    out.push_back(check_map("W9->W10", km.module(9), km.module(10),
                            detail::tensor_map(cfg, [](const Tensor4& t) { return flatten(j_on_last_slot(t)); })));
    return out;
}

/// Trace maps on the constructed modules: (tau, tau_tilde_J) on W5 + W6,
/// rho14 on W2 and W4, and rho14 + rho13 on M0.
inline std::vector<MapCheck> trace_map_checks(int m_bar) {
    const SpaceConfig cfg(m_bar);
    const BilinearModules& bm = bilinear_modules(cfg);
    const KahlerModules& km = kahler_modules(cfg);
    std::vector<MapCheck> out;

    const Subspace w56 = span_union(km.module(5), km.module(6));
    out.push_back(check_map("tau+tau_tilde_J:W5+W6", w56, Subspace::whole(2), detail::tensor_map(cfg, [](const Tensor4& t) {
                                const Bilinear2 r = rho14(t);
                                FlatVector v(2);
                                v << trace(r), j_trace(r);
                                return v;
                            })));
    auto r14 = detail::tensor_map(cfg, [](const Tensor4& t) { return flatten(rho14(t)); });
    out.push_back(check_map("rho14:W2->S2-", km.module(2), bm.s2_minus, r14));
    out.push_back(check_map("rho14:W4->L2-", km.module(4), bm.lambda2_minus, r14));

    const Subspace zero_traces = span_union(bm.s2_zero_plus, bm.lambda2_zero_plus);
    out.push_back(check_map("rho14+rho13:M0", km.M_zero, detail::direct_sum(zero_traces, zero_traces),
                            detail::tensor_map(cfg, [](const Tensor4& t) {
                                const FlatVector a = flatten(rho14(t)), b = flatten(rho13(t));
                                FlatVector v(a.size() + b.size());
                                v << a, b;
                                return v;
                            })));
    return out;
}

struct SurjectivityReport {
    long dim_K = 0;
    long dim_K_plus = 0;
    long dim_K_minus = 0;
    long columns = 0;
    long rank = 0;
    long holomorphic_rank = 0;
    long antiholomorphic_rank = 0;
    double holomorphic_leak = 0.0;      // distance of holomorphic columns from K-
    double antiholomorphic_leak = 0.0;  // distance of antiholomorphic columns from K+
    bool ok = false;
};

/// Rank of the curvature coefficient map and of its parity-restricted
/// column blocks, compared with the parity projector ranks.
inline SurjectivityReport surjectivity_check(int m_bar) {
    const SpaceConfig cfg(m_bar);
    const KahlerModules& km = kahler_modules(cfg);
    const CurvatureCoefficientMap& map = curvature_coefficient_map(cfg);
    SurjectivityReport r;
    r.dim_K = km.K.dim();

    // parity projector oracle: rank of (A + TA)/2 and (A - TA)/2 on a basis of K
    LinearMapMatrix plus(km.K.ambient_dim(), km.K.dim()), minus(km.K.ambient_dim(), km.K.dim());
    for (Eigen::Index k = 0; k < km.K.dim(); ++k) {
        const Tensor4 a = unflatten_tensor(cfg, km.K.vector(k));
        const Tensor4 p = 0.5 * (a + j_conjugate(a));
        plus.col(k) = flatten(p);
        minus.col(k) = flatten(a - p);
    }
    r.dim_K_plus = numerical_rank(plus, 1e-10);
    r.dim_K_minus = numerical_rank(minus, 1e-10);

    r.columns = map.matrix.cols();
    r.rank = numerical_rank(map.matrix, 1e-10);
    const LinearMapMatrix hol = map.holomorphic_matrix(), anti = map.antiholomorphic_matrix();
    r.holomorphic_rank = numerical_rank(hol, 1e-10);
    r.antiholomorphic_rank = numerical_rank(anti, 1e-10);
    auto leak = [](const LinearMapMatrix& cols, const Subspace& s) {
        double worst = 0.0;
        for (Eigen::Index k = 0; k < cols.cols(); ++k) {
            const FlatVector v = cols.col(k);
            if (v.norm() > 0.0) worst = std::max(worst, (v - s.project(v)).norm() / v.norm());
        }
        return worst;
    };
    r.holomorphic_leak = leak(hol, km.K_minus);
    r.antiholomorphic_leak = leak(anti, km.K_plus);
    r.ok = r.rank == r.dim_K && r.holomorphic_rank == r.dim_K_minus && r.antiholomorphic_rank == r.dim_K_plus &&
           r.holomorphic_leak <= kStructuralTolerance && r.antiholomorphic_leak <= kStructuralTolerance &&
           r.dim_K_plus + r.dim_K_minus == r.dim_K;
    return r;
}

} // namespace kahler
