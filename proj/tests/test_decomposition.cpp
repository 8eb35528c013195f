#include <gtest/gtest.h>

#include "kahler/checks.hpp"
#include "kahler/decomposition.hpp"
#include "kahler/random.hpp"
#include "kahler/witnesses.hpp"

using namespace kahler;

namespace {

// Rank-based oracle for dim K and dim K+/-: every defining identity as a row
// of one big constraint matrix, rank by column-pivoted QR.
long constraint_nullity(int m_bar, int parity) {
    const SpaceConfig s(m_bar);
    const int m = s.m();
    const Eigen::Index n = static_cast<Eigen::Index>(Tensor4::size_for(s));
    const Tensor4 probe(s);
    const int blocks = parity == 0 ? 3 : 4;
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(blocks * n, n);
    auto idx = [&](int a, int b, int cc, int d) { return static_cast<Eigen::Index>(probe.index(a, b, cc, d)); };
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int cc = 0; cc < m; ++cc)
                for (int d = 0; d < m; ++d) {
                    const Eigen::Index r = idx(a, b, cc, d);
                    c(r, r) += 1.0;
                    c(r, idx(b, a, cc, d)) += 1.0;
                    c(n + r, r) += 1.0;
                    c(n + r, idx(b, cc, a, d)) += 1.0;
                    c(n + r, idx(cc, a, b, d)) += 1.0;
                    c(2 * n + r, r) += 1.0;
                    c(2 * n + r, idx(a, b, s.j_index(cc), s.j_index(d))) -= s.j_sign(cc) * s.j_sign(d);
                    if (parity != 0) {
                        const double sign = s.j_sign(a) * s.j_sign(b) * s.j_sign(cc) * s.j_sign(d);
                        c(3 * n + r, idx(s.j_index(a), s.j_index(b), s.j_index(cc), s.j_index(d))) += sign;
                        c(3 * n + r, r) -= parity;
                    }
                }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(c);
    qr.setThreshold(1e-10);
    return static_cast<long>(n - qr.rank());
}

bool is_only(const WDecomposition& w, std::initializer_list<int> allowed, double tol) {
    for (int i = 1; i <= kModuleCount; ++i) {
        const bool ok_nonzero = std::find(allowed.begin(), allowed.end(), i) != allowed.end();
        if (!ok_nonzero && w.module(i).norm > tol) return false;
    }
    return true;
}

} // namespace

TEST(DimensionTable, ClosedFormsAtSmallDimensions) {
    const DimensionTable t2 = module_dimension_table(2);
    const std::vector<long> w2{3, 6, 3, 2, 1, 1, 3, 3, 5, 5, 0, 0};
    for (int i = 0; i < kModuleCount; ++i) EXPECT_EQ(t2.at(module_label(i)), w2[static_cast<std::size_t>(i)]);
    EXPECT_EQ(t2.at("K"), 32);
    EXPECT_EQ(t2.at("K+"), 24);
    EXPECT_EQ(t2.at("K-"), 8);

    const DimensionTable t3 = module_dimension_table(3);
    const std::vector<long> w3{8, 12, 8, 6, 1, 1, 8, 8, 27, 27, 20, 30};
    for (int i = 0; i < kModuleCount; ++i) EXPECT_EQ(t3.at(module_label(i)), w3[static_cast<std::size_t>(i)]);
    EXPECT_EQ(t3.at("K"), 156);
    EXPECT_EQ(t3.at("K+"), 108);
    EXPECT_EQ(t3.at("K-"), 48);

    EXPECT_EQ(module_dimension_table(4).at("K"), 480);
    EXPECT_THROW(module_dimension_table(1), InvalidArgument);
}

TEST(DimensionTable, ModulesSumToK) {
    for (int mb = 2; mb <= 8; ++mb) {
        const DimensionTable t = module_dimension_table(mb);
        long sum = 0, minus = 0;
        for (int i = 0; i < kModuleCount; ++i) sum += t.at(module_label(i));
        for (int i : {2, 4, 12}) minus += t.at("W" + std::to_string(i));
        EXPECT_EQ(sum, t.at("K")) << mb;
        EXPECT_EQ(minus, t.at("K-")) << mb;
    }
}

TEST(DimensionTable, ComputedMatchesClosedForm) {
    for (int mb : {2, 3}) {
        const DimensionTable closed = module_dimension_table(mb), computed = computed_dimension_table(mb);
        for (const std::string& label : dimension_labels()) EXPECT_EQ(closed.at(label), computed.at(label)) << label;
    }
}

TEST(DimensionTable, KMatchesConstraintRankOracle) {
    EXPECT_EQ(constraint_nullity(2, 0), 32);
    EXPECT_EQ(constraint_nullity(2, +1), 24);
    EXPECT_EQ(constraint_nullity(2, -1), 8);
    EXPECT_EQ(constraint_nullity(3, 0), 156);
    EXPECT_EQ(constraint_nullity(3, +1), 108);
    EXPECT_EQ(constraint_nullity(3, -1), 48);
}

TEST(KahlerModules, BasisVectorsSatisfyTheIdentities) {
    for (int mb : {2, 3}) {
        const SpaceConfig s(mb);
        const KahlerModules& km = kahler_modules(s);
        EXPECT_LE(km.K.orthonormality_defect(), 1e-12);
        for (Eigen::Index k = 0; k < km.K.dim(); ++k) {
            const SymmetryReport r = classify_symmetries(unflatten_tensor(s, km.K.vector(k)), 1e-12);
            EXPECT_TRUE(r.in_K);
            EXPECT_TRUE(r.kahler_operator_1i.holds);
        }
        for (int i = 1; i <= kModuleCount; ++i) {
            EXPECT_LE(km.module(i).orthonormality_defect(), 1e-12);
            EXPECT_LE(km.K.containment_residual(km.module(i)), 1e-10);
        }
    }
    EXPECT_THROW(kahler_modules(SpaceConfig(1)), InvalidArgument);
}

TEST(KahlerModules, ModulesAreMutuallyOrthogonal) {
    for (int mb : {2, 3}) {
        const KahlerModules& km = kahler_modules(SpaceConfig(mb));
        for (int i = 1; i <= kModuleCount; ++i)
            for (int j = i + 1; j <= kModuleCount; ++j) {
                if (km.module(i).dim() == 0 || km.module(j).dim() == 0) continue;
                EXPECT_LE((km.module(i).basis().transpose() * km.module(j).basis()).cwiseAbs().maxCoeff(), 1e-10)
                    << i << " " << j;
            }
    }
}

TEST(KahlerModules, ModulesHaveTheirDefiningTraceBehaviour) {
    for (int mb : {2, 3}) {
        const SpaceConfig s(mb);
        const KahlerModules& km = kahler_modules(s);
        auto each = [&](int i, auto&& f) {
            for (Eigen::Index k = 0; k < km.module(i).dim(); ++k) f(unflatten_tensor(s, km.module(i).vector(k)));
        };
        for (int i : {2, 4, 12}) each(i, [](const Tensor4& t) { EXPECT_LE((j_conjugate(t) + t).max_abs(), 1e-10); });
        for (int i : {1, 3, 5, 6, 7, 8, 9, 10, 11})
            each(i, [](const Tensor4& t) { EXPECT_LE((j_conjugate(t) - t).max_abs(), 1e-10); });
        for (int i : {9, 10, 11, 12}) each(i, [](const Tensor4& t) { EXPECT_LE(rho14(t).max_abs(), 1e-10); });
        for (int i : {9, 10, 11}) each(i, [](const Tensor4& t) { EXPECT_LE(rho13(t).max_abs(), 1e-10); });
        each(9, [](const Tensor4& t) { EXPECT_LE((t + swap_last_pair(t)).max_abs(), 1e-10); });
        each(10, [](const Tensor4& t) { EXPECT_LE((t - swap_last_pair(t)).max_abs(), 1e-10); });
        each(2, [](const Tensor4& t) {
            const Bilinear2 r = rho14(t);
            EXPECT_LE((r - r.transpose()).max_abs(), 1e-10);
        });
        each(4, [](const Tensor4& t) {
            const Bilinear2 r = rho14(t);
            EXPECT_LE((r + r.transpose()).max_abs(), 1e-10);
        });
        for (int i : {1, 3}) each(i, [](const Tensor4& t) { EXPECT_LE(rho13(t).max_abs(), 1e-10); });
        each(5, [](const Tensor4& t) { EXPECT_NEAR(j_trace(rho14(t)), 0.0, 1e-10); });
        each(6, [](const Tensor4& t) { EXPECT_NEAR(trace(rho14(t)), 0.0, 1e-10); });
    }
}

TEST(BilinearDecompose, ScalarParts) {
    const SpaceConfig s(2);
    const BilinearDecomposition g = bilinear_decompose(Bilinear2::identity(s));
    EXPECT_LE((g.scalar_metric_part - Bilinear2::identity(s)).max_abs(), 1e-15);
    EXPECT_LE(g.s2_minus.max_abs() + g.s2_zero_plus.max_abs() + g.lambda2_minus.max_abs() +
                  g.lambda2_zero_plus.max_abs() + g.scalar_omega_part.max_abs(),
              1e-15);
    const BilinearDecomposition w = bilinear_decompose(kahler_form(s));
    EXPECT_LE((w.scalar_omega_part - kahler_form(s)).max_abs(), 1e-15);
    EXPECT_LE(w.scalar_metric_part.max_abs(), 1e-15);
}

TEST(BilinearDecompose, SingleEntryCases) {
    const SpaceConfig s(2);
    // e1 (x) e1 - f1 (x) f1 is symmetric and J-odd
    Bilinear2 a(s);
    a(s.e(0), s.e(0)) = 1.0;
    a(s.f(0), s.f(0)) = -1.0;
    const BilinearDecomposition d = bilinear_decompose(a);
    EXPECT_LE((d.s2_minus - a).max_abs(), 1e-15);
    // e1 ^ e2 - f1 ^ f2 is alternating and J-odd
    Bilinear2 b(s);
    b(s.e(0), s.e(1)) = 1.0;
    b(s.e(1), s.e(0)) = -1.0;
    b(s.f(0), s.f(1)) = -1.0;
    b(s.f(1), s.f(0)) = 1.0;
    EXPECT_LE((bilinear_decompose(b).lambda2_minus - b).max_abs(), 1e-15);
}

TEST(BilinearDecompose, RandomFormsSplitOrthogonally) {
    SeededRng rng(13);
    for (int mb : {2, 3}) {
        const SpaceConfig s(mb);
        Bilinear2 x(s);
        for (double& v : x.data()) v = rng.normal();
        const BilinearDecomposition d = bilinear_decompose(x);
        EXPECT_LE((d.sum() - x).max_abs(), 1e-12);
        const std::array<Bilinear2, 6> parts{d.s2_minus, d.s2_zero_plus, d.scalar_metric_part,
                                             d.lambda2_minus, d.lambda2_zero_plus, d.scalar_omega_part};
        for (std::size_t i = 0; i < parts.size(); ++i)
            for (std::size_t j = i + 1; j < parts.size(); ++j) EXPECT_NEAR(parts[i].dot(parts[j]), 0.0, 1e-12);
        EXPECT_NEAR(trace(d.s2_zero_plus), 0.0, 1e-12);
        EXPECT_NEAR(d.lambda2_zero_plus.dot(kahler_form(s)), 0.0, 1e-12);
        EXPECT_LE((d.s2_minus.j_pullback() + d.s2_minus).max_abs(), 1e-12);
        EXPECT_LE((d.lambda2_zero_plus.j_pullback() - d.lambda2_zero_plus).max_abs(), 1e-12);
    }
}

TEST(WProject, RandomTensorsCompleteAndOrthogonal) {
    SeededRng rng(2024);
    for (int mb : {2, 3}) {
        const SpaceConfig s(mb);
        for (int n = 0; n < 100; ++n) {
            const Tensor4 a = random_kahler_tensor(s, rng);
            const Tensor4 b = random_kahler_tensor(s, rng);
            const WDecomposition wa = w_project(a), wb = w_project(b);
            EXPECT_LE(wa.residual, 1e-9 * a.norm());
            EXPECT_LE((wa.sum() - a).max_abs(), 1e-9 * a.norm());
            double sq = 0.0;
            for (int i = 1; i <= kModuleCount; ++i) sq += wa.module(i).norm * wa.module(i).norm;
            EXPECT_NEAR(sq, a.norm() * a.norm(), 1e-9 * a.norm() * a.norm());
            for (int i = 1; i <= kModuleCount; ++i)
                for (int j = 1; j <= kModuleCount; ++j)
                    if (i != j) {
                        EXPECT_LE(std::abs(wa.module(i).component.dot(wb.module(j).component)),
                                  1e-9 * a.norm() * b.norm());
                    }
        }
    }
}

TEST(WProject, ParityConsistency) {
    SeededRng rng(77);
    for (int mb : {2, 3}) {
        for (int n = 0; n < 20; ++n) {
            const Tensor4 a = random_kahler_tensor(SpaceConfig(mb), rng);
            const auto [plus, minus] = j_parity_split(a);
            const WDecomposition w = w_project(a), wp = w_project(plus), wm = w_project(minus);
            EXPECT_NEAR(w.plus_norm, plus.norm(), 1e-9 * a.norm());
            EXPECT_NEAR(w.minus_norm, minus.norm(), 1e-9 * a.norm());
            for (int i : {2, 4, 12}) EXPECT_LE(wp.module(i).norm, 1e-9 * a.norm());
            for (int i : {1, 3, 5, 6, 7, 8, 9, 10, 11}) EXPECT_LE(wm.module(i).norm, 1e-9 * a.norm());
        }
    }
}

TEST(WProject, ZeroAndNonKahlerInput) {
    const WDecomposition w = w_project(Tensor4(SpaceConfig(2)));
    for (int i = 1; i <= kModuleCount; ++i) EXPECT_EQ(w.module(i).norm, 0.0);
    Tensor4 bad(SpaceConfig(2));
    bad(0, 1, 0, 1) = 1.0;
    EXPECT_THROW(w_project(bad), DomainError);
}

TEST(WProject, WitnessesLandInTheirModules) {
    const auto [a1, a2, a3, a4] = w9w10_tensors(2);
    const WDecomposition w9 = w_project(a1 - a2);
    EXPECT_GT(w9.module(9).norm, 1e-3);
    EXPECT_TRUE(is_only(w9, {9}, 1e-9));
    const WDecomposition w10 = w_project(a3 + a4);
    EXPECT_GT(w10.module(10).norm, 1e-3);
    EXPECT_TRUE(is_only(w10, {10}, 1e-9));

    const auto curvature = [](const std::string& id) {
        return curvature_at_origin(connection_from_theta(paper_example_theta(id, {}, 3)));
    };
    const WDecomposition w12 = w_project(curvature("4.2.w12"));
    EXPECT_GT(w12.module(12).norm, 1e-3);
    EXPECT_TRUE(is_only(w12, {12}, 1e-9));
    const WDecomposition w11 = w_project(curvature("4.2.w11"));
    EXPECT_GT(w11.module(11).norm, 1e-3);
    EXPECT_TRUE(is_only(w11, {9, 10, 11}, 1e-9));
}

TEST(WProject, FirstWitnessIsScalarType) {
    const Tensor4 a = curvature_at_origin(connection_from_theta(paper_example_theta("4.1.1", {1, 1}, 2)));
    const WDecomposition w = w_project(a);
    EXPECT_GT(w.module(5).norm, 1e-3);
    EXPECT_GT(w.module(6).norm, 1e-3);
    EXPECT_LE(w.minus_norm, 1e-12);
}

TEST(BilinearClass, HolomorphicWitnessTraceIsSymmetricOdd) {
    const Tensor4 a = curvature_at_origin(connection_from_theta(paper_example_theta("4.1.2", {1, 1}, 2)));
    EXPECT_EQ(detail::bilinear_class(rho14(a)), "S2-");
}

TEST(StructuralMaps, IsomorphismsAreBijections) {
    for (int mb : {2, 3})
        for (const MapCheck& c : isomorphism_checks(mb)) {
            EXPECT_TRUE(c.ok) << c.name << " m_bar=" << mb;
            EXPECT_EQ(c.source_dim, c.target_dim) << c.name;
            EXPECT_EQ(c.image_rank, c.target_dim) << c.name;
        }
}

TEST(StructuralMaps, TraceMapsAreOnto) {
    for (int mb : {2, 3})
        for (const MapCheck& c : trace_map_checks(mb)) EXPECT_TRUE(c.ok) << c.name << " m_bar=" << mb;
}

TEST(StructuralMaps, CheckMapDetectsLeaks) {
    const Subspace x = orthonormalize(std::vector<FlatVector>{FlatVector::Unit(2, 0)});
    const Subspace y = orthonormalize(std::vector<FlatVector>{FlatVector::Unit(2, 1)});
    const MapCheck id = check_map("id", x, y, [](const FlatVector& v) { return v; });
    EXPECT_FALSE(id.ok);
    EXPECT_NEAR(id.leak, 1.0, 1e-15);
    const MapCheck swap = check_map("swap", x, y, [](const FlatVector& v) { return FlatVector(v.reverse()); });
    EXPECT_TRUE(swap.ok);
}
