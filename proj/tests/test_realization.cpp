#include <gtest/gtest.h>

#include "kahler/checks.hpp"
#include "kahler/random.hpp"
#include "kahler/realization.hpp"
#include "kahler/witnesses.hpp"

using namespace kahler;

namespace {

bool is_holomorphic_or_zero(const ThetaField& t) {
    const Holomorphy k = holomorphy_type(t).kind;
    return k == Holomorphy::holomorphic || k == Holomorphy::both;
}

bool is_antiholomorphic_or_zero(const ThetaField& t) {
    const Holomorphy k = holomorphy_type(t).kind;
    return k == Holomorphy::antiholomorphic || k == Holomorphy::both;
}

} // namespace

TEST(CoefficientMap, ColumnLayout) {
    const CurvatureCoefficientMap& map = curvature_coefficient_map(SpaceConfig(2));
    // 3 symmetric pairs (i <= j) times 2 values of k, 4*m_bar columns each
    EXPECT_EQ(map.matrix.cols(), 3 * 2 * 8);
    EXPECT_EQ(map.matrix.rows(), 256);
    EXPECT_EQ(map.holomorphic_columns.size(), map.antiholomorphic_columns.size());
    const CoefficientColumn& first = map.columns.front();
    EXPECT_EQ(first.key, (ThetaKey{0, 0, 0}));
    EXPECT_EQ(first.kind, ColumnKind::holomorphic);
    EXPECT_FALSE(first.imaginary);
    EXPECT_TRUE(map.columns[1].imaginary);
    EXPECT_EQ(map.columns[4].kind, ColumnKind::antiholomorphic);
}

TEST(CoefficientMap, RanksMatchParityProjectorOracle) {
    for (int mb : {2, 3}) {
        const SurjectivityReport r = surjectivity_check(mb);
        EXPECT_TRUE(r.ok) << mb;
        EXPECT_EQ(r.rank, r.dim_K);
        EXPECT_EQ(r.holomorphic_rank, r.dim_K_minus);
        EXPECT_EQ(r.antiholomorphic_rank, r.dim_K_plus);
        EXPECT_LE(r.holomorphic_leak, 1e-9);
        EXPECT_LE(r.antiholomorphic_leak, 1e-9);
    }
    EXPECT_EQ(surjectivity_check(2).dim_K, 32);
    EXPECT_EQ(surjectivity_check(3).dim_K, 156);
}

TEST(CoefficientMap, ColumnsLieInK) {
    const SpaceConfig s(2);
    const CurvatureCoefficientMap& map = curvature_coefficient_map(s);
    const Subspace& K = kahler_modules(s).K;
    for (Eigen::Index c = 0; c < map.matrix.cols(); ++c) {
        const FlatVector v = map.matrix.col(c);
        EXPECT_LE((v - K.project(v)).norm(), 1e-12);
    }
}

TEST(ThetaFromCoefficients, RebuildsColumns) {
    const CurvatureCoefficientMap& map = curvature_coefficient_map(SpaceConfig(2));
    FlatVector c = FlatVector::Zero(map.matrix.cols());
    c(5) = 2.0;
    const ThetaField t = theta_from_coefficients(map, c);
    EXPECT_EQ(t.entries().size(), 1u);
    EXPECT_LE((flatten(linear_curvature_at_zero(t)) - 2.0 * map.matrix.col(5)).norm(), 1e-14);
    EXPECT_THROW(theta_from_coefficients(map, FlatVector::Zero(3)), InvalidArgument);
}

TEST(Realize, ZeroInput) {
    for (RealizationMode mode : {RealizationMode::joint, RealizationMode::split}) {
        const RealizationResult r = realize(Tensor4(SpaceConfig(2)), mode);
        EXPECT_TRUE(r.theta.entries().empty());
        EXPECT_EQ(r.residual, 0.0);
        EXPECT_TRUE(r.verified);
    }
}

TEST(Realize, RejectsTensorOutsideK) {
    Tensor4 t(SpaceConfig(2));
    t(0, 1, 0, 1) = 1.0;
    EXPECT_THROW(realize(t), DomainError);
    EXPECT_THROW(realize(Tensor4(SpaceConfig(1))), InvalidArgument);
}

TEST(Realize, RoundTripFromKnownTheta) {
    SeededRng rng(42);
    for (int mb : {2, 3})
        for (int n = 0; n < 5; ++n) {
            const ThetaField theta0 = random_theta(mb, rng, 1, ThetaKind::generic, true);
            const Tensor4 a = curvature_at_origin(connection_from_theta(theta0));
            for (RealizationMode mode : {RealizationMode::joint, RealizationMode::split}) {
                const RealizationResult r = realize(a, mode);
                EXPECT_LE(r.residual, 1e-10 * a.norm());
                EXPECT_TRUE(r.verified);
            }
        }
}

TEST(Realize, RandomTensorsBothModes) {
    SeededRng rng(3);
    for (int mb : {2, 3})
        for (int n = 0; n < 50; ++n) {
            const Tensor4 a = random_kahler_tensor(SpaceConfig(mb), rng);
            for (RealizationMode mode : {RealizationMode::joint, RealizationMode::split}) {
                const RealizationResult r = realize(a, mode);
                const RealizationReport v = verify_realization(a, r.theta);
                ASSERT_LE(v.curvature_match, 1e-8 * a.norm());
                ASSERT_EQ(v.torsion, 0.0);
                ASSERT_EQ(v.nabla_j, 0.0);
                ASSERT_LE(r.theta.degree(), 1);
                ASSERT_TRUE(r.theta.vanishes_at_origin());
                if (mode == RealizationMode::split) {
                    ASSERT_TRUE(is_holomorphic_or_zero(r.theta_holomorphic));
                    ASSERT_TRUE(is_antiholomorphic_or_zero(r.theta_antiholomorphic));
                    ASSERT_EQ(r.theta, r.theta_holomorphic + r.theta_antiholomorphic);
                }
            }
        }
}

TEST(Realize, SplitModeSeparatesParity) {
    SeededRng rng(5);
    const Tensor4 a = random_kahler_tensor(SpaceConfig(2), rng);
    const auto [plus, minus] = j_parity_split(a);
    const RealizationResult r = realize(a, RealizationMode::split);
    EXPECT_LE((curvature_at_origin(connection_from_theta(r.theta_holomorphic)) - minus).norm(), 1e-9);
    EXPECT_LE((curvature_at_origin(connection_from_theta(r.theta_antiholomorphic)) - plus).norm(), 1e-9);
}

TEST(Realize, W12WitnessSplitIsHolomorphicAndOddOffOrigin) {
    const Tensor4 a = curvature_at_origin(connection_from_theta(paper_example_theta("4.2.w12", {}, 3)));
    const RealizationResult r = realize(a, RealizationMode::split);
    EXPECT_EQ(holomorphy_type(r.theta).kind, Holomorphy::holomorphic);
    EXPECT_TRUE(r.theta_antiholomorphic.entries().empty());
    ASSERT_EQ(r.off_origin.size(), 5u);
    SeededRng rng(6);
    const AffineConnection conn = connection_from_theta(r.theta);
    for (int p = 0; p < 5; ++p) {
        const Tensor4 t = curvature_at(conn, random_point(SpaceConfig(3), rng));
        EXPECT_LE((t + j_conjugate(t)).norm(), 1e-9 * std::max(1.0, t.norm()));
    }
    for (const ParitySample& s : r.off_origin) EXPECT_LE(s.plus_norm, 1e-9 * std::max(1.0, s.minus_norm));
}

TEST(Realize, Deterministic) {
    SeededRng rng(9);
    const Tensor4 a = random_kahler_tensor(SpaceConfig(2), rng);
    EXPECT_EQ(realize(a).theta, realize(a).theta);
}

TEST(Realize, ModeParsing) {
    EXPECT_EQ(parse_realization_mode("joint"), RealizationMode::joint);
    EXPECT_EQ(parse_realization_mode("split"), RealizationMode::split);
    EXPECT_THROW(parse_realization_mode("both"), InvalidArgument);
}

TEST(VerifyRealization, Examples) {
    const SpaceConfig s(2);
    const RealizationReport zero = verify_realization(Tensor4(s), ThetaField(2));
    EXPECT_EQ(zero.curvature_match, 0.0);
    EXPECT_EQ(zero.torsion, 0.0);
    EXPECT_EQ(zero.nabla_j, 0.0);
    EXPECT_EQ(zero.input_k_violation, 0.0);

    SeededRng rng(11);
    const Tensor4 a = random_kahler_tensor(s, rng);
    EXPECT_NEAR(verify_realization(a, ThetaField(2)).curvature_match, a.norm(), 1e-12);
    const RealizationReport good = verify_realization(a, realize(a).theta);
    EXPECT_LE(good.curvature_match, 1e-8);
    EXPECT_TRUE(good.verified(a.norm()));

    Tensor4 bad(s);
    bad(0, 0, 0, 0) = 1.0;
    EXPECT_GT(verify_realization(bad, ThetaField(2)).input_k_violation, 0.0);
    EXPECT_THROW(verify_realization(Tensor4(SpaceConfig(3)), ThetaField(2)), InvalidArgument);
}

TEST(WitnessSuite, AllItemsPassAtBothDimensions) {
    for (int mb : {2, 3}) {
        const std::vector<WitnessReport> suite = witness_suite(mb);
        EXPECT_EQ(suite.size(), 11u);
        for (const WitnessReport& r : suite) {
            if (mb == 2 && (r.case_id == "4.2.w12" || r.case_id == "4.2.w11")) {
                EXPECT_FALSE(r.notice.empty());
                continue;
            }
            EXPECT_TRUE(r.notice.empty());
            EXPECT_FALSE(r.checks.empty()) << r.case_id;
            for (const WitnessCheck& c : r.checks) EXPECT_TRUE(c.ok) << r.case_id << " " << c.label << " expected "
                                                                      << c.expected << " got " << c.computed;
        }
    }
}

TEST(WitnessChecks, DisplayedValues) {
    auto find = [](const WitnessReport& r, const std::string& label) {
        for (const WitnessCheck& c : r.checks)
            if (c.label == label) return c;
        ADD_FAILURE() << "missing check " << label;
        return WitnessCheck{};
    };
    const WitnessReport a = witness_checks("4.1.1", {1, 1}, 2);
    EXPECT_EQ(find(a, "tau").expected, "-4");
    EXPECT_EQ(find(a, "tau").computed, "-4");
    const WitnessReport w11 = witness_checks("4.2.w11", {}, 3);
    EXPECT_EQ(find(w11, "bianchi_combination").computed, "0.5");
    EXPECT_TRUE(w11.ok());
}

TEST(WitnessChecks, W9PartValues) {
    const auto [a1, a2, a3, a4] = w9w10_tensors(2);
    const SpaceConfig s(2);
    EXPECT_EQ(a1(s.e(0), s.f(0), s.e(0), s.f(1)), -1.0);
    EXPECT_EQ(a1(s.f(0), s.e(0), s.f(0), s.e(1)), -1.0);
    EXPECT_EQ(rho14(a1)(s.e(0), s.e(1)), 1.0);
}

TEST(WitnessChecks, W11BianchiCombination) {
    const Tensor4 a = curvature_at_origin(connection_from_theta(paper_example_theta("4.2.w11", {}, 3)));
    EXPECT_EQ(detail::w11_bianchi_combination(a), 0.5);
}

TEST(WitnessChecks, Errors) {
    EXPECT_THROW(witness_checks("nope", {}, 2), InvalidArgument);
    EXPECT_THROW(witness_checks("4.1.2", {1}, 2), InvalidArgument);
    EXPECT_THROW(witness_checks("4.2.w11", {}, 2), InvalidArgument);
    EXPECT_THROW(witness_suite(1), InvalidArgument);
}
