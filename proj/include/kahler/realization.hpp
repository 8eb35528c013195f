#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include "kahler/cache.hpp"
#include "kahler/connection.hpp"
#include "kahler/decomposition.hpp"
#include "kahler/linalg.hpp"
#include "kahler/symmetry.hpp"

namespace kahler {

inline constexpr double kRealizationTolerance = 1e-8;

enum class ColumnKind { holomorphic, antiholomorphic };

/// One real unknown: Theta_key += c * z_a (holomorphic) or c * conj(z_a)
/// (antiholomorphic) with c = 1 or c = i.
struct CoefficientColumn {
    ThetaKey key;
    ColumnKind kind = ColumnKind::holomorphic;
    int var = 0;
    bool imaginary = false;
};

/// Linear map from degree-1, origin-vanishing Theta coefficients to R(0).
///
/// Column order: keys (i <= j, k) lexicographic; within a key, the
/// holomorphic block before the antiholomorphic block; within a block,
/// complex coordinate a = 0..m_bar-1, and for each a the real then the
/// imaginary coefficient. Each key contributes 4*m_bar columns.
struct CurvatureCoefficientMap {
    SpaceConfig config;
    LinearMapMatrix matrix;
    std::vector<CoefficientColumn> columns;
    std::vector<Eigen::Index> holomorphic_columns;
    std::vector<Eigen::Index> antiholomorphic_columns;

    LinearMapMatrix submatrix(const std::vector<Eigen::Index>& cols) const {
        LinearMapMatrix out(matrix.rows(), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t k = 0; k < cols.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = matrix.col(cols[k]);
        return out;
    }
    LinearMapMatrix holomorphic_matrix() const { return submatrix(holomorphic_columns); }
    LinearMapMatrix antiholomorphic_matrix() const { return submatrix(antiholomorphic_columns); }
};

inline ThetaEntry column_entry(int m_bar, const CoefficientColumn& col, double coeff) {
    const std::complex<double> c = col.imaginary ? std::complex<double>(0.0, coeff) : std::complex<double>(coeff, 0.0);
    return col.kind == ColumnKind::holomorphic ? ThetaEntry::z(m_bar, col.var, c) : ThetaEntry::zbar(m_bar, col.var, c);
}

namespace detail {

inline CurvatureCoefficientMap build_coefficient_map(SpaceConfig cfg) {
    const int mb = cfg.m_bar();
    CurvatureCoefficientMap out{cfg, {}, {}, {}, {}};
    for (int i = 0; i < mb; ++i)
        for (int j = i; j < mb; ++j)
            for (int k = 0; k < mb; ++k)
                for (ColumnKind kind : {ColumnKind::holomorphic, ColumnKind::antiholomorphic})
                    for (int a = 0; a < mb; ++a)
                        for (bool im : {false, true}) out.columns.push_back({ThetaKey{i, j, k}, kind, a, im});

    const auto n = static_cast<Eigen::Index>(Tensor4::size_for(cfg));
    out.matrix.resize(n, static_cast<Eigen::Index>(out.columns.size()));
    for (std::size_t c = 0; c < out.columns.size(); ++c) {
        const CoefficientColumn& col = out.columns[c];
        ThetaField theta(mb);
        theta.set(col.key.i, col.key.j, col.key.k, column_entry(mb, col, 1.0));
        out.matrix.col(static_cast<Eigen::Index>(c)) = flatten(linear_curvature_at_zero(theta));
        (col.kind == ColumnKind::holomorphic ? out.holomorphic_columns : out.antiholomorphic_columns)
            .push_back(static_cast<Eigen::Index>(c));
    }
    return out;
}

struct RealizationEngine {
    CurvatureCoefficientMap map;
    LeastSquaresSolver joint;
    LeastSquaresSolver holomorphic;
    LeastSquaresSolver antiholomorphic;
};

inline const RealizationEngine& realization_engine(SpaceConfig cfg) {
    cfg.require_decomposable();
    static OnceCache<int, RealizationEngine> cache;
    return cache.get(cfg.m_bar(), [&] {
        CurvatureCoefficientMap map = build_coefficient_map(cfg);
        LeastSquaresSolver joint(map.matrix);
        LeastSquaresSolver hol(map.holomorphic_matrix());
        LeastSquaresSolver anti(map.antiholomorphic_matrix());
        return RealizationEngine{std::move(map), std::move(joint), std::move(hol), std::move(anti)};
    });
}

} // namespace detail

/// Cached per m_bar.
inline const CurvatureCoefficientMap& curvature_coefficient_map(SpaceConfig cfg) {
    return detail::realization_engine(cfg).map;
}

/// Theta = sum_c coeffs[c] * (column c), restricted to `cols` when given
/// (coeffs then indexes into `cols`).
inline ThetaField theta_from_coefficients(const CurvatureCoefficientMap& map, const FlatVector& coeffs,
                                          const std::vector<Eigen::Index>* cols = nullptr) {
    const int mb = map.config.m_bar();
    const Eigen::Index count = cols ? static_cast<Eigen::Index>(cols->size()) : static_cast<Eigen::Index>(map.columns.size());
    if (coeffs.size() != count) throw InvalidArgument("theta_from_coefficients: coefficient count mismatch");
    ThetaField theta(mb);
    for (Eigen::Index k = 0; k < count; ++k) {
        if (coeffs(k) == 0.0) continue;
        const CoefficientColumn& col = map.columns[static_cast<std::size_t>(cols ? (*cols)[static_cast<std::size_t>(k)] : k)];
        theta.add(col.key.i, col.key.j, col.key.k, column_entry(mb, col, coeffs(k)));
    }
    return theta;
}

enum class RealizationMode { joint, split };

inline const char* to_string(RealizationMode m) { return m == RealizationMode::joint ? "joint" : "split"; }

inline RealizationMode parse_realization_mode(const std::string& s) {
    if (s == "joint") return RealizationMode::joint;
    if (s == "split") return RealizationMode::split;
    throw InvalidArgument("unknown realization mode '" + s + "' (expected joint or split)");
}

struct RealizationReport {
    double input_k_violation = 0.0;
    double curvature_match = 0.0;
    double torsion = 0.0;
    double nabla_j = 0.0;
    int degree = 0;
    bool vanishes_at_origin = true;

    /// Residuals are compared against tol * max(1, |A|).
    bool verified(double scale, double tol = kRealizationTolerance) const {
        const double bound = tol * std::max(1.0, scale);
        return input_k_violation <= bound && curvature_match <= bound && torsion <= bound && nabla_j <= bound;
    }
};

/// Recomputes everything from (A, theta); never throws on a mismatch.
inline RealizationReport verify_realization(const Tensor4& a, const ThetaField& theta) {
    if (!(a.config() == theta.config())) throw InvalidArgument("verify_realization: m_bar mismatch");
    RealizationReport r;
    const SymmetryReport sym = classify_symmetries(a);
    r.input_k_violation = std::max({sym.antisym12.max_violation, sym.bianchi1.max_violation,
                                    sym.kahler_last2_1h.max_violation});
    const AffineConnection conn = connection_from_theta(theta);
    r.torsion = torsion_residual(conn);
    r.nabla_j = nabla_J_residual(conn);
    r.curvature_match = (curvature_at_origin(conn) - a).norm();
    r.degree = theta.degree();
    r.vanishes_at_origin = theta.vanishes_at_origin();
    return r;
}

struct ParitySample {
    std::vector<double> point;
    double plus_norm = 0.0;
    double minus_norm = 0.0;
};

struct RealizationResult {
    ThetaField theta;
    ThetaField theta_holomorphic;
    ThetaField theta_antiholomorphic;
    double residual = 0.0;
    bool verified = false;
    RealizationMode mode = RealizationMode::joint;
    RealizationReport report;
    std::vector<ParitySample> off_origin;
};

/// Parity split norms of R at `count` points drawn uniformly from [-1, 1]^m.
inline std::vector<ParitySample> sample_parity(const ThetaField& theta, int count, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const AffineConnection conn = connection_from_theta(theta);
    std::vector<ParitySample> out;
    for (int n = 0; n < count; ++n) {
        ParitySample s;
        s.point.resize(static_cast<std::size_t>(theta.config().m()));
        for (double& x : s.point) x = dist(gen);
        const Tensor4 r = curvature_at(conn, s.point);
        const Tensor4 plus = 0.5 * (r + j_conjugate(r));
        s.plus_norm = plus.norm();
        s.minus_norm = (r - plus).norm();
        out.push_back(std::move(s));
    }
    return out;
}

inline constexpr int kOffOriginSamples = 5;
inline constexpr std::uint64_t kOffOriginSeed = 0x5eed;

/// Finds a degree-1 Theta with Theta(0) = 0 whose connection has curvature
/// A at the origin.
inline RealizationResult realize(const Tensor4& a, RealizationMode mode = RealizationMode::joint,
                                 double tol = kRealizationTolerance) {
    require_in_K(a, kDefaultTolerance, "realize");
    const detail::RealizationEngine& eng = detail::realization_engine(a.config());
    const int mb = a.config().m_bar();
    RealizationResult out{ThetaField(mb), ThetaField(mb), ThetaField(mb), 0.0, false, mode, {}, {}};

    if (mode == RealizationMode::joint) {
        const LeastSquaresSolution sol = eng.joint.solve(flatten(a));
        out.theta = theta_from_coefficients(eng.map, sol.coeffs);
    } else {
        const auto [plus, minus] = j_parity_split(a);
        const LeastSquaresSolution sm = eng.holomorphic.solve(flatten(minus));
        const LeastSquaresSolution sp = eng.antiholomorphic.solve(flatten(plus));
        out.theta_holomorphic = theta_from_coefficients(eng.map, sm.coeffs, &eng.map.holomorphic_columns);
        out.theta_antiholomorphic = theta_from_coefficients(eng.map, sp.coeffs, &eng.map.antiholomorphic_columns);
        out.theta = out.theta_holomorphic + out.theta_antiholomorphic;
    }

    out.report = verify_realization(a, out.theta);
    out.residual = out.report.curvature_match;
    const double scale = a.norm();
    if (out.residual > tol * std::max(1.0, scale)) {
        throw InternalError("realize: curvature residual " + std::to_string(out.residual) + " exceeds " +
                            std::to_string(tol * std::max(1.0, scale)));
    }
    out.verified = out.report.verified(scale, tol);

    out.off_origin = sample_parity(out.theta, kOffOriginSamples, kOffOriginSeed);
    if (!out.theta.entries().empty() && holomorphy_type(out.theta).kind == Holomorphy::holomorphic) {
        for (const ParitySample& s : out.off_origin) {
            if (s.plus_norm > kDefaultTolerance * std::max(1.0, s.minus_norm)) {
                throw InternalError("realize: holomorphic realization leaves K- off the origin");
            }
        }
    }
    return out;
}

} // namespace kahler
