#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "kahler/checks.hpp"
#include "kahler/connection.hpp"
#include "kahler/decomposition.hpp"
#include "kahler/io.hpp"
#include "kahler/random.hpp"
#include "kahler/realization.hpp"
#include "kahler/symmetry.hpp"
#include "kahler/witnesses.hpp"

namespace kahler {

struct SelftestLine {
    std::string name;
    long passed = 0;
    long total = 0;
    double worst = 0.0;  // largest residual seen
    bool report_only = false;

    bool ok() const { return report_only || passed == total; }
};

struct SelftestReport {
    int m_bar = 0;
    int trials = 0;
    std::uint64_t seed = 0;
    std::vector<SelftestLine> lines;

    bool ok() const {
        for (const auto& l : lines)
            if (!l.ok()) return false;
        return true;
    }

    std::string table() const {
        std::string out = "selftest m_bar=" + std::to_string(m_bar) + " trials=" + std::to_string(trials) +
                          " seed=" + std::to_string(seed) + "\n";
        char buf[160];
        for (const auto& l : lines) {
            std::snprintf(buf, sizeof buf, "%-44s %5ld/%-5ld max=%.3e %s\n", l.name.c_str(), l.passed, l.total,
                          l.worst, l.report_only ? "REPORT" : (l.ok() ? "OK" : "FAIL"));
            out += buf;
        }
        out += ok() ? "ALL OK\n" : "FAILURES\n";
        return out;
    }
};

namespace detail {

class SelftestRecorder {
public:
    explicit SelftestRecorder(std::vector<SelftestLine>& lines) : lines_(lines) {}

    /// Records one trial: passes iff residual <= bound.
    void record(const std::string& name, double residual, double bound) {
        SelftestLine& l = line(name);
        ++l.total;
        if (residual <= bound) ++l.passed;
        l.worst = std::max(l.worst, residual);
    }

    void flag(const std::string& name, bool ok) { record(name, ok ? 0.0 : 1.0, 0.0); }

    void observe(const std::string& name, double value) {
        SelftestLine& l = line(name);
        l.report_only = true;
        ++l.total;
        ++l.passed;
        l.worst = std::max(l.worst, value);
    }

private:
    SelftestLine& line(const std::string& name) {
        for (auto& l : lines_)
            if (l.name == name) return l;
        lines_.push_back({name, 0, 0, 0.0, false});
        return lines_.back();
    }

    std::vector<SelftestLine>& lines_;
};

inline double parity_plus_norm(const Tensor4& t) { return (0.5 * (t + j_conjugate(t))).norm(); }
inline double parity_minus_norm(const Tensor4& t) { return (0.5 * (t - j_conjugate(t))).norm(); }

} // namespace detail

inline constexpr int kSelftestPoints = 20;

/// Runs every invariant of the library on seeded random input. The report
/// is a pure function of (m_bar, trials, seed).
inline SelftestReport run_selftest(int m_bar, int trials, std::uint64_t seed) {
    const SpaceConfig cfg(m_bar);
    cfg.require_decomposable();
    if (trials < 1) throw InvalidArgument("selftest: trials must be >= 1");
    SelftestReport rep{m_bar, trials, seed, {}};
    detail::SelftestRecorder rec(rep.lines);
    SeededRng rng(seed);
    const double tol = kDefaultTolerance;

    const DimensionTable closed = module_dimension_table(m_bar), computed = computed_dimension_table(m_bar);
    for (const std::string& label : dimension_labels()) rec.flag("dims:" + label, closed.at(label) == computed.at(label));
    rec.flag("surjectivity", surjectivity_check(m_bar).ok);
    for (const MapCheck& c : isomorphism_checks(m_bar)) {
        rec.record("iso:" + c.name, c.leak, kStructuralTolerance);
        rec.flag("iso:" + c.name + ":rank", c.ok);
    }
    for (const MapCheck& c : trace_map_checks(m_bar)) {
        rec.record("trace_map:" + c.name, c.leak, kStructuralTolerance);
        rec.flag("trace_map:" + c.name + ":rank", c.ok);
    }
    for (const WitnessReport& w : witness_suite(m_bar))
        if (w.notice.empty()) rec.flag("witness:" + w.case_id, w.ok());

    for (int t = 0; t < trials; ++t) {
        const Tensor4 a = random_kahler_tensor(cfg, rng);
        const Tensor4 b = random_kahler_tensor(cfg, rng);
        const double na = a.norm();

        rec.record("in_K:random", classify_symmetries(a, tol).in_K ? 0.0 : 1.0, 0.0);
        const Bilinear2 r13 = rho13(a);
        rec.record("lemma:rho13_J_invariant", (r13.j_pullback() - r13).max_abs(), tol * na);
        const auto [plus, minus] = j_parity_split(a);
        rec.record("lemma:minus_rho13_zero", rho13(minus).max_abs(), tol * na);
        const Bilinear2 m14 = rho14(minus);
        rec.record("lemma:minus_rho14_J_odd", (m14.j_pullback() + m14).max_abs(), tol * na);
        const Bilinear2 p13 = rho13(plus), p14 = rho14(plus);
        rec.record("lemma:plus_traces_J_even",
                   std::max((p13.j_pullback() - p13).max_abs(), (p14.j_pullback() - p14).max_abs()), tol * na);
        rec.record("parity:pythagoras", std::abs(na * na - plus.norm() * plus.norm() - minus.norm() * minus.norm()),
                   tol * na * na);
        const auto [pp, pm] = j_parity_split(plus);
        rec.record("parity:idempotent", std::max((pp - plus).max_abs(), pm.max_abs()), tol * na);

        const WDecomposition wa = w_project(a), wb = w_project(b);
        rec.record("w:completeness", wa.residual, tol * na);
        double cross = 0.0;
        for (int i = 1; i <= kModuleCount; ++i)
            for (int j = 1; j <= kModuleCount; ++j)
                if (i != j) cross = std::max(cross, std::abs(wa.module(i).component.dot(wb.module(j).component)));
        rec.record("w:orthogonality", cross / (na * b.norm()), tol);
        const WDecomposition wm = w_project(minus), wp = w_project(plus);
        double parity_gap = 0.0;
        for (int i = 1; i <= kModuleCount; ++i) {
            const bool odd = i == 2 || i == 4 || i == 12;
            parity_gap = std::max(parity_gap, (wa.module(i).component - (odd ? wm : wp).module(i).component).max_abs());
        }
        rec.record("w:parity_consistency", parity_gap, tol * na);

        const ThetaField generic = random_theta(m_bar, rng, 2, ThetaKind::generic, false);
        const AffineConnection gconn = connection_from_theta(generic);
        rec.record("connection:torsion", torsion_residual(gconn), 0.0);
        rec.record("connection:nabla_J", nabla_J_residual(gconn), 0.0);
        const Tensor4 rg = curvature_at(gconn, random_point(cfg, rng));
        rec.record("connection:curvature_in_K", classify_symmetries(rg, scaled_tolerance(rg, tol)).in_K ? 0.0 : 1.0, 0.0);

        const ThetaField hol = random_theta(m_bar, rng, 2, ThetaKind::holomorphic, false);
        rec.flag("holomorphy:holomorphic", holomorphy_type(hol).kind == Holomorphy::holomorphic);
        const AffineConnection hconn = connection_from_theta(hol);
        for (int p = 0; p < kSelftestPoints; ++p) {
            const Tensor4 r = curvature_at(hconn, random_point(cfg, rng));
            rec.record("parity:holomorphic_in_K-", detail::parity_plus_norm(r), tol * std::max(1.0, r.norm()));
        }

        const ThetaField anti = random_theta(m_bar, rng, 2, ThetaKind::antiholomorphic, true);
        rec.flag("holomorphy:antiholomorphic", holomorphy_type(anti).kind == Holomorphy::antiholomorphic);
        const AffineConnection aconn = connection_from_theta(anti);
        const Tensor4 r0 = curvature_at_origin(aconn);
        rec.record("parity:antiholomorphic_origin_in_K+", detail::parity_minus_norm(r0), tol * std::max(1.0, r0.norm()));
        const Tensor4 rp = curvature_at(aconn, random_point(cfg, rng));
        rec.observe("report:antiholomorphic_off_origin_K-_share", detail::parity_minus_norm(rp) / std::max(1e-300, rp.norm()));

        const ThetaField lin = random_theta(m_bar, rng, 1, ThetaKind::generic, true);
        rec.record("linear_vs_christoffel", (linear_curvature_at_zero(lin) - curvature_at_origin(connection_from_theta(lin))).max_abs(), 0.0);

        for (RealizationMode mode : {RealizationMode::joint, RealizationMode::split}) {
            const RealizationResult res = realize(a, mode);
            const std::string name = std::string("realize:") + to_string(mode);
            rec.record(name, res.residual / std::max(1.0, na), kRealizationTolerance);
            rec.record(name + ":torsion_nabla_J", std::max(res.report.torsion, res.report.nabla_j), 0.0);
            rec.flag(name + ":degree1_vanishing", res.theta.degree() <= 1 && res.theta.vanishes_at_origin());
            if (mode == RealizationMode::split) {
                const HolomorphyType h = holomorphy_type(res.theta_holomorphic);
                const HolomorphyType ah = holomorphy_type(res.theta_antiholomorphic);
                rec.flag("realize:split:purity",
                         (h.kind == Holomorphy::holomorphic || h.kind == Holomorphy::both) &&
                             (ah.kind == Holomorphy::antiholomorphic || ah.kind == Holomorphy::both));
            }
        }

        rec.flag("io:tensor_roundtrip", tensor_from_json(Json::parse(tensor_to_json(a).dump())) == a);
        rec.flag("io:theta_roundtrip", theta_from_json(Json::parse(theta_to_json(generic).dump())) == generic);
    }
    return rep;
}

inline Json to_json(const SelftestReport& r) {
    Json lines = Json::array();
    for (const auto& l : r.lines) {
        lines.push_back(Json{{"name", l.name},
                             {"passed", l.passed},
                             {"total", l.total},
                             {"max_residual", l.worst},
                             {"report_only", l.report_only}});
    }
    return Json{{"m_bar", r.m_bar}, {"trials", r.trials}, {"seed", r.seed}, {"ok", r.ok()}, {"lines", lines}};
}

} // namespace kahler
