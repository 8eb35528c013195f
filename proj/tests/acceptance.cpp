// One PASS/FAIL line per acceptance criterion; exit status 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "kahler/checks.hpp"
#include "kahler/random.hpp"
#include "kahler/realization.hpp"
#include "kahler/witnesses.hpp"

using namespace kahler;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool ok = true;
    std::string detail;
};

double plus_part(const Tensor4& t) { return (0.5 * (t + j_conjugate(t))).norm(); }
double minus_part(const Tensor4& t) { return (0.5 * (t - j_conjugate(t))).norm(); }

Outcome ac1_dimensions() {
    Outcome o;
    for (int mb : {2, 3}) {
        const auto t0 = Clock::now();
        const DimensionTable computed = computed_dimension_table(mb);
        const double secs = seconds_since(t0);
        const DimensionTable closed = module_dimension_table(mb);
        int mismatches = 0;
        for (const std::string& label : dimension_labels())
            if (computed.at(label) != closed.at(label)) ++mismatches;
        const long expected_k = mb == 2 ? 32 : 156;
        o.ok = o.ok && mismatches == 0 && computed.at("K") == expected_k && secs < 10.0;
        char buf[128];
        std::snprintf(buf, sizeof buf, "m_bar=%d dim K=%ld mismatches=%d %.2fs; ", mb, computed.at("K"), mismatches, secs);
        o.detail += buf;
    }
    return o;
}

Outcome ac2_witness_tables() {
    Outcome o;
    long checks = 0, failed = 0;
    for (int mb : {2, 3})
        for (const WitnessReport& r : witness_suite(mb))
            for (const WitnessCheck& c : r.checks) {
                ++checks;
                if (!c.ok) ++failed;
            }
    for (const auto& [id, rho, mb] : std::vector<std::tuple<std::string, std::vector<double>, int>>{
             {"4.1.2", {1, -1}, 2}, {"4.1.3a", {1, 0, -1, 0}, 3}, {"4.2.w11", {}, 3}})
        for (const WitnessCheck& c : witness_checks(id, rho, mb).checks) {
            ++checks;
            if (!c.ok) ++failed;
        }
    o.ok = failed == 0 && checks > 0;
    o.detail = std::to_string(checks - failed) + "/" + std::to_string(checks) + " displayed values exact";
    return o;
}

Outcome ac3_realization() {
    Outcome o;
    const auto t0 = Clock::now();
    SeededRng rng(3003);
    double worst = 0.0, torsion = 0.0, nabla_j = 0.0;
    long runs = 0;
    for (int mb : {2, 3})
        for (int n = 0; n < 50; ++n) {
            const Tensor4 a = random_kahler_tensor(SpaceConfig(mb), rng);
            for (RealizationMode mode : {RealizationMode::joint, RealizationMode::split}) {
                const RealizationReport v = verify_realization(a, realize(a, mode).theta);
                worst = std::max(worst, v.curvature_match / a.norm());
                torsion = std::max(torsion, v.torsion);
                nabla_j = std::max(nabla_j, v.nabla_j);
                ++runs;
            }
        }
    const double secs = seconds_since(t0);
    o.ok = worst <= 1e-8 && torsion == 0.0 && nabla_j == 0.0 && secs < 60.0;
    char buf[192];
    std::snprintf(buf, sizeof buf, "%ld realizations, max relative residual %.2e, torsion %g, nabla J %g, %.2fs", runs,
                  worst, torsion, nabla_j, secs);
    o.detail = buf;
    return o;
}

Outcome ac4_parity_laws() {
    SeededRng rng(4004);
    double hol_worst = 0.0, anti_worst = 0.0;
    long points = 0, origins = 0;
    for (int mb : {2, 3})
        for (int n = 0; n < 100; ++n) {
            const AffineConnection hol = connection_from_theta(random_theta(mb, rng, 2, ThetaKind::holomorphic, false));
            for (int p = 0; p < 20; ++p) {
                const Tensor4 r = curvature_at(hol, random_point(SpaceConfig(mb), rng));
                hol_worst = std::max(hol_worst, plus_part(r) / std::max(1.0, r.norm()));
                ++points;
            }
            const Tensor4 r0 =
                curvature_at_origin(connection_from_theta(random_theta(mb, rng, 2, ThetaKind::antiholomorphic, true)));
            anti_worst = std::max(anti_worst, minus_part(r0) / std::max(1.0, r0.norm()));
            ++origins;
        }
    Outcome o;
    o.ok = hol_worst <= 1e-9 && anti_worst <= 1e-9;
    char buf[192];
    std::snprintf(buf, sizeof buf, "holomorphic: %ld points, max K+ share %.2e; antiholomorphic: %ld origins, max K- share %.2e",
                  points, hol_worst, origins, anti_worst);
    o.detail = buf;
    return o;
}

Outcome ac5_decomposition() {
    SeededRng rng(5005);
    double completeness = 0.0, orthogonality = 0.0, trace_laws = 0.0;
    for (int mb : {2, 3})
        for (int n = 0; n < 100; ++n) {
            const Tensor4 a = random_kahler_tensor(SpaceConfig(mb), rng);
            const Tensor4 b = random_kahler_tensor(SpaceConfig(mb), rng);
            const WDecomposition wa = w_project(a), wb = w_project(b);
            completeness = std::max(completeness, wa.residual / a.norm());
            for (int i = 1; i <= kModuleCount; ++i)
                for (int j = 1; j <= kModuleCount; ++j)
                    if (i != j)
                        orthogonality = std::max(orthogonality, std::abs(wa.module(i).component.dot(wb.module(j).component)) /
                                                                    (a.norm() * b.norm()));
            const Bilinear2 r13 = rho13(a);
            const auto [plus, minus] = j_parity_split(a);
            const Bilinear2 m14 = rho14(minus), p13 = rho13(plus), p14 = rho14(plus);
            trace_laws = std::max({trace_laws, (r13.j_pullback() - r13).max_abs() / a.norm(),
                                   rho13(minus).max_abs() / a.norm(), (m14.j_pullback() + m14).max_abs() / a.norm(),
                                   (p13.j_pullback() - p13).max_abs() / a.norm(),
                                   (p14.j_pullback() - p14).max_abs() / a.norm()});
        }
    Outcome o;
    o.ok = completeness <= 1e-9 && orthogonality <= 1e-9 && trace_laws <= 1e-9;
    char buf[192];
    std::snprintf(buf, sizeof buf, "200 tensors: completeness %.2e, orthogonality %.2e, trace identities %.2e", completeness,
                  orthogonality, trace_laws);
    o.detail = buf;
    return o;
}

Outcome ac6_surjectivity() {
    Outcome o;
    for (int mb : {2, 3}) {
        const SurjectivityReport r = surjectivity_check(mb);
        o.ok = o.ok && r.ok;
        char buf[192];
        std::snprintf(buf, sizeof buf, "m_bar=%d rank %ld/%ld, holomorphic %ld/%ld, antiholomorphic %ld/%ld; ", mb, r.rank,
                      r.dim_K, r.holomorphic_rank, r.dim_K_minus, r.antiholomorphic_rank, r.dim_K_plus);
        o.detail += buf;
    }
    return o;
}

Outcome ac7_membership() {
    const auto [a1, a2, a3, a4] = w9w10_tensors(3);
    auto curvature = [](const std::string& id) {
        return curvature_at_origin(connection_from_theta(paper_example_theta(id, {}, 3)));
    };
    struct Item {
        const char* name;
        Tensor4 t;
        std::vector<int> allowed;
        int target;
    };
    const std::vector<Item> items{{"W9", a1 - a2, {9}, 9},
                                  {"W10", a3 + a4, {10}, 10},
                                  {"W12", curvature("4.2.w12"), {12}, 12},
                                  {"W11", curvature("4.2.w11"), {9, 10, 11}, 11}};
    Outcome o;
    for (const Item& it : items) {
        const WDecomposition w = w_project(it.t);
        double off = 0.0;
        for (int i = 1; i <= kModuleCount; ++i)
            if (std::find(it.allowed.begin(), it.allowed.end(), i) == it.allowed.end()) off = std::max(off, w.module(i).norm);
        const double on = w.module(it.target).norm;
        o.ok = o.ok && on > 1e-9 && off <= 1e-9;
        char buf[128];
        std::snprintf(buf, sizeof buf, "%s: %.3f, off-module %.1e; ", it.name, on, off);
        o.detail += buf;
    }
    return o;
}

Outcome ac8_isomorphisms() {
    Outcome o;
    for (int mb : {2, 3})
        for (const MapCheck& c : isomorphism_checks(mb)) {
            o.ok = o.ok && c.ok;
            o.detail += c.name + " m_bar=" + std::to_string(mb) + " rank " + std::to_string(c.image_rank) + "/" +
                        std::to_string(c.target_dim) + (c.ok ? "; " : " (failed); ");
        }
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"AC1 dimension table", ac1_dimensions},
        {"AC2 witness tables", ac2_witness_tables},
        {"AC3 realization round trip", ac3_realization},
        {"AC4 parity laws", ac4_parity_laws},
        {"AC5 decomposition soundness", ac5_decomposition},
        {"AC6 curvature map surjectivity", ac6_surjectivity},
        {"AC7 module membership witnesses", ac7_membership},
        {"AC8 isomorphism spot checks", ac8_isomorphisms},
    };
    bool all = true;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        all = all && o.ok;
        std::printf("%s %s: %s\n", o.ok ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
