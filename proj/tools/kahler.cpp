#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kahler/checks.hpp"
#include "kahler/connection.hpp"
#include "kahler/decomposition.hpp"
#include "kahler/format.hpp"
#include "kahler/io.hpp"
#include "kahler/realization.hpp"
#include "kahler/selftest.hpp"
#include "kahler/symmetry.hpp"
#include "kahler/witnesses.hpp"

namespace {

using namespace kahler;

enum Exit { kOk = 0, kDomain = 1, kUsage = 2, kInternal = 3 };

std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> out;
    if (text.empty()) return out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size() || !std::isfinite(v)) {
            throw InvalidArgument(std::string(what) + ": '" + item + "' is not a finite number");
        }
        out.push_back(v);
    }
    return out;
}

void maybe_write(const std::string& path, const Json& j) {
    if (!path.empty()) write_json_file(path, j);
}

int cmd_dims(int m_bar, const std::string& report) {
    SpaceConfig(m_bar).require_decomposable();
    const DimensionTable closed = module_dimension_table(m_bar);
    const DimensionTable computed = computed_dimension_table(m_bar);
    bool ok = true;
    Json rows = Json::array();
    for (const std::string& label : dimension_labels()) {
        const bool match = closed.at(label) == computed.at(label);
        ok = ok && match;
        std::cout << label << ' ' << closed.at(label) << ' ' << computed.at(label) << (match ? " OK" : " MISMATCH")
                  << '\n';
        rows.push_back(Json{{"label", label}, {"closed_form", closed.at(label)}, {"computed", computed.at(label)}});
    }
    maybe_write(report, Json{{"m_bar", m_bar}, {"ok", ok}, {"rows", rows}});
    return ok ? kOk : kInternal;
}

int cmd_check(const std::string& input, double tol, const std::string& report) {
    const Tensor4 a = read_tensor_file(input);
    const SymmetryReport rep = classify_symmetries(a, tol);
    rep.for_each([](const char* name, const IdentityCheck& c) {
        std::cout << name << ' ' << (c.holds ? "true" : "false") << ' ' << format_number(c.max_violation) << '\n';
    });
    std::cout << "in_K " << (rep.in_K ? "true" : "false") << '\n';
    maybe_write(report, to_json(rep));
    return rep.in_K ? kOk : kDomain;
}

int cmd_decompose(const std::string& input, const std::string& report) {
    const Tensor4 a = read_tensor_file(input);
    const WDecomposition w = w_project(a);
    for (int i = 1; i <= kModuleCount; ++i) std::cout << module_label(i - 1) << ' ' << format_number(w.module(i).norm) << '\n';
    std::cout << "residual " << format_number(w.residual) << '\n';
    std::cout << "K+ " << format_number(w.plus_norm) << '\n';
    std::cout << "K- " << format_number(w.minus_norm) << '\n';
    maybe_write(report, to_json(w));
    return kOk;
}

int cmd_realize(const std::string& input, const std::string& out, const std::string& mode_name,
                const std::string& report) {
    const RealizationMode mode = parse_realization_mode(mode_name);
    const Tensor4 a = read_tensor_file(input);
    const RealizationResult res = realize(a, mode);
    write_theta_file(out, res.theta);
    const Json rj = to_json(res.report);
    for (const auto& [k, v] : rj.items()) std::cout << k << ' ' << v.dump() << '\n';
    std::cout << "holomorphy " << to_string(holomorphy_type(res.theta).kind) << '\n';
    Json samples = Json::array();
    for (const ParitySample& s : res.off_origin) {
        std::cout << "off_origin K+ " << format_number(s.plus_norm) << " K- " << format_number(s.minus_norm) << '\n';
        samples.push_back(Json{{"point", s.point}, {"plus_norm", s.plus_norm}, {"minus_norm", s.minus_norm}});
    }
    std::cout << "verified " << (res.verified ? "true" : "false") << '\n';
    maybe_write(report, Json{{"mode", to_string(mode)},
                             {"residual", res.residual},
                             {"verified", res.verified},
                             {"report", rj},
                             {"off_origin", samples}});
    return res.verified ? kOk : kInternal;
}

int cmd_curvature(const std::string& theta_path, const std::string& point_text, const std::string& out) {
    const ThetaField theta = read_theta_file(theta_path);
    const std::vector<double> p = parse_list(point_text, "--point");
    if (static_cast<int>(p.size()) != theta.config().m()) {
        throw InvalidArgument("--point has " + std::to_string(p.size()) + " coordinates, expected m = " +
                              std::to_string(theta.config().m()));
    }
    const Tensor4 r = curvature_at(connection_from_theta(theta), p);
    if (out.empty()) {
        std::cout << tensor_to_json(r).dump() << '\n';
    } else {
        write_tensor_file(out, r);
    }
    return kOk;
}

void print_witness(const WitnessReport& r) {
    std::cout << "# case " << r.case_id << " m_bar=" << r.m_bar;
    if (!r.rho.empty()) {
        std::cout << " rho=";
        for (std::size_t i = 0; i < r.rho.size(); ++i) std::cout << (i ? "," : "") << format_number(r.rho[i]);
    }
    std::cout << '\n';
    if (!r.notice.empty()) std::cout << "# " << r.notice << '\n';
    for (const WitnessCheck& c : r.checks)
        std::cout << c.label << ' ' << c.expected << ' ' << c.computed << (c.ok ? " OK" : " FAIL") << '\n';
}

int cmd_paper_examples(const std::string& id, const std::string& rho_text, int m_bar, const std::string& report) {
    std::vector<WitnessReport> reports;
    if (id == "all") {
        reports = witness_suite(m_bar > 0 ? m_bar : 3);
    } else {
        const WitnessCase& wc = witness_case(id);
        reports.push_back(witness_checks(id, parse_list(rho_text, "--rho"), m_bar > 0 ? m_bar : wc.min_m_bar));
    }
    bool ok = true;
    Json arr = Json::array();
    for (const WitnessReport& r : reports) {
        print_witness(r);
        ok = ok && r.ok();
        arr.push_back(to_json(r));
    }
    maybe_write(report, arr);
    return ok ? kOk : kDomain;
}

int cmd_selftest(int m_bar, int trials, std::uint64_t seed, const std::string& report) {
    const SelftestReport rep = run_selftest(m_bar, trials, seed);
    std::cout << rep.table();
    maybe_write(report, to_json(rep));
    return rep.ok() ? kOk : kDomain;
}

int cmd_fixtures(const std::string& dir) {
    std::filesystem::create_directories(dir);
    Json index = Json::array();
    for (const WitnessFixture& f : witness_fixtures()) {
        Json entry{{"name", f.name}, {"case", f.case_id}, {"rho", f.rho}, {"m_bar", f.m_bar}, {"modules", f.modules}};
        if (f.theta) {
            write_theta_file(dir + "/" + f.name + ".theta.json", *f.theta);
            entry["theta"] = f.name + ".theta.json";
        }
        write_tensor_file(dir + "/" + f.name + ".tensor.json", f.tensor);
        entry["tensor"] = f.name + ".tensor.json";
        index.push_back(entry);
        std::cout << f.name << '\n';
    }
    write_json_file(dir + "/index.json", index);
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Affine Kaehler curvature models: decomposition, witnesses and realization"};
    app.require_subcommand(1);

    int m_bar = 0, trials = 10;
    std::uint64_t seed = 1;
    double tol = kDefaultTolerance;
    std::string input, out, report, mode = "joint", theta, point, case_id, rho, out_dir = "fixtures";

    auto* dims = app.add_subcommand("dims", "closed-form and computed module dimensions");
    dims->add_option("--mbar", m_bar, "complex dimension")->required();
    dims->add_option("--report", report, "JSON report path");

    auto* check = app.add_subcommand("check", "curvature identity residuals of a tensor");
    check->add_option("--input", input, "TensorFile")->required();
    check->add_option("--tol", tol, "absolute tolerance");
    check->add_option("--report", report, "JSON report path");

    auto* decompose = app.add_subcommand("decompose", "W1..W12 components of a tensor in K");
    decompose->add_option("--input", input, "TensorFile")->required();
    decompose->add_option("--report", report, "JSON report path");

    auto* realize_cmd = app.add_subcommand("realize", "find Theta whose curvature at 0 is the input");
    realize_cmd->add_option("--input", input, "TensorFile")->required();
    realize_cmd->add_option("--out", out, "ThetaFile to write")->required();
    realize_cmd->add_option("--mode", mode, "joint or split");
    realize_cmd->add_option("--report", report, "JSON report path");

    auto* curvature = app.add_subcommand("curvature", "curvature of the Theta connection at a point");
    curvature->add_option("--theta", theta, "ThetaFile")->required();
    curvature->add_option("--point", point, "comma separated coordinates (x1..xm, y1..ym)")->required();
    curvature->add_option("--out", out, "TensorFile to write (default: standard output)");

    auto* examples = app.add_subcommand("paper-examples", "reproduce the witness tables");
    examples->add_option("--case", case_id, "case id or 'all'")->required();
    examples->add_option("--rho", rho, "comma separated parameters");
    examples->add_option("--mbar", m_bar, "complex dimension (default: the case minimum)");
    examples->add_option("--report", report, "JSON report path");

    auto* selftest = app.add_subcommand("selftest", "seeded invariant suite");
    selftest->add_option("--mbar", m_bar, "complex dimension")->required();
    selftest->add_option("--trials", trials, "random trials");
    selftest->add_option("--seed", seed, "generator seed");
    selftest->add_option("--report", report, "JSON report path");

    auto* fixtures = app.add_subcommand("fixtures", "write witness fixture files");
    fixtures->add_option("--out-dir", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*dims) return cmd_dims(m_bar, report);
        if (*check) return cmd_check(input, tol, report);
        if (*decompose) return cmd_decompose(input, report);
        if (*realize_cmd) return cmd_realize(input, out, mode, report);
        if (*curvature) return cmd_curvature(theta, point, out);
        if (*examples) return cmd_paper_examples(case_id, rho, m_bar, report);
        if (*selftest) return cmd_selftest(m_bar, trials, seed, report);
        if (*fixtures) return cmd_fixtures(out_dir);
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDomain;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const InternalError& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternal;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternal;
    }
    return kUsage;
}
