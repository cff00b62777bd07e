// sos-tree: command-line front end for the three-state SOS recursion library.
//
// Subcommands: oracle-check, fixed-points, phase-scan, period2-scan, orbit.
// Exit codes: 0 success, 2 usage or infeasible request, 3 I/O failure,
// 4 internal consistency failure (a cross-checked identity did not hold).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <sostree/report.hpp>
#include <sostree/sostree.hpp>

namespace {

using namespace sostree;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitConsistency = 4;

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParamInput {
    std::optional<double> theta, theta1;
    std::optional<double> J, J1, beta;
};

void add_param_options(CLI::App* cmd, ParamInput& in) {
    cmd->add_option("--theta", in.theta, "nearest-neighbour weight theta = exp(beta*J)");
    cmd->add_option("--theta1", in.theta1, "next-nearest-neighbour weight theta1 = exp(beta*J1)");
    cmd->add_option("--J", in.J, "nearest-neighbour coupling (with --J1 --beta)");
    cmd->add_option("--J1", in.J1, "next-nearest-neighbour coupling");
    cmd->add_option("--beta", in.beta, "inverse temperature");
}

// Exactly one of (theta, theta1) or (J, J1, beta); derived weights are echoed
// into the metadata either way.
ThetaParams resolve_params(const ParamInput& in, ReportMeta& meta) {
    const bool have_theta = in.theta.has_value() || in.theta1.has_value();
    const bool have_J = in.J.has_value() || in.J1.has_value() || in.beta.has_value();
    if (have_theta == have_J)
        throw std::invalid_argument(
            "supply either --theta --theta1 or --J --J1 --beta (not both, not neither)");
    if (have_theta) {
        if (!in.theta || !in.theta1)
            throw std::invalid_argument("both --theta and --theta1 are required");
        const ThetaParams p(*in.theta, *in.theta1);
        meta.set("theta", p.theta);
        meta.set("theta1", p.theta1);
        return p;
    }
    if (!in.J || !in.J1 || !in.beta)
        throw std::invalid_argument("all of --J, --J1 and --beta are required");
    const ThetaParams p = ThetaParams::from_couplings(CouplingParams(*in.J, *in.J1, *in.beta));
    meta.set("J", *in.J);
    meta.set("J1", *in.J1);
    meta.set("beta", *in.beta);
    meta.set("theta", p.theta);
    meta.set("theta1", p.theta1);
    return p;
}

// "tmin:tmax:n,t1min:t1max:n"
GridSpec parse_grid(const std::string& text, bool log_spacing) {
    GridSpec g{};
    g.log_spacing = log_spacing;
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("--grid expects tmin:tmax:n,t1min:t1max:n");
    auto parse_axis = [](const std::string& axis, double& lo, double& hi, int& n) {
        if (std::sscanf(axis.c_str(), "%lf:%lf:%d", &lo, &hi, &n) != 3)
            throw std::invalid_argument("bad grid axis '" + axis + "', expected min:max:n");
    };
    parse_axis(text.substr(0, comma), g.theta_min, g.theta_max, g.theta_n);
    parse_axis(text.substr(comma + 1), g.theta1_min, g.theta1_max, g.theta1_n);
    g.validate();
    return g;
}

std::string strip_known_extension(std::string path) {
    for (const char* ext : {".csv", ".json", ".svg"}) {
        if (path.size() > std::strlen(ext) && path.ends_with(ext))
            return path.substr(0, path.size() - std::strlen(ext));
    }
    return path;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream ofs(path);
    if (!ofs) throw io_error("cannot open output file: " + path);
    return ofs;
}

struct FormatSet {
    bool csv = false, json = false, svg = false;
};

FormatSet parse_formats(const std::vector<std::string>& formats) {
    FormatSet fs;
    for (const auto& f : formats) {
        if (f == "csv") fs.csv = true;
        else if (f == "json") fs.json = true;
        else if (f == "svg") fs.svg = true;
        else throw std::invalid_argument("unknown --format '" + f + "' (csv, json or svg)");
    }
    return fs;
}

// ---------------------------------------------------------------------------

int run_oracle_check(const ThetaParams& params, int depth) {
    if (depth < 1 || depth > 3)
        throw infeasible_error("oracle-check depth must be 1..3 (3^|V| enumeration guard); got " +
                               std::to_string(depth));
    const PartitionVector bf = partition_vector_bruteforce(depth, params);
    RootRatios rec(1.0, 1.0); // free-boundary seed: Z_i^(0) = 1
    for (int n = 0; n < depth; ++n) rec = step_F(rec, params);
    const RootRatios direct = bf.ratios();

    const double err_u = std::abs(rec.u - direct.u) / direct.u;
    const double err_v = std::abs(rec.v - direct.v) / direct.v;
    const double err = std::max(err_u, err_v);

    std::printf("depth %d, theta=%s, theta1=%s\n", depth, format_g17(params.theta).c_str(),
                format_g17(params.theta1).c_str());
    std::printf("%-12s %-24s %-24s\n", "", "brute force", "recursion");
    std::printf("%-12s %-24s %-24s\n", "u = Z1/Z0", format_g17(direct.u).c_str(),
                format_g17(rec.u).c_str());
    std::printf("%-12s %-24s %-24s\n", "v = Z2/Z0", format_g17(direct.v).c_str(),
                format_g17(rec.v).c_str());
    std::printf("max relative error: %s\n", format_g17(err).c_str());
    return err <= 1e-10 ? kExitOk : kExitConsistency;
}

int run_fixed_points(const ThetaParams& params, ReportMeta meta, const FormatSet& fs,
                     const std::string& out) {
    const PhaseDiagnosis d = diagnose_phase(params);
    const bool csv = fs.csv && !fs.json;
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!out.empty()) {
        file = open_output(out);
        os = &file;
    }
    if (csv) {
        write_fixed_points_csv(*os, meta, d);
    } else {
        *os << fixed_points_json(meta, params, d).dump(2) << "\n";
    }
    return kExitOk;
}

int run_phase_scan(const GridSpec& grid, ReportMeta meta, const FormatSet& fs,
                   const std::string& out, int workers) {
    meta.add_grid(grid);
    const auto cells = scan_phase_grid(grid, workers);
    if (out.empty()) {
        if (fs.svg) throw std::invalid_argument("--format svg requires --out");
        write_phase_scan_csv(std::cout, meta, cells);
        return kExitOk;
    }
    const std::string base = strip_known_extension(out);
    {
        auto ofs = open_output(base + ".csv");
        write_phase_scan_csv(ofs, meta, cells);
        std::cout << "wrote " << base << ".csv\n";
    }
    if (fs.svg) {
        auto ofs = open_output(base + ".svg");
        write_phase_scan_svg(ofs, meta, grid, cells);
        std::cout << "wrote " << base << ".svg\n";
    }
    return kExitOk;
}

int run_period2_scan(const GridSpec& grid, ReportMeta meta, const FormatSet& fs,
                     const std::string& out, int workers, bool exact) {
    meta.add_grid(grid);
    meta.arithmetic = exact ? "rational" : "float";
    const RegionScanReport rep = scan_region_S(grid, workers, exact);
    const nlohmann::json j = region_report_json(meta, rep);
    if (out.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        const std::string base = strip_known_extension(out);
        auto ofs = open_output(base + ".json");
        ofs << j.dump(2) << "\n";
        std::cout << "wrote " << base << ".json\n";
        if (fs.csv) {
            auto csv = open_output(base + ".csv");
            write_region_csv(csv, meta, rep);
            std::cout << "wrote " << base << ".csv\n";
        }
        if (fs.svg) {
            auto svg = open_output(base + ".svg");
            write_region_svg(svg, meta, rep);
            std::cout << "wrote " << base << ".svg\n";
        }
    }
    std::cout << "S empty: " << (rep.empty ? "true" : "false") << "\n";
    for (const auto& v : rep.violations)
        std::cout << "violation: theta=" << format_g17(v.theta)
                  << " theta1=" << format_g17(v.theta1) << " B=" << format_g17(v.b)
                  << " D=" << format_g17(v.d) << "\n";
    return rep.empty ? kExitOk : kExitConsistency;
}

int run_orbit(const ThetaParams& params, ReportMeta meta, double u0, double v0,
              std::int64_t max_iter, double tol, const std::string& out) {
    RootRatios x0(u0, v0); // throws invalid_argument (usage) for nonpositive input
    const Orbit orbit = iterate_orbit(x0, params, max_iter, tol);
    meta.set("x0_u", u0);
    meta.set("x0_v", v0);
    meta.set("max_iter", static_cast<double>(max_iter));
    meta.set("tol", tol);
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!out.empty()) {
        file = open_output(out);
        os = &file;
    }
    write_orbit_csv(*os, meta, orbit);
    switch (orbit.status) {
        case OrbitStatus::converged:
            std::cout << "status: converged at step " << orbit.iterations
                      << " to u=" << format_g17(orbit.limit.u)
                      << " v=" << format_g17(orbit.limit.v) << "\n";
            break;
        case OrbitStatus::cycle:
            std::cout << "status: cycle of period " << orbit.period << "\n";
            break;
        default:
            std::cout << "status: max_iterations reached\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gibbs-measure ratio recursions for the three-state SOS model with "
                 "one-level competing interactions on the binary tree"};
    app.set_version_flag("--version", std::string("sos-tree ") + sostree::kVersion);
    app.require_subcommand(1);

    // oracle-check
    ParamInput oc_params;
    int oc_depth = 2;
    auto* oc = app.add_subcommand("oracle-check",
                                  "brute-force partition ratios vs the ratio recursion");
    add_param_options(oc, oc_params);
    oc->add_option("--depth", oc_depth, "tree depth (1..3)")->required();

    // fixed-points
    ParamInput fp_params;
    std::vector<std::string> fp_formats;
    std::string fp_out;
    auto* fp = app.add_subcommand("fixed-points",
                                  "fixed points on the invariant slice, stability, transition");
    add_param_options(fp, fp_params);
    fp->add_option("--format", fp_formats, "output format: json (default) or csv");
    fp->add_option("--out", fp_out, "output file (stdout if omitted)");

    // phase-scan
    std::string ps_grid_text;
    bool ps_log = false;
    std::vector<std::string> ps_formats;
    std::string ps_out;
    int ps_workers = 0;
    auto* ps = app.add_subcommand("phase-scan", "fixed-point count over a parameter grid");
    ps->add_option("--grid", ps_grid_text, "tmin:tmax:n,t1min:t1max:n")->required();
    ps->add_flag("--log-grid", ps_log, "logarithmic spacing");
    ps->add_option("--format", ps_formats, "csv (default) and/or svg");
    ps->add_option("--out", ps_out, "output base path (writes .csv / .svg)");
    ps->add_option("--workers", ps_workers, "worker threads (default: hardware)");

    // period2-scan
    std::string p2_grid_text;
    bool p2_log = false, p2_exact = false;
    std::vector<std::string> p2_formats;
    std::string p2_out;
    int p2_workers = 0;
    auto* p2 = app.add_subcommand("period2-scan",
                                  "scan sign(B), sign(D) and the set {D>=0, B<0}");
    p2->add_option("--grid", p2_grid_text, "tmin:tmax:n,t1min:t1max:n")->required();
    p2->add_flag("--log-grid", p2_log, "logarithmic spacing");
    p2->add_option("--format", p2_formats, "extra outputs besides .json: csv and/or svg");
    p2->add_option("--out", p2_out, "output base path (writes .json, plus .csv/.svg)");
    p2->add_option("--workers", p2_workers, "worker threads (default: hardware)");
    p2->add_flag("--exact", p2_exact, "evaluate every cell in exact rational arithmetic");

    // orbit
    ParamInput ob_params;
    double ob_u = 1.0, ob_v = 1.0, ob_tol = 1e-12;
    std::int64_t ob_max_iter = 100000;
    std::string ob_out;
    auto* ob = app.add_subcommand("orbit", "iterate the ratio map and trace the orbit");
    add_param_options(ob, ob_params);
    ob->add_option("--u", ob_u, "initial u ratio")->required();
    ob->add_option("--v", ob_v, "initial v ratio")->required();
    ob->add_option("--max-iter", ob_max_iter, "iteration cap");
    ob->add_option("--tol", ob_tol, "sup-norm convergence tolerance");
    ob->add_option("--out", ob_out, "trace CSV file (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (oc->parsed()) {
            ReportMeta meta;
            meta.subcommand = "oracle-check";
            return run_oracle_check(resolve_params(oc_params, meta), oc_depth);
        }
        if (fp->parsed()) {
            ReportMeta meta;
            meta.subcommand = "fixed-points";
            const ThetaParams params = resolve_params(fp_params, meta);
            return run_fixed_points(params, meta, parse_formats(fp_formats), fp_out);
        }
        if (ps->parsed()) {
            ReportMeta meta;
            meta.subcommand = "phase-scan";
            meta.set("workers", std::to_string(ps_workers));
            return run_phase_scan(parse_grid(ps_grid_text, ps_log), meta,
                                  parse_formats(ps_formats), ps_out, ps_workers);
        }
        if (p2->parsed()) {
            ReportMeta meta;
            meta.subcommand = "period2-scan";
            meta.set("workers", std::to_string(p2_workers));
            return run_period2_scan(parse_grid(p2_grid_text, p2_log), meta,
                                    parse_formats(p2_formats), p2_out, p2_workers, p2_exact);
        }
        if (ob->parsed()) {
            ReportMeta meta;
            meta.subcommand = "orbit";
            const ThetaParams params = resolve_params(ob_params, meta);
            return run_orbit(params, meta, ob_u, ob_v, ob_max_iter, ob_tol, ob_out);
        }
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const sostree::internal_error& e) {
        std::cerr << "internal consistency failure: " << e.what() << "\n";
        return kExitConsistency;
    } catch (const sostree::infeasible_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::overflow_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}
