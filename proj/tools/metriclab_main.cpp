#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "metriclab/errors.hpp"
#include "metriclab/jsonio.hpp"
#include "metriclab/pathmetric.hpp"
#include "metriclab/verify.hpp"

using namespace metriclab;

namespace {

Domain load_domain(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw metriclab::ConfigError("cannot open domain spec " + path);
    ordered_json j = ordered_json::parse(in);
    return domain_from_json(j);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw metriclab::ConfigError("cannot open output file " + path);
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"metriclab: densities, bounds and distances of the Hurwitz-type metrics"};
    app.require_subcommand(1);

    std::uint64_t seed = 20240601;
    double tol = 1.0;
    int threads = 1;
    app.add_option("--seed", seed, "global RNG seed");
    app.add_option("--tol", tol, "tolerance scale (negative: harness sanity mode)");
    app.add_option("--threads", threads, "worker threads");

    // density
    auto* cmd_density = app.add_subcommand("density", "solve the hyperbolic density on a grid");
    std::string d_domain, d_out = "field.csv";
    int d_grid = 64;
    cmd_density->add_option("--domain", d_domain, "domain spec JSON file")->required();
    cmd_density->add_option("--grid", d_grid, "grid resolution N (spacing = extent / N)");
    cmd_density->add_option("--out", d_out, "output CSV path");

    // hurwitz
    auto* cmd_hurwitz = app.add_subcommand("hurwitz", "Hurwitz radius and density at a point");
    std::string h_domain, h_at, h_out;
    double h_spacing = 0.02;
    cmd_hurwitz->add_option("--domain", h_domain)->required();
    cmd_hurwitz->add_option("--at", h_at, "point RE,IM")->required();
    cmd_hurwitz->add_option("--spacing", h_spacing, "extraction mesh spacing");
    cmd_hurwitz->add_option("--out", h_out, "write the JSON row here as well");

    // cara
    auto* cmd_cara = app.add_subcommand("cara", "Caratheodory-density bounds");
    std::string c_omega, c_base, c_s, c_at;
    int c_degree = 3, c_restarts = 5;
    cmd_cara->add_option("--omega", c_omega)->required();
    cmd_cara->add_option("--base", c_base)->required();
    cmd_cara->add_option("--s", c_s, "base point RE,IM")->required();
    cmd_cara->add_option("--at", c_at, "evaluation point RE,IM")->required();
    cmd_cara->add_option("--degree", c_degree, "exponent basis degree");
    cmd_cara->add_option("--restarts", c_restarts, "optimizer restarts");

    // distance
    auto* cmd_dist = app.add_subcommand("distance", "path distance of the diagonal density");
    std::string t_omega, t_base, t_from, t_to, t_mode = "cheap", t_path_out;
    int t_grid = 96;
    cmd_dist->add_option("--omega", t_omega)->required();
    cmd_dist->add_option("--base", t_base)->required();
    cmd_dist->add_option("--from", t_from)->required();
    cmd_dist->add_option("--to", t_to)->required();
    cmd_dist->add_option("--grid", t_grid);
    cmd_dist->add_option("--mode", t_mode, "cheap|bounds");
    cmd_dist->add_option("--path-out", t_path_out, "write the polyline CSV here");

    // verify
    auto* cmd_verify = app.add_subcommand("verify", "run the named numerical checks");
    std::string v_config, v_report = "report.json";
    cmd_verify->add_option("--config", v_config, "run config JSON");
    cmd_verify->add_option("--report", v_report, "report output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_density) {
            Domain d = load_domain(d_domain);
            Cplx lo, hi;
            d.bounding_box(lo, hi);
            double h = std::max(hi.real() - lo.real(), hi.imag() - lo.imag()) / d_grid;
            DensityField f = solve_domain(d, h);
            std::ofstream out(d_out, std::ios::binary);
            f.write_csv(out);
            std::cout << "wrote " << d_out << " (" << f.grid().nodes().size() << " nodes)\n";
        } else if (*cmd_hurwitz) {
            Domain d = load_domain(h_domain);
            HurwitzConfig cfg;
            cfg.spacing = h_spacing;
            HurwitzValue v = hurwitz_density(d, parse_point(h_at), cfg);
            ordered_json j;
            j["radius"] = v.radius;
            j["eta"] = v.eta;
            j["method"] =
                v.method == HurwitzMethod::simply_connected ? "simply_connected" : "extraction";
            j["error_estimate"] = v.error_estimate;
            std::string text = dump_json_17(j);
            std::cout << text;
            if (!h_out.empty()) write_text(h_out, text);
        } else if (*cmd_cara) {
            Domain omega = load_domain(c_omega);
            Domain base = load_domain(c_base);
            ExtremalConfig cfg;
            cfg.laurent_degree = c_degree;
            cfg.restarts = c_restarts;
            cfg.seed = seed;
            BoundPair bp = cara_bounds(omega, base, parse_point(c_s), parse_point(c_at), cfg);
            ordered_json j;
            j["lower"] = bp.lower;
            j["upper"] = bp.upper;
            j["empty_family"] = bp.empty_family;
            const char* src = "none";
            if (bp.upper_source == UpperSource::hurwitz_bound) src = "hurwitz_bound";
            if (bp.upper_source == UpperSource::schwarz_pick_bound) src = "schwarz_pick_bound";
            if (bp.upper_source == UpperSource::min_of_both) src = "min_of_both";
            j["upper_source"] = src;
            ordered_json theta = ordered_json::array();
            if (bp.has_witness && !bp.witness.inclusion)
                for (Cplx t : bp.witness.theta)
                    theta.push_back(ordered_json::array({t.real(), t.imag()}));
            j["witness"] = bp.has_witness && bp.witness.inclusion ? ordered_json("inclusion")
                                                                  : ordered_json(theta);
            std::cout << dump_json_17(j);
        } else if (*cmd_dist) {
            Domain omega = load_domain(t_omega);
            Domain base = load_domain(t_base);
            PathConfig pc;
            pc.extremal.seed = seed;
            DiagonalMode mode = t_mode == "bounds" ? DiagonalMode::bounds : DiagonalMode::cheap;
            DensityField f = diagonal_density_field(omega, base, t_grid, mode, pc);
            PathResult r = distance(f, parse_point(t_from), parse_point(t_to), pc);
            ordered_json j;
            j["value"] = r.value;
            j["vertices"] = r.path.size();
            std::cout << dump_json_17(j);
            if (!t_path_out.empty()) {
                std::string csv = "re,im\n";
                char buf[80];
                for (Cplx p : r.path) {
                    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", p.real(), p.imag());
                    csv += buf;
                }
                write_text(t_path_out, csv);
            }
        } else if (*cmd_verify) {
            RunConfig cfg;
            if (!v_config.empty()) {
                std::ifstream in(v_config);
                if (!in) throw metriclab::ConfigError("cannot open config " + v_config);
                cfg = run_config_from_json(ordered_json::parse(in));
            }
            if (app.count("--seed")) cfg.seed = seed;
            if (app.count("--tol")) cfg.tol_scale = tol;
            if (app.count("--threads")) cfg.threads = threads;
            auto results = run_suite(cfg);
            std::string text = dump_json_17(report_to_json(cfg, results));
            write_text(v_report, text);
            for (const auto& r : results) {
                const char* st = r.status == CheckStatus::pass
                                     ? "PASS"
                                     : (r.status == CheckStatus::fail ? "FAIL" : "INCONCLUSIVE");
                std::printf("%-34s %s (margin %.3g)\n", r.check_id.c_str(), st, r.margin);
            }
            return suite_exit_code(results);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
