#include "metriclab/verify.hpp"

#include <algorithm>
#include <cmath>

#include "metriclab/closed_forms.hpp"
#include "metriclab/errors.hpp"
#include "metriclab/rng.hpp"

namespace metriclab {

namespace {

constexpr double kForcedFail = 1e6;

struct SubChecks {
    double worst = 1e300;
    ordered_json rows = ordered_json::array();

    void add(const std::string& name, double headroom, ordered_json extra = {}) {
        worst = std::min(worst, headroom);
        ordered_json row;
        row["name"] = name;
        row["headroom"] = headroom;
        if (!extra.is_null()) row["values"] = extra;
        rows.push_back(row);
    }
};

CheckResult finish(const std::string& id, SubChecks& subs, bool inconclusive = false,
                   const std::string& note = "") {
    CheckResult r;
    r.check_id = id;
    r.margin = subs.worst == 1e300 ? 0.0 : subs.worst;
    r.tolerance = 0.0;  // slacks are folded into the headrooms
    r.artifacts["subchecks"] = subs.rows;
    r.note = note;
    if (r.margin >= -r.tolerance)
        r.status = inconclusive ? CheckStatus::inconclusive : CheckStatus::pass;
    else
        r.status = CheckStatus::fail;
    return r;
}

std::vector<Cplx> seeded_disk_points(const Domain& disk_like, int n, std::uint64_t seed,
                                     double max_rel = 0.72) {
    Rng rng(seed);
    std::vector<Cplx> pts;
    while (static_cast<int>(pts.size()) < n) {
        Cplx z = disk_like.center() + disk_like.radius() * max_rel * rng.unit_disk_point();
        pts.push_back(z);
    }
    return pts;
}

std::vector<Cplx> seeded_ring_points(const Domain& ann, double rho, int n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Cplx> pts;
    for (int i = 0; i < n; ++i)
        pts.push_back(ann.center() + std::polar(rho, rng.uniform(0.0, 2.0 * M_PI)));
    return pts;
}

ordered_json cvals(std::initializer_list<std::pair<const char*, double>> kv) {
    ordered_json j;
    for (const auto& [k, v] : kv) j[k] = v;
    return j;
}

// --- the named checks -------------------------------------------------------

CheckResult check_prop_3_2(const RunConfig& cfg, DensityCache* cache) {
    ExtremalConfig x = cfg.extremal();
    SubChecks subs;
    Domain bases[] = {Domain::unit_disk(), Domain::disk({0.3, 0.1}, 0.55, "disk_b")};
    int which = 0;
    for (const Domain& omega : bases) {
        auto pts = seeded_disk_points(omega, cfg.points, Rng::derive(cfg.seed, 32 + which));
        for (Cplx w : pts) {
            double lam = hyperbolic_closed_form(omega, w).value;
            BoundPair bp = cara_bounds(omega, Domain::unit_disk(), 0.0, w, x, cache);
            subs.add("lower_within_2pct_" + omega.label(), bp.lower / lam - 1.0 + 0.02,
                     cvals({{"lower", bp.lower}, {"lambda", lam}, {"w_re", w.real()},
                            {"w_im", w.imag()}}));
            subs.add("upper_equals_lambda_" + omega.label(),
                     1e-9 - std::abs(bp.upper - lam) / lam,
                     cvals({{"upper", bp.upper}, {"lambda", lam}}));
        }
        ++which;
    }
    return finish("prop_3_2_coincidence", subs);
}

CheckResult check_prop_3_3(const RunConfig& cfg, DensityCache* cache) {
    ExtremalConfig x = cfg.extremal();
    SubChecks subs;
    Domain omega = Domain::annulus(0.25, 1.0, 0.0, "annulus_q");
    auto pts = seeded_ring_points(omega, 0.5, cfg.points, Rng::derive(cfg.seed, 33));
    bool all_positive = true;
    bool all_clear_bars = true;
    for (Cplx w : pts) {
        double lam = hyperbolic_closed_form(omega, w).value;
        UpperResult up = cara_upper(omega, Domain::unit_disk(), 0.0, w, x, cache);
        subs.add("upper_is_lambda", 1e-9 - std::abs(up.value - lam) / lam,
                 cvals({{"upper", up.value}, {"lambda", lam}}));
        HurwitzValue eta = hurwitz_density(omega, w, x.hurwitz, cache);
        double gap = eta.eta - lam;
        double clear = gap - 3.0 * eta.error_estimate;
        if (gap <= 0.0) all_positive = false;
        if (clear <= 0.0) all_clear_bars = false;
        subs.add("gap_exceeds_3x_error", clear / lam,
                 cvals({{"eta", eta.eta}, {"lambda", lam}, {"gap", gap},
                        {"error_estimate", eta.error_estimate}, {"w_re", w.real()},
                        {"w_im", w.imag()}}));
    }
    if (!all_positive) {
        CheckResult r = finish("prop_3_3_strict_gap", subs);
        r.status = CheckStatus::fail;
        r.note = "measured gap not positive";
        return r;
    }
    if (!all_clear_bars) {
        CheckResult r = finish("prop_3_3_strict_gap", subs);
        r.status = CheckStatus::inconclusive;
        r.note = "gap positive but inside 3x error bars";
        return r;
    }
    return finish("prop_3_3_strict_gap", subs);
}

CheckResult check_prop_3_4(const RunConfig& cfg, DensityCache* cache) {
    ExtremalConfig x = cfg.extremal();
    SubChecks subs;
    struct Inst {
        Domain omega;
        Domain base;
        Cplx s, w;
        const char* tag;
    };
    Domain ann = Domain::annulus(0.25, 1.0, 0.0, "annulus_q");
    Domain ann2 = Domain::annulus(0.5, 1.0, 0.0, "annulus_h");
    std::vector<Inst> insts = {
        {Domain::unit_disk(), Domain::unit_disk(), 0.0, 0.5, "disk"},
        {ann, Domain::unit_disk(), 0.0, 0.5, "annulus_base_disk"},
        {ann2, Domain::unit_disk(), Cplx(0.72, 0.0), Cplx(0.72, 0.0), "annulus_inclusion"},
    };
    for (const auto& inst : insts) {
        CandidateFamily fam = make_family(inst.omega, inst.base, inst.s, inst.w, x, cache);
        LowerResult lo = cara_lower(inst.omega, inst.base, inst.s, inst.w, fam, x, cache);
        HurwitzValue eta = hurwitz_density(inst.omega, inst.w, x.hurwitz, cache);
        double slack = 0.02 * eta.eta + eta.error_estimate;
        subs.add(std::string("lower_below_eta_") + inst.tag,
                 (eta.eta + slack - lo.value) / eta.eta,
                 cvals({{"lower", lo.value}, {"eta", eta.eta}, {"error", eta.error_estimate}}));
    }
    return finish("prop_3_4_sandwich", subs);
}

CheckResult check_prop_3_6(const RunConfig& cfg, DensityCache* cache) {
    ExtremalConfig x = cfg.extremal();
    SubChecks subs;
    Domain omega = Domain::annulus(0.5, 1.0, 0.0, "annulus_h");
    Rng rng(Rng::derive(cfg.seed, 36));
    for (int i = 0; i < std::max(1, cfg.points - 1); ++i) {
        Cplx w = std::polar(0.75, rng.uniform(0.0, 2.0 * M_PI));
        HurwitzValue eta = hurwitz_density(omega, w, x.hurwitz, cache);
        BoundPair bp = cara_bounds(omega, omega, w, w, x, cache);
        subs.add("lower_is_eta", 1e-9 - std::abs(bp.lower - eta.eta),
                 cvals({{"lower", bp.lower}, {"eta", eta.eta}, {"w_re", w.real()},
                        {"w_im", w.imag()}}));
        subs.add("upper_is_eta", 1e-9 - std::abs(bp.upper - eta.eta),
                 cvals({{"upper", bp.upper}, {"eta", eta.eta}}));
    }
    return finish("prop_3_6_identity", subs);
}

CheckResult check_cor_3_7(const RunConfig& cfg, DensityCache* cache) {
    ExtremalConfig x = cfg.extremal();
    SubChecks subs;
    Domain omega = Domain::disk({0.1, 0.1}, 0.6, "disk_c");
    Domain base = Domain::upper_half_plane();
    Cplx s{0.0, 1.0};
    auto pts = seeded_disk_points(omega, cfg.points, Rng::derive(cfg.seed, 37));
    for (Cplx w : pts) {
        HurwitzValue eta = hurwitz_density(omega, w, x.hurwitz, cache);
        BoundPair bp = cara_bounds(omega, base, s, w, x, cache);
        subs.add("lower_within_2pct", bp.lower / eta.eta - 1.0 + 0.02,
                 cvals({{"lower", bp.lower}, {"eta", eta.eta}}));
        subs.add("upper_equals_eta", 1e-9 - std::abs(bp.upper - eta.eta) / eta.eta,
                 cvals({{"upper", bp.upper}, {"eta", eta.eta}}));
    }
    return finish("cor_3_7_simply_connected_base", subs);
}

CheckResult check_thm_3_9(const RunConfig& cfg, DensityCache* cache) {
    Domain ann = Domain::annulus(0.25, 1.0, 0.0, "annulus_q");
    Cplx a{0.5, 0.0};

    AnalyticMap rot = AnalyticMap::affine(std::polar(1.0, 0.7), 0.0);
    CheckResult r1 =
        check_distance_decreasing(rot, ann, ann, Domain::unit_disk(), 0.0, a, cfg, cache);
    AnalyticMap incl = AnalyticMap::identity();
    CheckResult r2 = check_distance_decreasing(incl, ann, Domain::unit_disk(),
                                               Domain::unit_disk(), 0.0, a, cfg, cache);

    SubChecks subs;
    subs.add("conformal_instance", r1.margin, r1.artifacts);
    subs.add("inclusion_instance", r2.margin, r2.artifacts);
    return finish("thm_3_9_distance_decreasing", subs);
}

CheckResult check_cor_3_10(const RunConfig& cfg, DensityCache* cache) {
    ExtremalConfig x = cfg.extremal();
    SubChecks subs;
    Rng rng(Rng::derive(cfg.seed, 40));

    // random disk automorphism U(z) = e^{i beta} (z - a)/(1 - conj(a) z)
    Cplx aa = 0.5 * rng.unit_disk_point();
    double beta = rng.uniform(0.0, 2.0 * M_PI);
    AnalyticMap U = AnalyticMap::compose(
        {AnalyticMap::affine(std::polar(1.0, beta), 0.0), AnalyticMap::mobius_to_zero(aa)});
    Cplx w0{0.4, -0.2};
    AnalyticMap::Eval ue = U.eval(w0);
    Cplx w1 = ue.value;
    double du = std::abs(ue.derivative);

    double lam0 = hyperbolic_closed_form(Domain::unit_disk(), w0).value;
    double lam1 = hyperbolic_closed_form(Domain::unit_disk(), w1).value;
    subs.add("closed_form_transforms", 1e-8 - std::abs(lam1 * du - lam0) / lam0,
             cvals({{"lambda_w0", lam0}, {"lambda_Uw0_scaled", lam1 * du}}));

    Domain disk = Domain::unit_disk();
    CandidateFamily f0 = make_family(disk, disk, 0.0, w0, x, cache);
    CandidateFamily f1 = make_family(disk, disk, 0.0, w1, x, cache);
    double lo0 = cara_lower(disk, disk, 0.0, w0, f0, x, cache).value;
    double lo1 = cara_lower(disk, disk, 0.0, w1, f1, x, cache).value;
    subs.add("disk_bounds_transform", 0.02 - std::abs(lo1 * du - lo0) / lo0,
             cvals({{"lower_w0", lo0}, {"lower_Uw0_scaled", lo1 * du}}));

    // annulus rotation (|f'| = 1)
    Domain ann = Domain::annulus(0.25, 1.0, 0.0, "annulus_q");
    Cplx wa = std::polar(0.55, rng.uniform(0.0, 2.0 * M_PI));
    double alpha = rng.uniform(0.0, 2.0 * M_PI);
    Cplx wb = wa * std::polar(1.0, alpha);
    CandidateFamily fa = make_family(ann, disk, 0.0, wa, x, cache);
    CandidateFamily fb = make_family(ann, disk, 0.0, wb, x, cache);
    double la = cara_lower(ann, disk, 0.0, wa, fa, x, cache).value;
    double lb = cara_lower(ann, disk, 0.0, wb, fb, x, cache).value;
    subs.add("annulus_rotation_bounds", 0.02 - std::abs(la - lb) / la,
             cvals({{"lower_w", la}, {"lower_rotated", lb}}));
    double lama = hyperbolic_closed_form(ann, wa).value;
    double lamb = hyperbolic_closed_form(ann, wb).value;
    subs.add("annulus_closed_form", 1e-8 - std::abs(lama - lamb) / lama,
             cvals({{"lambda_w", lama}, {"lambda_rotated", lamb}}));
    return finish("cor_3_10_conformal_invariance", subs);
}

CheckResult check_cor_3_11(const RunConfig& cfg, DensityCache* cache) {
    ExtremalConfig x = cfg.extremal();
    SubChecks subs;
    Domain ann = Domain::annulus(0.25, 1.0, 0.0, "annulus_q");
    Domain disk = Domain::unit_disk();
    Rng rng(Rng::derive(cfg.seed, 41));
    for (int i = 0; i < cfg.points; ++i) {
        Cplx w = std::polar(rng.uniform(0.4, 0.72), rng.uniform(0.0, 2.0 * M_PI));
        CandidateFamily fam = make_family(ann, disk, 0.0, w, x, cache);
        double lo = cara_lower(ann, disk, 0.0, w, fam, x, cache).value;
        double lam = hyperbolic_closed_form(disk, w).value;  // exact C of the disk
        subs.add("annulus_lower_dominates_disk", (lo - lam + 1e-6) / lam,
                 cvals({{"lower_annulus", lo}, {"cara_disk_exact", lam}, {"w_re", w.real()},
                        {"w_im", w.imag()}}));
    }
    return finish("cor_3_11_monotonicity", subs);
}

CheckResult check_thm_3_12(const RunConfig& cfg, DensityCache* cache, bool two_sided) {
    ExtremalConfig x = cfg.extremal();
    SubChecks subs;
    Domain ann = Domain::annulus(0.25, 1.0, 0.0, "annulus_q");
    Domain disk = Domain::unit_disk();
    Domain hp = Domain::upper_half_plane();
    // g_b: D -> H, catalog covering with g_b(0) = i, single sheet
    AnalyticMap gb = AnalyticMap::cayley().inverse();
    Cplx a{0.0, 0.0};
    Cplx b = gb.eval(a).value;  // = i
    if (std::abs(gb.eval(a).derivative) < 1e-12)
        throw InadmissibleTestMap("thm_3_12: base covering has vanishing derivative");

    auto pts = seeded_ring_points(ann, 0.55, std::max(1, cfg.points - 1),
                                  Rng::derive(cfg.seed, 42));
    for (Cplx w : pts) {
        CandidateFamily fam1 = make_family(ann, disk, a, w, x, cache);
        double lo1 = cara_lower(ann, disk, a, w, fam1, x, cache).value;
        UpperResult up2 = cara_upper(ann, hp, b, w, x, cache);
        double slack2 = 0.02 * up2.value + up2.error;
        subs.add("base_disk_to_halfplane", (up2.value + slack2 - lo1) / up2.value,
                 cvals({{"lower_base_disk", lo1}, {"upper_base_halfplane", up2.value}}));
        if (two_sided) {
            CandidateFamily fam2 = make_family(ann, hp, b, w, x, cache);
            double lo2 = cara_lower(ann, hp, b, w, fam2, x, cache).value;
            UpperResult up1 = cara_upper(ann, disk, a, w, x, cache);
            double slack1 = 0.02 * up1.value + up1.error;
            subs.add("base_halfplane_to_disk", (up1.value + slack1 - lo2) / up1.value,
                     cvals({{"lower_base_halfplane", lo2}, {"upper_base_disk", up1.value}}));
        }
    }
    return finish(two_sided ? "cor_3_13_conformal_bases" : "thm_3_12_base_comparison", subs);
}

CheckResult check_thm_4_2(const RunConfig& cfg, DensityCache* cache) {
    SubChecks subs;
    PathConfig pc;
    pc.extremal = cfg.extremal();
    Domain ann = Domain::annulus(0.5, 1.0, 0.0, "annulus_h");
    Domain disk = Domain::unit_disk();

    DensityField fieldC =
        diagonal_density_field(ann, disk, cfg.distance_grid, DiagonalMode::cheap, pc, cache);

    Rng rng(Rng::derive(cfg.seed, 43));
    double h = fieldC.grid().spacing();
    auto sample_point = [&] {
        while (true) {
            Cplx z = std::polar(rng.uniform(0.5 + 3 * h, 1.0 - 3 * h),
                                rng.uniform(0.0, 2.0 * M_PI));
            if (contains(ann, z) && boundary_distance(ann, z) > 2 * h) return z;
        }
    };
    for (int i = 0; i < cfg.pairs; ++i) {
        Cplx p = sample_point(), q = sample_point();
        if (std::abs(p - q) < 0.2) {
            --i;
            continue;
        }
        double dC = distance(fieldC, p, q, pc).value;
        double dEta = hurwitz_distance(disk, p, q, cfg.distance_grid, pc, cache).value;
        subs.add("eta_distance_positive", dEta - 1e-6,
                 cvals({{"d_eta", dEta}, {"p_re", p.real()}, {"p_im", p.imag()},
                        {"q_re", q.real()}, {"q_im", q.imag()}}));
        subs.add("cara_dominates_eta", (dC - dEta * (1.0 - 0.02)) / dEta,
                 cvals({{"d_cara", dC}, {"d_eta", dEta}}));
    }

    double oracle = 2.0 * std::atanh(0.5);
    double dd = hurwitz_distance(disk, 0.0, 0.5, cfg.distance_grid, pc, cache).value;
    subs.add("disk_geodesic_oracle", 0.02 - std::abs(dd - oracle) / oracle,
             cvals({{"measured", dd}, {"oracle", oracle}}));

    MetricAxiomReport rep = metric_axiom_check(fieldC, cfg.triples, Rng::derive(cfg.seed, 44), pc);
    subs.add("symmetry_exact", rep.symmetry_violations == 0 ? 0.0 : -1.0,
             cvals({{"violations", static_cast<double>(rep.symmetry_violations)}}));
    subs.add("triangle_within_1pct", rep.worst_triangle_margin + 0.01,
             cvals({{"worst_margin", rep.worst_triangle_margin}}));
    return finish("thm_4_2_metric", subs);
}

CheckResult check_remark_liouville(const RunConfig& cfg, DensityCache* cache) {
    ExtremalConfig x = cfg.extremal();
    SubChecks subs;
    BoundPair bp = cara_bounds(Domain::whole_plane(), Domain::unit_disk(), 0.0, 0.0, x, cache);
    subs.add("family_empty", bp.empty_family ? 0.0 : -1.0);
    subs.add("lower_is_zero", -std::abs(bp.lower));
    subs.add("upper_is_zero", -std::abs(bp.upper));
    return finish("remark_liouville_empty_family", subs);
}

}  // namespace

ExtremalConfig RunConfig::extremal() const {
    ExtremalConfig x;
    x.laurent_degree = degree;
    x.restarts = restarts;
    x.max_iters = max_iters;
    x.boundary_samples = boundary_samples;
    x.margin = margin_rescale;
    x.seed = seed;
    x.hurwitz.spacing = extraction_spacing;
    return x;
}

std::vector<std::string> default_checks() {
    return {"prop_3_2_coincidence",  "prop_3_3_strict_gap",
            "prop_3_4_sandwich",     "prop_3_6_identity",
            "cor_3_7_simply_connected_base", "thm_3_9_distance_decreasing",
            "cor_3_10_conformal_invariance", "cor_3_11_monotonicity",
            "thm_3_12_base_comparison",      "cor_3_13_conformal_bases",
            "thm_4_2_metric"};
}

CheckResult check_distance_decreasing(const AnalyticMap& f, const Domain& omega1,
                                      const Domain& omega2, const Domain& base, Cplx c, Cplx a,
                                      const RunConfig& cfg, DensityCache* cache) {
    ExtremalConfig x = cfg.extremal();
    AnalyticMap::Eval fe = f.eval(a);
    Cplx b = fe.value;
    try {
        if (count_s_points(f, omega1, b, x.boundary_samples) != 1)
            throw InadmissibleTestMap("check_distance_decreasing: f is not single-preimage at a");
    } catch (const BoundaryTooClose& e) {
        throw InadmissibleTestMap(std::string("check_distance_decreasing: ") + e.what());
    }

    CandidateFamily fam = make_family(omega2, base, c, b, x, cache);
    double lhs = cara_lower(omega2, base, c, b, fam, x, cache).value * std::abs(fe.derivative);
    UpperResult up = cara_upper(omega1, base, c, a, x, cache);
    double slack = 0.02 * up.value + up.error;

    SubChecks subs;
    subs.add("pushforward_below_upper", (up.value + slack - lhs) / up.value,
             cvals({{"lhs", lhs}, {"upper", up.value}, {"deriv", std::abs(fe.derivative)}}));
    return finish("distance_decreasing_instance", subs);
}

std::vector<CheckResult> run_suite(const RunConfig& config) {
    DensityCache cache;
    std::vector<std::string> ids = config.checks.empty() ? default_checks() : config.checks;
    std::vector<CheckResult> results;
    for (const std::string& id : ids) {
        CheckResult r;
        try {
            if (id == "prop_3_2_coincidence")
                r = check_prop_3_2(config, &cache);
            else if (id == "prop_3_3_strict_gap")
                r = check_prop_3_3(config, &cache);
            else if (id == "prop_3_4_sandwich")
                r = check_prop_3_4(config, &cache);
            else if (id == "prop_3_6_identity")
                r = check_prop_3_6(config, &cache);
            else if (id == "cor_3_7_simply_connected_base")
                r = check_cor_3_7(config, &cache);
            else if (id == "thm_3_9_distance_decreasing")
                r = check_thm_3_9(config, &cache);
            else if (id == "cor_3_10_conformal_invariance")
                r = check_cor_3_10(config, &cache);
            else if (id == "cor_3_11_monotonicity")
                r = check_cor_3_11(config, &cache);
            else if (id == "thm_3_12_base_comparison")
                r = check_thm_3_12(config, &cache, false);
            else if (id == "cor_3_13_conformal_bases")
                r = check_thm_3_12(config, &cache, true);
            else if (id == "thm_4_2_metric")
                r = check_thm_4_2(config, &cache);
            else if (id == "remark_liouville_empty_family")
                r = check_remark_liouville(config, &cache);
            else {
                r.check_id = id;
                r.status = CheckStatus::fail;
                r.note = "unknown check id";
            }
        } catch (const std::exception& e) {
            r.check_id = id;
            r.status = CheckStatus::fail;
            r.margin = -kForcedFail;
            r.note = std::string("error: ") + e.what();
        }
        if (config.tol_scale < 0.0) {
            r.status = CheckStatus::fail;
            r.margin -= kForcedFail;
            r.note = r.note.empty() ? "inverted tolerance" : r.note + "; inverted tolerance";
        }
        results.push_back(std::move(r));
    }
    return results;
}

RunConfig run_config_from_json(const ordered_json& j) {
    RunConfig c;
    c.seed = j.value("seed", c.seed);
    c.tol_scale = j.value("tol_scale", c.tol_scale);
    c.spacing = j.value("spacing", c.spacing);
    c.extraction_spacing = j.value("extraction_spacing", c.extraction_spacing);
    c.distance_grid = j.value("distance_grid", c.distance_grid);
    c.points = j.value("points", c.points);
    c.pairs = j.value("pairs", c.pairs);
    c.triples = j.value("triples", c.triples);
    c.degree = j.value("degree", c.degree);
    c.restarts = j.value("restarts", c.restarts);
    c.max_iters = j.value("max_iters", c.max_iters);
    c.boundary_samples = j.value("boundary_samples", c.boundary_samples);
    c.margin_rescale = j.value("margin_rescale", c.margin_rescale);
    c.threads = j.value("threads", c.threads);
    c.output_dir = j.value("output_dir", c.output_dir);
    if (j.contains("checks")) c.checks = j["checks"].get<std::vector<std::string>>();
    return c;
}

ordered_json run_config_to_json(const RunConfig& c) {
    ordered_json j;
    j["seed"] = c.seed;
    j["tol_scale"] = c.tol_scale;
    j["spacing"] = c.spacing;
    j["extraction_spacing"] = c.extraction_spacing;
    j["distance_grid"] = c.distance_grid;
    j["points"] = c.points;
    j["pairs"] = c.pairs;
    j["triples"] = c.triples;
    j["degree"] = c.degree;
    j["restarts"] = c.restarts;
    j["max_iters"] = c.max_iters;
    j["boundary_samples"] = c.boundary_samples;
    j["margin_rescale"] = c.margin_rescale;
    j["threads"] = c.threads;
    j["checks"] = c.checks.empty() ? default_checks() : c.checks;
    j["output_dir"] = c.output_dir;
    return j;
}

ordered_json report_to_json(const RunConfig& config, const std::vector<CheckResult>& results) {
    ordered_json rep;
    rep["config"] = run_config_to_json(config);
    ordered_json rows = ordered_json::array();
    int n_pass = 0, n_fail = 0, n_inc = 0;
    for (const auto& r : results) {
        ordered_json row;
        row["check_id"] = r.check_id;
        row["status"] = r.status == CheckStatus::pass
                            ? "pass"
                            : (r.status == CheckStatus::fail ? "fail" : "inconclusive");
        row["margin"] = r.margin;
        row["tolerance"] = r.tolerance;
        row["artifacts"] = r.artifacts;
        if (!r.note.empty()) row["note"] = r.note;
        rows.push_back(row);
        if (r.status == CheckStatus::pass) ++n_pass;
        if (r.status == CheckStatus::fail) ++n_fail;
        if (r.status == CheckStatus::inconclusive) ++n_inc;
    }
    rep["results"] = rows;
    ordered_json summary;
    summary["pass"] = n_pass;
    summary["fail"] = n_fail;
    summary["inconclusive"] = n_inc;
    rep["summary"] = summary;
    return rep;
}

int suite_exit_code(const std::vector<CheckResult>& results) {
    bool any_fail = false, any_inc = false;
    for (const auto& r : results) {
        if (r.status == CheckStatus::fail) any_fail = true;
        if (r.status == CheckStatus::inconclusive) any_inc = true;
    }
    if (any_fail) return 2;
    if (any_inc) return 3;
    return 0;
}

}  // namespace metriclab
