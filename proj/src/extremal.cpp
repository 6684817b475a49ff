#include "metriclab/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "metriclab/errors.hpp"
#include "metriclab/nelder_mead.hpp"
#include "metriclab/rng.hpp"

namespace metriclab {

namespace {

bool is_unit_disk(const Domain& d) {
    return d.kind() == Domain::Kind::Disk && std::abs(d.center()) < 1e-15 &&
           std::abs(d.radius() - 1.0) < 1e-15;
}

Cplx ipow(Cplx z, int k) {
    if (k == 0) return {1.0, 0.0};
    Cplx base = k > 0 ? z : 1.0 / z;
    int n = std::abs(k);
    Cplx acc{1.0, 0.0};
    while (n > 0) {
        if (n & 1) acc *= base;
        base *= base;
        n >>= 1;
    }
    return acc;
}

// signed distance to the complement: negative inside, positive outside
double signed_distance(const Domain& d, Cplx z) {
    switch (d.kind()) {
        case Domain::Kind::Disk:
            return std::abs(z - d.center()) - d.radius();
        case Domain::Kind::Annulus: {
            double rho = std::abs(z - d.center());
            return std::max(d.inner_radius() - rho, rho - d.outer_radius());
        }
        case Domain::Kind::PuncturedDisk: {
            double rho = std::abs(z - d.center());
            return std::max(rho - d.radius(), -rho);
        }
        case Domain::Kind::Punctured:
            return std::max(signed_distance(d.base(), z), -std::abs(z - d.puncture()));
        case Domain::Kind::HalfPlane: {
            Cplx v = z - d.hp_origin();
            return -(v.real() * d.hp_normal().real() + v.imag() * d.hp_normal().imag());
        }
        case Domain::Kind::Strip:
            return std::max(-z.imag(), z.imag() - d.width());
        default:
            return contains(d, z) ? -boundary_distance(d, z) : 1.0;
    }
}

// quadratic-peak estimate of the max of a sampled smooth periodic profile:
// plain max plus parabolic interpolation through local-max triples
double peak_corrected_max(const std::vector<double>& v) {
    double m = -1e300;
    for (double x : v) m = std::max(m, x);
    std::size_t n = v.size();
    if (n < 3) return m;
    for (std::size_t j = 0; j < n; ++j) {
        double fm = v[(j + n - 1) % n], f0 = v[j], fp = v[(j + 1) % n];
        if (f0 >= fm && f0 >= fp) {
            double denom = 2.0 * f0 - fm - fp;
            if (denom > 1e-300) {
                double peak = f0 + (fp - fm) * (fp - fm) / (8.0 * denom);
                m = std::max(m, peak);
            }
        }
    }
    return m;
}

}  // namespace

// --- Candidate ---------------------------------------------------------------

std::pair<Cplx, Cplx> Candidate::pre(Cplx z) const {
    AnalyticMap::Eval se = seed.eval(z);
    Cplx q{0.0, 0.0}, dq{0.0, 0.0};
    for (std::size_t i = 0; i < powers.size(); ++i) {
        int k = powers[i];
        Cplx rel = z - center;
        q += theta[i] * ipow(rel, k);
        dq += theta[i] * static_cast<double>(k) * ipow(rel, k - 1);
    }
    Cplx e = std::exp(q) * std::exp(-log_rescale);
    return {se.value * e, (se.derivative + se.value * dq) * e};
}

std::pair<Cplx, Cplx> Candidate::eval(Cplx z) const {
    if (inclusion) return {z, {1.0, 0.0}};
    auto [v, dv] = pre(z);
    if (!post) return {v, dv};
    AnalyticMap::Eval pe = post->eval(v);
    return {pe.value, pe.derivative * dv};
}

// --- winding count -------------------------------------------------------------

int count_s_points(const MapEval& h, const Domain& omega, Cplx s, int n_per_component) {
    auto samples = boundary_sample(omega, n_per_component);
    Cplx acc{0.0, 0.0};
    double min_mod = 1e300;
    for (const auto& p : samples) {
        auto [v, dv] = h(p.z);
        Cplx diff = v - s;
        min_mod = std::min(min_mod, std::abs(diff));
        acc += dv / diff * p.tangent * p.ds;
    }
    if (min_mod < 1e-6)
        throw BoundaryTooClose("count_s_points: |h - s| = " + std::to_string(min_mod) +
                               " on the boundary");
    Cplx winding = acc / Cplx(0.0, 2.0 * M_PI);
    long rounded = std::lround(winding.real());
    if (std::abs(winding - Cplx(static_cast<double>(rounded), 0.0)) > 0.1)
        throw NonIntegerWinding("count_s_points: winding " + std::to_string(winding.real()) +
                                " too far from an integer");
    int adjust = 0;
    for (Cplx p : omega.punctures()) {
        auto [v, dv] = h(p);
        if (std::abs(v - s) <= 1e-9) {
            if (std::abs(dv) <= 1e-9)
                throw NonIntegerWinding("count_s_points: degenerate s-point at a puncture");
            ++adjust;
        }
    }
    return static_cast<int>(rounded) - adjust;
}

int count_s_points(const AnalyticMap& h, const Domain& omega, Cplx s, int n_per_component) {
    return count_s_points(
        [&h](Cplx z) {
            AnalyticMap::Eval e = h.eval(z);
            return std::make_pair(e.value, e.derivative);
        },
        omega, s, n_per_component);
}

// --- family construction ---------------------------------------------------------

CandidateFamily make_family(const Domain& omega, const Domain& base, Cplx s, Cplx w,
                            const ExtremalConfig& cfg, DensityCache* cache) {
    if (base.is_whole_plane())
        throw ConfigError("make_family: the base domain must be a proper subdomain");
    CandidateFamily fam;
    fam.omega = omega;
    fam.base = base;
    fam.w = w;
    fam.s = s;

    if (omega.is_whole_plane()) {
        // only constants map the plane into a bounded base
        fam.empty = true;
        return fam;
    }
    if (!contains(omega, w)) throw PointOutsideDomain("make_family: w outside omega");
    if (!contains(base, s)) throw PointOutsideDomain("make_family: s outside base");

    fam.inclusion_available = std::abs(s - w) <= 1e-14 && domain_subset(omega, base);

    // seed with a single zero at w
    bool have_seed = false;
    if (omega.simply_connected()) {
        if (auto R = riemann_to_unit_disk(omega)) {
            Cplx rw = R->eval(w).value;
            fam.seed = AnalyticMap::compose({AnalyticMap::mobius_to_zero(rw), *R});
            have_seed = true;
        }
    }
    if (!have_seed && omega.bounded()) {
        if (domain_subset(omega, Domain::unit_disk())) {
            fam.seed = AnalyticMap::mobius_to_zero(w);
        } else {
            Cplx lo, hi;
            omega.bounding_box(lo, hi);
            double rad = 0.5 * std::abs(hi - lo);
            fam.seed = AnalyticMap::affine(1.0 / (2.0 * rad), -w / (2.0 * rad));
        }
        have_seed = true;
    }

    // exponent basis: Laurent monomials around the hole for an annulus,
    // polynomial factors centered at w otherwise
    int m = cfg.laurent_degree;
    if (omega.kind() == Domain::Kind::Annulus) {
        fam.center = omega.center();
        for (int k = 1; k <= m; ++k) {
            fam.powers.push_back(k);
            fam.powers.push_back(-k);
        }
    } else {
        fam.center = w;
        for (int k = 1; k <= m; ++k) fam.powers.push_back(k);
    }

    // post-map D -> base sending 0 to s (catalog Riemann structure)
    if (auto RY = riemann_to_unit_disk(base)) {
        Cplx sigma = RY->eval(s).value;
        AnalyticMap post =
            AnalyticMap::compose({RY->inverse(), AnalyticMap::mobius_from_zero(sigma)});
        fam.post = post;
        fam.post_deriv0 = std::abs(post.eval(0.0).derivative);
    }

    fam.has_exp_poly = have_seed && fam.post.has_value();

    if (fam.has_exp_poly || fam.inclusion_available) {
        HurwitzValue ev = hurwitz_density(base, s, cfg.hurwitz, cache);
        fam.eta_base_s = ev.eta;
        fam.eta_base_error = ev.error_estimate;
    }
    return fam;
}

// --- admissibility -----------------------------------------------------------------

bool admissibility_check(const Candidate& h, const Domain& omega, const Domain& base, Cplx w,
                         Cplx s, int n_samples) {
    try {
        if (h.inclusion) {
            if (std::abs(w - s) > 1e-9) return false;
            if (!domain_subset(omega, base)) return false;
            return count_s_points(h.as_eval(), omega, s, n_samples) == 1;
        }
        auto [hw, dhw] = h.eval(w);
        (void)dhw;
        if (std::abs(hw - s) > 1e-9) return false;
        if (count_s_points(h.as_eval(), omega, s, n_samples) != 1) return false;
        auto samples = boundary_sample(omega, n_samples);
        for (const auto& p : samples) {
            if (std::abs(h.pre(p.z).first) > 1.0 + 1e-12) return false;
        }
        return true;
    } catch (const BoundaryTooClose&) {
        return false;
    } catch (const NonIntegerWinding&) {
        return false;
    }
}

// --- lower bound ---------------------------------------------------------------------

namespace {

struct ExpPolyObjective {
    // log objective = const_log + sum Re(theta_k bw_k) - boundary log max - log1p(margin)
    double const_log = 0.0;
    std::vector<Cplx> bw;                  // basis at w
    std::vector<double> g;                 // log|seed| at boundary samples
    std::vector<std::vector<Cplx>> B;      // [sample][k] basis at boundary samples
    double margin = 0.0;

    double boundary_logmax(const std::vector<Cplx>& theta) const {
        double m = -1e300;
        for (std::size_t j = 0; j < g.size(); ++j) {
            double e = g[j];
            for (std::size_t k = 0; k < theta.size(); ++k) {
                e += theta[k].real() * B[j][k].real() - theta[k].imag() * B[j][k].imag();
            }
            m = std::max(m, e);
        }
        return m;
    }

    double log_value(const std::vector<Cplx>& theta) const {
        double v = const_log;
        for (std::size_t k = 0; k < theta.size(); ++k)
            v += theta[k].real() * bw[k].real() - theta[k].imag() * bw[k].imag();
        return v - boundary_logmax(theta) - std::log1p(margin);
    }
};

std::vector<Cplx> unpack(const std::vector<double>& x) {
    std::vector<Cplx> theta(x.size() / 2);
    for (std::size_t k = 0; k < theta.size(); ++k) theta[k] = Cplx(x[2 * k], x[2 * k + 1]);
    return theta;
}

std::vector<double> pack(const std::vector<Cplx>& theta) {
    std::vector<double> x(theta.size() * 2);
    for (std::size_t k = 0; k < theta.size(); ++k) {
        x[2 * k] = theta[k].real();
        x[2 * k + 1] = theta[k].imag();
    }
    return x;
}

}  // namespace

LowerResult cara_lower(const Domain& omega, const Domain& base, Cplx s, Cplx w,
                       const CandidateFamily& family, const ExtremalConfig& cfg,
                       DensityCache* cache) {
    (void)cache;
    LowerResult out;
    if (family.empty) {
        out.empty_family = true;
        return out;
    }

    auto consider = [&](double value, const Candidate& cand) {
        if (!out.has_witness || value > out.value) {
            out.value = value;
            out.witness = cand;
            out.has_witness = true;
        }
    };

    if (family.inclusion_available) {
        Candidate inc;
        inc.inclusion = true;
        if (admissibility_check(inc, omega, base, w, s, cfg.boundary_samples))
            consider(family.eta_base_s, inc);  // eta_Y(w) * |id'(w)|
    }

    if (family.has_exp_poly) {
        auto samples = boundary_sample(omega, cfg.boundary_samples);
        const std::size_t K = family.powers.size();

        ExpPolyObjective obj;
        obj.margin = cfg.margin;
        obj.bw.resize(K);
        for (std::size_t k = 0; k < K; ++k) obj.bw[k] = ipow(w - family.center, family.powers[k]);
        obj.g.resize(samples.size());
        obj.B.assign(samples.size(), std::vector<Cplx>(K));
        for (std::size_t j = 0; j < samples.size(); ++j) {
            obj.g[j] = std::log(std::abs(family.seed.eval(samples[j].z).value));
            for (std::size_t k = 0; k < K; ++k)
                obj.B[j][k] = ipow(samples[j].z - family.center, family.powers[k]);
        }
        double seed_dw = std::abs(family.seed.eval(w).derivative);
        obj.const_log = std::log(family.eta_base_s) + std::log(family.post_deriv0) +
                        std::log(seed_dw);

        std::ofstream trace;
        if (!cfg.trace_csv.empty()) {
            trace.open(cfg.trace_csv, std::ios::app);
            trace << "restart,iteration,objective,boundary_logmax,winding\n";
        }

        // deterministic restarts: zero start, optional warm start, seeded randoms
        std::vector<std::vector<Cplx>> starts;
        starts.emplace_back(K, Cplx{0.0, 0.0});
        if (!cfg.warm_start.empty()) {
            std::vector<Cplx> ws(K, Cplx{0.0, 0.0});
            for (std::size_t k = 0; k < K && k < cfg.warm_start.size(); ++k)
                ws[k] = cfg.warm_start[k];
            starts.push_back(std::move(ws));
        }
        for (int r = 1; r < cfg.restarts; ++r) {
            Rng rng(Rng::derive(cfg.seed, static_cast<std::uint64_t>(r)));
            std::vector<Cplx> th(K);
            for (auto& t : th) t = 0.25 * rng.complex_normal();
            starts.push_back(std::move(th));
        }

        std::vector<Cplx> best_theta(K, Cplx{0.0, 0.0});
        double best_log = -1e300;
        int restart_id = 0;
        for (const auto& start : starts) {
            if (K == 0) {
                double lv = obj.log_value({});
                if (lv > best_log) best_log = lv;
                break;
            }
            auto fn = [&](const std::vector<double>& x) { return -obj.log_value(unpack(x)); };
            std::function<void(int, double)> tracer;
            if (trace.is_open()) {
                tracer = [&](int it, double f) {
                    auto th = unpack(pack(best_theta));
                    (void)th;
                    char buf[160];
                    std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g,1\n", restart_id, it, -f,
                                  obj.boundary_logmax(best_theta));
                    trace << buf;
                };
            }
            NelderMeadResult r =
                nelder_mead(fn, pack(start), 0.1, cfg.max_iters, 1e-12, tracer);
            if (-r.f > best_log) {
                best_log = -r.f;
                best_theta = unpack(r.x);
            }
            ++restart_id;
        }

        // finalize: rescale against a 4x-sampled, peak-corrected boundary max
        auto build_candidate = [&](const std::vector<Cplx>& theta) {
            Candidate cand;
            cand.seed = family.seed;
            cand.center = family.center;
            cand.powers = family.powers;
            cand.theta = theta;
            cand.post = family.post;
            auto fine = boundary_sample(omega, 4 * cfg.boundary_samples);
            int n_comp = 0;
            for (const auto& p : fine) n_comp = std::max(n_comp, p.component + 1);
            double logmax = -1e300;
            for (int comp = 0; comp < n_comp; ++comp) {
                std::vector<double> prof;
                for (const auto& p : fine) {
                    if (p.component != comp) continue;
                    double e = std::log(std::abs(family.seed.eval(p.z).value));
                    for (std::size_t k = 0; k < theta.size(); ++k) {
                        Cplx b = ipow(p.z - family.center, family.powers[k]);
                        e += theta[k].real() * b.real() - theta[k].imag() * b.imag();
                    }
                    prof.push_back(e);
                }
                logmax = std::max(logmax, peak_corrected_max(prof));
            }
            cand.log_rescale = logmax + std::log1p(cfg.margin);
            double logv = obj.const_log - cand.log_rescale;
            for (std::size_t k = 0; k < theta.size(); ++k)
                logv += theta[k].real() * obj.bw[k].real() - theta[k].imag() * obj.bw[k].imag();
            return std::make_pair(cand, std::exp(logv));
        };

        auto [cand, value] = build_candidate(best_theta);
        if (admissibility_check(cand, omega, base, w, s, cfg.boundary_samples)) {
            consider(value, cand);
        } else {
            // never fabricate: fall back to the certified seed candidate
            auto [cand0, value0] = build_candidate(std::vector<Cplx>(K, Cplx{0.0, 0.0}));
            if (admissibility_check(cand0, omega, base, w, s, cfg.boundary_samples))
                consider(value0, cand0);
        }
    }

    return out;
}

// --- upper bound -----------------------------------------------------------------------

UpperResult cara_upper(const Domain& omega, const Domain& base, Cplx s, Cplx w,
                       const ExtremalConfig& cfg, DensityCache* cache) {
    UpperResult r;
    if (omega.is_whole_plane()) {
        // empty-family convention: C = 0
        r.value = 0.0;
        r.source = UpperSource::none;
        return r;
    }
    HurwitzValue eta = hurwitz_density(omega, w, cfg.hurwitz, cache);
    r.value = eta.eta;
    r.source = UpperSource::hurwitz_bound;
    r.error = eta.error_estimate;
    if (is_unit_disk(base) && std::abs(s) < 1e-15) {
        double lam = hyperbolic_density(omega, w, cfg.hurwitz, cache);
        if (lam <= r.value) {
            r.value = lam;
            r.error = has_closed_form(omega) ? 0.0 : r.error;
        }
        r.source = UpperSource::min_of_both;
    }
    return r;
}

BoundPair cara_bounds(const Domain& omega, const Domain& base, Cplx s, Cplx w,
                      const ExtremalConfig& cfg, DensityCache* cache) {
    DensityCache local;
    DensityCache* c = cache ? cache : &local;
    CandidateFamily fam = make_family(omega, base, s, w, cfg, c);
    LowerResult lo = cara_lower(omega, base, s, w, fam, cfg, c);
    UpperResult up = cara_upper(omega, base, s, w, cfg, c);

    BoundPair out;
    out.lower = lo.value;
    out.upper = up.value;
    out.empty_family = lo.empty_family;
    out.has_witness = lo.has_witness;
    out.witness = lo.witness;
    out.upper_source = up.source;
    out.upper_error = up.error;

    if (out.lower > out.upper + 1e-9) {
        // a certified lower bound may exceed the estimated upper bound only
        // within the numerical slack of the two estimates
        if (out.lower <= out.upper * (1.0 + 1e-4) + up.error) {
            out.lower = out.upper;
        } else {
            throw std::runtime_error("cara_bounds: certified lower bound " +
                                     std::to_string(out.lower) + " exceeds upper bound " +
                                     std::to_string(out.upper));
        }
    }
    return out;
}

// --- Kobayashi-side upper estimator --------------------------------------------------------

namespace {

struct KobayashiShape {
    Cplx w;
    std::vector<int> powers;

    // g(z) = w + c z exp(sum theta_k z^k), params = (mu, phi, Re/Im theta)
    std::pair<Cplx, Cplx> eval(const std::vector<double>& p, Cplx z) const {
        Cplx c = std::polar(std::exp(p[0]), p[1]);
        Cplx q{0.0, 0.0}, dq{0.0, 0.0};
        for (std::size_t k = 0; k < powers.size(); ++k) {
            Cplx th(p[2 + 2 * k], p[3 + 2 * k]);
            q += th * ipow(z, powers[k]);
            dq += th * static_cast<double>(powers[k]) * ipow(z, powers[k] - 1);
        }
        Cplx e = std::exp(q);
        return {w + c * z * e, c * e * (1.0 + z * dq)};
    }
};

}  // namespace

KobayashiBound kobayashi_upper(const Domain& omega, const Domain& base, Cplx w,
                               const ExtremalConfig& cfg, DensityCache* cache) {
    (void)cache;
    KobayashiBound out;
    if (!contains(omega, w)) throw PointOutsideDomain("kobayashi_upper: w outside omega");
    if (!riemann_to_unit_disk(base))
        throw UnsupportedDomain("kobayashi_upper: base domain outside the conformal catalog");
    if (omega.is_whole_plane())
        throw UnsupportedDomain("kobayashi_upper: omega must be bounded or catalog");

    // working in disk coordinates sigma = R_Y(s) = 0: value = 2 / |g'(0)|
    auto consider = [&](double value, const std::vector<Cplx>& witness) {
        if (value < out.value) {
            out.value = value;
            out.witness = witness;
            out.empty_family = false;
        }
    };

    // catalog Riemann candidate for simply connected omega: exact extremal
    if (omega.simply_connected()) {
        if (auto RO = riemann_to_unit_disk(omega)) {
            Cplx rw = RO->eval(w).value;
            AnalyticMap g = AnalyticMap::compose(
                {RO->inverse(), AnalyticMap::mobius_from_zero(rw)});
            bool ok = true;
            try {
                ok = count_s_points(g, Domain::unit_disk(), w, cfg.boundary_samples) == 1;
            } catch (const std::runtime_error&) {
                ok = false;
            }
            if (ok) consider(2.0 / std::abs(g.eval(0.0).derivative), {});
        }
    }

    if (!omega.bounded()) return out;

    // parametrized family g(z) = w + c z exp(poly(z)), certified containment
    KobayashiShape shape;
    shape.w = w;
    for (int k = 1; k <= std::max(1, cfg.laurent_degree); ++k) shape.powers.push_back(k);

    const double clearance = boundary_distance(omega, w);
    auto disk_samples = boundary_sample(Domain::unit_disk(), cfg.boundary_samples);

    std::vector<Cplx> hole_reps;
    if (omega.kind() == Domain::Kind::Annulus) hole_reps.push_back(omega.center());
    for (Cplx p : omega.punctures()) hole_reps.push_back(p);

    auto certified = [&](const std::vector<double>& p) {
        for (const auto& bp : disk_samples) {
            Cplx v = shape.eval(p, bp.z).first;
            if (!contains(omega, v)) return false;
            if (signed_distance(omega, v) > -1e-9) return false;
        }
        try {
            MapEval ge = [&](Cplx z) { return shape.eval(p, z); };
            if (count_s_points(ge, Domain::unit_disk(), w, cfg.boundary_samples) != 1)
                return false;
            for (Cplx q : hole_reps)
                if (count_s_points(ge, Domain::unit_disk(), q, cfg.boundary_samples) != 0)
                    return false;
        } catch (const std::runtime_error&) {
            return false;
        }
        return true;
    };

    auto penalty_obj = [&](const std::vector<double>& p) {
        double pen = 0.0;
        for (const auto& bp : disk_samples) {
            Cplx v = shape.eval(p, bp.z).first;
            double sd = signed_distance(omega, v);
            if (sd > -1e-9) pen += (sd + 1e-9) / clearance + 0.1;
        }
        if (pen == 0.0) {
            try {
                MapEval ge = [&](Cplx z) { return shape.eval(p, z); };
                if (count_s_points(ge, Domain::unit_disk(), w, 256) != 1) pen += 10.0;
                for (Cplx q : hole_reps)
                    if (count_s_points(ge, Domain::unit_disk(), q, 256) != 0) pen += 10.0;
            } catch (const std::runtime_error&) {
                pen += 10.0;
            }
        }
        return -p[0] + 50.0 * pen;  // maximize log|c| subject to containment
    };

    const std::size_t dim = 2 + 2 * shape.powers.size();
    for (int r = 0; r < cfg.restarts; ++r) {
        std::vector<double> x0(dim, 0.0);
        x0[0] = std::log(0.5 * clearance);
        if (r > 0) {
            Rng rng(Rng::derive(cfg.seed ^ 0xc0bau, static_cast<std::uint64_t>(r)));
            x0[1] = rng.uniform(0.0, 2.0 * M_PI);
            for (std::size_t k = 2; k < dim; ++k) x0[k] = 0.2 * rng.normal();
        }
        NelderMeadResult nm = nelder_mead(penalty_obj, x0, 0.15, cfg.max_iters);
        std::vector<double> p = nm.x;
        // shrink toward w until the certificate holds
        for (int shrink = 0; shrink < 60 && !certified(p); ++shrink) p[0] -= 0.05;
        if (!certified(p)) continue;
        double dg0 = std::abs(shape.eval(p, 0.0).second);
        if (dg0 <= 0.0) continue;
        std::vector<Cplx> witness;
        witness.push_back(std::polar(std::exp(p[0]), p[1]));
        for (std::size_t k = 0; k < shape.powers.size(); ++k)
            witness.push_back(Cplx(p[2 + 2 * k], p[3 + 2 * k]));
        consider(2.0 / dg0, witness);
    }

    return out;
}

}  // namespace metriclab
