#include "metriclab/hurwitz.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "metriclab/errors.hpp"

namespace metriclab {

namespace {

std::string point_key(const Domain& d, Cplx z, const char* tag) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "|%s|%.17g|%.17g", tag, z.real(), z.imag());
    return d.describe() + buf;
}

// least-squares fit s ~ a + b*x, returns (a, b)
std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& s) {
    double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += s[i];
        sxx += x[i] * x[i];
        sxy += x[i] * s[i];
    }
    double det = n * sxx - sx * sx;
    double b = det != 0.0 ? (n * sxy - sx * sy) / det : 0.0;
    double a = (sy - b * sx) / n;
    return {a, b};
}

// rho -> 0 extrapolation of s(rho): fit in 1/log(1/rho) first, then the
// residual trend in rho
double extrapolate(const std::vector<double>& radii, const std::vector<double>& s,
                   double* fit_rms = nullptr) {
    std::vector<double> x(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) x[i] = 1.0 / std::log(1.0 / radii[i]);
    auto [a, b] = linear_fit(x, s);
    std::vector<double> resid(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) resid[i] = s[i] - (a + b * x[i]);
    auto [c, d] = linear_fit(radii, resid);
    if (fit_rms) {
        double rms = 0;
        for (std::size_t i = 0; i < radii.size(); ++i) {
            double r = resid[i] - (c + d * radii[i]);
            rms += r * r;
        }
        *fit_rms = std::sqrt(rms / static_cast<double>(radii.size()));
    }
    return a + c;
}

}  // namespace

std::vector<double> default_extraction_radii(double spacing) {
    std::vector<double> radii;
    for (int k = 1; k <= 5; ++k) radii.push_back(spacing / (1 << k));
    return radii;
}

ExtractionResult puncture_extraction(const DensityFn& lambda, Cplx w,
                                     const std::vector<double>& radii, int n_angles) {
    if (radii.size() < 4)
        throw ConfigError("puncture_extraction: need at least 4 radii, got " +
                          std::to_string(radii.size()));
    std::vector<double> rs(radii);
    std::sort(rs.begin(), rs.end(), std::greater<double>());

    ExtractionResult out;
    out.radii = rs;
    for (double rho : rs) {
        double acc = 0.0;
        for (int k = 0; k < n_angles; ++k) {
            Cplx zeta = w + std::polar(rho, 2.0 * M_PI * k / n_angles);
            double lam = lambda(zeta);
            if (!(lam > 0.0) || !std::isfinite(lam))
                throw ExtractionUnstable("puncture_extraction: bad density sample");
            acc += 1.0 / (rho * lam);
        }
        out.s_values.push_back(acc / n_angles + std::log(rho));
    }

    double rms_all = 0.0;
    double full = extrapolate(rs, out.s_values, &rms_all);

    // monotonicity guard: successive differences may not change sign by more
    // than 3x the fit scatter
    double span = 0.0;
    for (std::size_t i = 1; i < out.s_values.size(); ++i)
        span = std::max(span, std::abs(out.s_values[i] - out.s_values[i - 1]));
    double guard = 3.0 * std::max(rms_all, 1e-12);
    bool up = false, down = false;
    for (std::size_t i = 1; i < out.s_values.size(); ++i) {
        double d = out.s_values[i] - out.s_values[i - 1];
        if (d > guard) up = true;
        if (d < -guard) down = true;
    }
    if (up && down)
        throw ExtractionUnstable("puncture_extraction: s(rho) non-monotone beyond fit residual");

    // spread of the last two extrapolants: full set vs outermost ring dropped
    std::vector<double> rs2(rs.begin() + 1, rs.end());
    std::vector<double> sv2(out.s_values.begin() + 1, out.s_values.end());
    double dropped = rs2.size() >= 4 ? extrapolate(rs2, sv2) : full;

    out.log_r = full;
    out.error_estimate = std::abs(full - dropped) + rms_all;
    return out;
}

ExtractionResult puncture_extraction(const DensityField& field, Cplx w,
                                     std::vector<double> radii) {
    const MeshGrid& g = field.grid();
    int patch = -1;
    for (std::size_t p = 0; p < g.patches().size(); ++p)
        if (std::abs(g.patches()[p].center - w) < 1e-12) patch = static_cast<int>(p);
    if (patch < 0)
        throw ConfigError("puncture_extraction: field has no polar patch at the puncture");
    if (radii.empty()) radii = default_extraction_radii(g.spacing());
    const PolarPatch& pp = g.patches()[static_cast<std::size_t>(patch)];
    if (radii.size() < 4)
        throw ConfigError("puncture_extraction: need at least 4 radii");
    for (double rho : radii)
        if (rho < pp.rho_min() * 0.999 || rho > pp.rho_top() * 1.001)
            throw ConfigError("puncture_extraction: radius outside the polar patch");
    DensityFn fn = [&field](Cplx z) { return field.eval(z); };
    return puncture_extraction(fn, w, radii, pp.n_phi);
}

double hyperbolic_density(const Domain& d, Cplx z, const HurwitzConfig& cfg,
                          DensityCache* cache) {
    if (has_closed_form(d)) return hyperbolic_closed_form(d, z).value;
    if (!contains(d, z)) throw PointOutsideDomain("hyperbolic_density: point outside domain");
    if (!d.bounded())
        throw UnsupportedDomain("hyperbolic_density: unbounded non-catalog domain");
    std::string key = cache ? point_key(d, z, "lambda") : std::string();
    if (cache) {
        if (auto v = cache->get(key)) return *v;
    }
    DensityField f = solve_domain(d, cfg.spacing, cfg.solve, cfg.mesh);
    double v = f.eval(z);
    if (cache) cache->put(key, v);
    return v;
}

HurwitzValue hurwitz_density(const Domain& Y, Cplx w, const HurwitzConfig& cfg,
                             DensityCache* cache) {
    if (Y.is_whole_plane())
        throw UnsupportedDomain("hurwitz_density: Y must be a proper subdomain");
    if (!contains(Y, w)) throw PointOutsideDomain("hurwitz_density: w outside Y");

    std::string key = cache ? point_key(Y, w, "eta") : std::string();
    if (cache) {
        if (auto v = cache->get_hurwitz(key)) return *v;
    }

    HurwitzValue out;
    if (Y.simply_connected() && (has_closed_form(Y) || Y.bounded())) {
        // eta agrees with the hyperbolic density on simply connected domains
        double lam = hyperbolic_density(Y, w, cfg, cache);
        out.eta = lam;
        out.radius = 2.0 / lam;
        out.method = HurwitzMethod::simply_connected;
        out.error_estimate = 0.0;
    } else {
        if (!Y.bounded())
            throw UnsupportedDomain("hurwitz_density: unbounded non-catalog domain");
        Domain punct = Domain::punctured(Y, w);
        // the patch needs clearance_factor * clearance >= patch_top * h;
        // shrink the spacing when w sits close to the boundary
        double clearance = boundary_distance(without_punctures(Y), w);
        for (Cplx p : Y.punctures()) clearance = std::min(clearance, std::abs(w - p) / 2.0);
        double need = cfg.mesh.patch_top / cfg.mesh.clearance_factor * 1.02;
        double h_use = std::min(cfg.spacing, clearance / need);
        if (h_use < cfg.spacing / 4.0)
            throw UnsupportedDomain(
                "hurwitz_density: puncture clearance too small for the configured spacing");
        MeshGrid g = mesh(punct, h_use, w, cfg.mesh);
        DensityField f = solve(g, cfg.solve);
        ExtractionResult ex = puncture_extraction(f, w);
        out.radius = std::exp(ex.log_r);
        out.eta = 2.0 / out.radius;
        out.method = HurwitzMethod::extraction;
        out.error_estimate = out.eta * ex.error_estimate;
    }
    if (cache) cache->put_hurwitz(key, out);
    return out;
}

}  // namespace metriclab
