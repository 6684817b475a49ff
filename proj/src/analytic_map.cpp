#include "metriclab/analytic_map.hpp"

#include <cmath>

#include "metriclab/errors.hpp"
#include "metriclab/rng.hpp"

namespace metriclab {

AnalyticMap AnalyticMap::mobius(Cplx a, Cplx b, Cplx c, Cplx d) {
    if (std::abs(a * d - b * c) < 1e-15)
        throw NonConformalMap("mobius: ad - bc must be nonzero");
    AnalyticMap m;
    m.kind_ = Kind::Mobius;
    m.a_ = a;
    m.b_ = b;
    m.c_ = c;
    m.d_ = d;
    return m;
}

AnalyticMap AnalyticMap::exp_map() {
    AnalyticMap m;
    m.kind_ = Kind::Exp;
    return m;
}

AnalyticMap AnalyticMap::log_map(int branch) {
    AnalyticMap m;
    m.kind_ = Kind::Log;
    m.branch_ = branch;
    return m;
}

AnalyticMap AnalyticMap::power(double exponent) {
    if (exponent == 0.0) throw NonConformalMap("power: zero exponent");
    AnalyticMap m;
    m.kind_ = Kind::Power;
    m.exponent_ = exponent;
    return m;
}

AnalyticMap AnalyticMap::affine(Cplx scale, Cplx shift) {
    if (std::abs(scale) == 0.0) throw NonConformalMap("affine: zero scale");
    AnalyticMap m;
    m.kind_ = Kind::Affine;
    m.a_ = scale;
    m.b_ = shift;
    return m;
}

AnalyticMap AnalyticMap::identity() { return affine(1.0, 0.0); }

AnalyticMap AnalyticMap::compose(std::vector<AnalyticMap> maps) {
    if (maps.empty()) return identity();
    if (maps.size() == 1) return maps.front();
    AnalyticMap m;
    m.kind_ = Kind::Composition;
    // store in application order (innermost first)
    std::vector<AnalyticMap> parts(maps.rbegin(), maps.rend());
    m.parts_ = std::make_shared<const std::vector<AnalyticMap>>(std::move(parts));
    return m;
}

AnalyticMap AnalyticMap::mobius_to_zero(Cplx a) {
    return mobius(1.0, -a, -std::conj(a), 1.0);
}

AnalyticMap AnalyticMap::mobius_from_zero(Cplx s) {
    return mobius(1.0, s, std::conj(s), 1.0);
}

AnalyticMap AnalyticMap::cayley() { return mobius(1.0, Cplx(0, -1), 1.0, Cplx(0, 1)); }

AnalyticMap::Eval AnalyticMap::eval(Cplx z) const {
    switch (kind_) {
        case Kind::Mobius: {
            Cplx den = c_ * z + d_;
            return {(a_ * z + b_) / den, (a_ * d_ - b_ * c_) / (den * den)};
        }
        case Kind::Exp: {
            Cplx e = std::exp(z);
            return {e, e};
        }
        case Kind::Log: {
            Cplx v = std::log(z) + Cplx(0.0, 2.0 * M_PI * branch_);
            return {v, 1.0 / z};
        }
        case Kind::Power: {
            Cplx v = std::pow(z, exponent_);
            return {v, exponent_ * std::pow(z, exponent_ - 1.0)};
        }
        case Kind::Affine:
            return {a_ * z + b_, a_};
        case Kind::Composition: {
            Cplx value = z;
            Cplx deriv{1.0, 0.0};
            for (const auto& part : *parts_) {
                Eval e = part.eval(value);
                deriv *= e.derivative;
                value = e.value;
            }
            return {value, deriv};
        }
    }
    return {z, {1.0, 0.0}};
}

AnalyticMap AnalyticMap::inverse() const {
    switch (kind_) {
        case Kind::Mobius:
            return mobius(d_, -b_, -c_, a_);
        case Kind::Exp:
            return log_map(0);
        case Kind::Log:
            return exp_map();
        case Kind::Power:
            return power(1.0 / exponent_);
        case Kind::Affine:
            return affine(1.0 / a_, -b_ / a_);
        case Kind::Composition: {
            std::vector<AnalyticMap> inv;  // mathematical order for compose()
            for (const auto& part : *parts_) inv.push_back(part.inverse());
            return compose(std::move(inv));
        }
    }
    throw NonConformalMap("inverse: unsupported map kind");
}

AnalyticMap& AnalyticMap::with_domains(Domain source, Domain target, int probes,
                                       std::uint64_t seed) {
    Rng rng(seed);
    Cplx lo, hi;
    bool boxed = true;
    try {
        source.bounding_box(lo, hi);
    } catch (const UnsupportedDomain&) {
        boxed = false;
    }
    int done = 0, attempts = 0;
    while (done < probes && attempts < probes * 50) {
        ++attempts;
        Cplx z;
        if (boxed) {
            z = Cplx(rng.uniform(lo.real(), hi.real()), rng.uniform(lo.imag(), hi.imag()));
        } else if (source.kind() == Domain::Kind::Strip) {
            z = Cplx(rng.uniform(-3.0, 3.0), rng.uniform(0.0, source.width()));
        } else {  // half-plane
            Cplx dir = source.hp_normal() * Cplx(0, -1);
            z = source.hp_origin() + rng.uniform(-3.0, 3.0) * dir +
                rng.uniform(1e-3, 3.0) * source.hp_normal();
        }
        if (!contains(source, z)) continue;
        ++done;
        Eval e = eval(z);
        if (!contains(target, e.value))
            throw ConfigError("analytic map does not send its source into its target");
        if (std::abs(e.derivative) < 1e-14)
            throw NonConformalMap("analytic map has vanishing derivative on its source");
    }
    source_ = std::move(source);
    target_ = std::move(target);
    return *this;
}

std::optional<AnalyticMap> riemann_to_unit_disk(const Domain& d) {
    switch (d.kind()) {
        case Domain::Kind::Disk:
            return AnalyticMap::affine(1.0 / d.radius(), -d.center() / d.radius());
        case Domain::Kind::HalfPlane: {
            // z -> i (z - p)/n lands in the upper half-plane, then Cayley
            Cplx n = d.hp_normal();
            return AnalyticMap::compose(
                {AnalyticMap::cayley(), AnalyticMap::affine(Cplx(0, 1) / n,
                                                            -Cplx(0, 1) * d.hp_origin() / n)});
        }
        case Domain::Kind::Strip: {
            // rescale to width pi, exponentiate into the upper half-plane, Cayley
            double a = M_PI / d.width();
            return AnalyticMap::compose(
                {AnalyticMap::cayley(), AnalyticMap::exp_map(), AnalyticMap::affine(a, 0.0)});
        }
        default:
            return std::nullopt;
    }
}

DensityFn transport(const AnalyticMap& m, DensityFn lambda_source, int probes,
                    std::uint64_t seed) {
    if (m.source()) {
        // spot-check conformality on the source
        AnalyticMap probe = m;
        probe.with_domains(*m.source(), m.target() ? *m.target() : Domain::whole_plane(), probes,
                           seed);
    }
    AnalyticMap inv = m.inverse();
    AnalyticMap fwd = m;
    return [fwd, inv, lambda_source](Cplx zeta) {
        Cplx z = inv.eval(zeta).value;
        Cplx dm = fwd.eval(z).derivative;
        double mod = std::abs(dm);
        if (mod < 1e-14) throw NonConformalMap("transport: derivative vanishes");
        return lambda_source(z) / mod;
    };
}

}  // namespace metriclab
