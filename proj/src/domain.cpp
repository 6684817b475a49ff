#include "metriclab/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "metriclab/errors.hpp"
#include "metriclab/rng.hpp"

namespace metriclab {

namespace {

double dist(Cplx a, Cplx b) { return std::abs(a - b); }

}  // namespace

// --- constructors ------------------------------------------------------------

Domain Domain::disk(Cplx center, double radius, std::string label) {
    if (!(radius > 0.0)) throw ConfigError("disk radius must be positive");
    Domain d;
    d.kind_ = Kind::Disk;
    d.center_ = center;
    d.radius_ = radius;
    d.label_ = std::move(label);
    return d;
}

Domain Domain::unit_disk() { return disk({0.0, 0.0}, 1.0, "unit_disk"); }

Domain Domain::half_plane(Cplx origin, Cplx inward_normal, std::string label) {
    double n = std::abs(inward_normal);
    if (!(n > 0.0)) throw ConfigError("half-plane normal must be nonzero");
    Domain d;
    d.kind_ = Kind::HalfPlane;
    d.center_ = origin;
    d.normal_ = inward_normal / n;
    d.label_ = std::move(label);
    return d;
}

Domain Domain::upper_half_plane() { return half_plane({0.0, 0.0}, {0.0, 1.0}, "upper_half_plane"); }

Domain Domain::strip(double width, std::string label) {
    if (!(width > 0.0)) throw ConfigError("strip width must be positive");
    Domain d;
    d.kind_ = Kind::Strip;
    d.width_ = width;
    d.label_ = std::move(label);
    return d;
}

Domain Domain::annulus(double inner, double outer, Cplx center, std::string label) {
    if (!(0.0 < inner && inner < outer)) throw ConfigError("annulus requires 0 < r < R");
    Domain d;
    d.kind_ = Kind::Annulus;
    d.center_ = center;
    d.inner_ = inner;
    d.radius_ = outer;
    d.label_ = std::move(label);
    return d;
}

Domain Domain::punctured_disk(Cplx center, double radius, std::string label) {
    if (!(radius > 0.0)) throw ConfigError("punctured disk radius must be positive");
    Domain d;
    d.kind_ = Kind::PuncturedDisk;
    d.center_ = center;
    d.radius_ = radius;
    d.label_ = std::move(label);
    return d;
}

Domain Domain::punctured(Domain base, Cplx puncture, std::string label) {
    if (!contains(base, puncture))
        throw ConfigError("puncture must lie strictly inside the base domain");
    if (boundary_distance(base, puncture) <= 0.0)
        throw ConfigError("puncture must have positive boundary distance");
    Domain d;
    d.kind_ = Kind::Punctured;
    d.puncture_ = puncture;
    d.base_ = std::make_shared<const Domain>(std::move(base));
    d.label_ = label.empty() ? d.base_->label() + "_punctured" : std::move(label);
    return d;
}

Domain Domain::generic(GenericSpec spec, std::string label) {
    Domain d;
    d.kind_ = Kind::Generic;
    d.generic_ = std::make_shared<const GenericSpec>(std::move(spec));
    d.label_ = std::move(label);
    return d;
}

Domain Domain::whole_plane() {
    Domain d;
    d.kind_ = Kind::WholePlane;
    d.label_ = "whole_plane";
    return d;
}

bool Domain::bounded() const {
    switch (kind_) {
        case Kind::Disk:
        case Kind::Annulus:
        case Kind::PuncturedDisk:
            return true;
        case Kind::Punctured:
            return base_->bounded();
        case Kind::Generic:
            return std::abs(generic_->bbox_hi - generic_->bbox_lo) > 0.0;
        default:
            return false;
    }
}

bool Domain::simply_connected() const {
    switch (kind_) {
        case Kind::Disk:
        case Kind::HalfPlane:
        case Kind::Strip:
            return true;
        case Kind::Annulus:
        case Kind::PuncturedDisk:
        case Kind::Punctured:
            return false;
        case Kind::Generic:
            return generic_->simply_connected;
        case Kind::WholePlane:
            return true;
    }
    return false;
}

std::vector<Cplx> Domain::punctures() const {
    switch (kind_) {
        case Kind::PuncturedDisk:
            return {center_};
        case Kind::Punctured: {
            auto p = base_->punctures();
            p.push_back(puncture_);
            return p;
        }
        default:
            return {};
    }
}

void Domain::bounding_box(Cplx& lo, Cplx& hi) const {
    switch (kind_) {
        case Kind::Disk:
        case Kind::PuncturedDisk:
        case Kind::Annulus:
            lo = center_ - Cplx(radius_, radius_);
            hi = center_ + Cplx(radius_, radius_);
            return;
        case Kind::Punctured:
            base_->bounding_box(lo, hi);
            return;
        case Kind::Generic:
            lo = generic_->bbox_lo;
            hi = generic_->bbox_hi;
            if (!(hi.real() > lo.real() && hi.imag() > lo.imag()))
                throw UnsupportedDomain("generic domain without a bounding box");
            return;
        default:
            throw UnsupportedDomain("bounding box of an unbounded domain: " + describe());
    }
}

int Domain::boundary_component_count() const {
    switch (kind_) {
        case Kind::Disk:
        case Kind::HalfPlane:
        case Kind::PuncturedDisk:
            return kind_ == Kind::PuncturedDisk ? 1 : 1;
        case Kind::Strip:
            return 2;
        case Kind::Annulus:
            return 2;
        case Kind::Punctured:
            return base_->boundary_component_count();
        case Kind::Generic:
            return static_cast<int>(generic_->curves.size());
        case Kind::WholePlane:
            return 0;
    }
    return 0;
}

std::string Domain::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::Disk:
            os << "Disk(c=" << center_ << ", R=" << radius_ << ")";
            break;
        case Kind::HalfPlane:
            os << "HalfPlane(p=" << center_ << ", n=" << normal_ << ")";
            break;
        case Kind::Strip:
            os << "Strip(w=" << width_ << ")";
            break;
        case Kind::Annulus:
            os << "Annulus(r=" << inner_ << ", R=" << radius_ << ", c=" << center_ << ")";
            break;
        case Kind::PuncturedDisk:
            os << "PuncturedDisk(c=" << center_ << ", R=" << radius_ << ")";
            break;
        case Kind::Punctured:
            os << "Punctured(" << base_->describe() << ", p=" << puncture_ << ")";
            break;
        case Kind::Generic:
            os << "Generic(" << label_ << ")";
            break;
        case Kind::WholePlane:
            os << "WholePlane";
            break;
    }
    return os.str();
}

// --- operations ----------------------------------------------------------------

bool contains(const Domain& d, Cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    switch (d.kind()) {
        case Domain::Kind::Disk:
            return dist(z, d.center()) < d.radius();
        case Domain::Kind::HalfPlane: {
            Cplx v = z - d.hp_origin();
            return v.real() * d.hp_normal().real() + v.imag() * d.hp_normal().imag() > 0.0;
        }
        case Domain::Kind::Strip:
            return z.imag() > 0.0 && z.imag() < d.width();
        case Domain::Kind::Annulus: {
            double r = dist(z, d.center());
            return r > d.inner_radius() && r < d.outer_radius();
        }
        case Domain::Kind::PuncturedDisk: {
            double r = dist(z, d.center());
            return r > 0.0 && r < d.radius();
        }
        case Domain::Kind::Punctured:
            return z != d.puncture() && contains(d.base(), z);
        case Domain::Kind::Generic:
            return d.generic_spec().membership(z);
        case Domain::Kind::WholePlane:
            return true;
    }
    return false;
}

double boundary_distance(const Domain& d, Cplx z) {
    if (!contains(d, z)) throw PointOutsideDomain("boundary_distance: point not in " + d.describe());
    switch (d.kind()) {
        case Domain::Kind::Disk:
            return d.radius() - dist(z, d.center());
        case Domain::Kind::HalfPlane: {
            Cplx v = z - d.hp_origin();
            return v.real() * d.hp_normal().real() + v.imag() * d.hp_normal().imag();
        }
        case Domain::Kind::Strip:
            return std::min(z.imag(), d.width() - z.imag());
        case Domain::Kind::Annulus: {
            double r = dist(z, d.center());
            return std::min(r - d.inner_radius(), d.outer_radius() - r);
        }
        case Domain::Kind::PuncturedDisk: {
            double r = dist(z, d.center());
            return std::min(r, d.radius() - r);
        }
        case Domain::Kind::Punctured:
            return std::min(boundary_distance(d.base(), z), dist(z, d.puncture()));
        case Domain::Kind::Generic:
            return d.generic_spec().boundary_distance(z);
        case Domain::Kind::WholePlane:
            return std::numeric_limits<double>::infinity();
    }
    return 0.0;
}

namespace {

void sample_circle(std::vector<BoundaryPoint>& out, Cplx c, double R, int n, bool ccw, int comp) {
    double ds = 2.0 * M_PI * R / n;
    for (int k = 0; k < n; ++k) {
        double t = 2.0 * M_PI * k / n;
        Cplx e = std::polar(1.0, t);
        BoundaryPoint p;
        p.z = c + R * e;
        p.tangent = ccw ? Cplx(0, 1) * e : Cplx(0, -1) * e;
        p.component = comp;
        p.ds = ds;
        out.push_back(p);
    }
}

}  // namespace

std::vector<BoundaryPoint> boundary_sample(const Domain& d, int n) {
    if (n < 1) throw ConfigError("boundary_sample: n must be positive");
    std::vector<BoundaryPoint> out;
    switch (d.kind()) {
        case Domain::Kind::Disk:
            sample_circle(out, d.center(), d.radius(), n, true, 0);
            return out;
        case Domain::Kind::PuncturedDisk:
            sample_circle(out, d.center(), d.radius(), n, true, 0);
            return out;
        case Domain::Kind::Annulus:
            sample_circle(out, d.center(), d.outer_radius(), n, true, 0);
            sample_circle(out, d.center(), d.inner_radius(), n, false, 1);
            return out;
        case Domain::Kind::HalfPlane: {
            // oriented so the domain lies on the left: rotate the inward
            // normal by -90 degrees
            Cplx dir = d.hp_normal() * Cplx(0, -1);
            double window = 64.0;
            double ds = 2.0 * window / n;
            for (int k = 0; k < n; ++k) {
                double t = -window + 2.0 * window * (k + 0.5) / n;
                out.push_back({d.hp_origin() + t * dir, dir, 0, ds});
            }
            return out;
        }
        case Domain::Kind::Strip: {
            // truncation window: integrands used here decay along the strip,
            // the tails beyond |Re| = window contribute < 1e-9
            double window = 30.0 * d.width();
            double ds = 2.0 * window / n;
            for (int k = 0; k < n; ++k) {
                double t = -window + 2.0 * window * (k + 0.5) / n;
                out.push_back({Cplx(t, 0.0), Cplx(1.0, 0.0), 0, ds});
            }
            for (int k = 0; k < n; ++k) {
                double t = window - 2.0 * window * (k + 0.5) / n;
                out.push_back({Cplx(t, d.width()), Cplx(-1.0, 0.0), 1, ds});
            }
            return out;
        }
        case Domain::Kind::Punctured:
            // bounded candidates extend over punctures, so the base contour
            // carries all the winding information (s-points at punctures are
            // handled separately by the counting code)
            return boundary_sample(d.base(), n);
        case Domain::Kind::Generic: {
            const auto& curves = d.generic_spec().curves;
            if (curves.empty())
                throw UnsupportedDomain("generic domain has no boundary curves");
            int comp = 0;
            for (const auto& c : curves) {
                for (int k = 0; k < n; ++k) {
                    double t = (k + 0.5) / n;
                    Cplx dz = c.derivative(t);
                    double m = std::abs(dz);
                    out.push_back({c.point(t), m > 0 ? dz / m : Cplx(1, 0), comp, m / n});
                }
                ++comp;
            }
            return out;
        }
        case Domain::Kind::WholePlane:
            throw UnsupportedDomain("the whole plane has no boundary");
    }
    return out;
}

Domain without_punctures(const Domain& d) {
    switch (d.kind()) {
        case Domain::Kind::Punctured:
            return without_punctures(d.base());
        case Domain::Kind::PuncturedDisk:
            return Domain::disk(d.center(), d.radius(), d.label() + "_core");
        default:
            return d;
    }
}

bool domain_subset(const Domain& inner, const Domain& outer, int probe_count) {
    if (outer.is_whole_plane()) return true;
    if (inner.is_whole_plane()) return false;

    // analytic catalog cases
    auto disk_in_disk = [](Cplx c1, double r1, Cplx c2, double r2) {
        return std::abs(c1 - c2) + r1 <= r2 + 1e-12;
    };
    using K = Domain::Kind;
    K ki = inner.kind(), ko = outer.kind();
    if ((ki == K::Disk || ki == K::Annulus || ki == K::PuncturedDisk) &&
        (ko == K::Disk || ko == K::PuncturedDisk)) {
        double r1 = (ki == K::Annulus) ? inner.outer_radius() : inner.radius();
        bool ok = disk_in_disk(inner.center(), r1, outer.center(), outer.radius());
        if (ko == K::PuncturedDisk) {
            // outer puncture must not lie inside `inner`
            ok = ok && !contains(inner, outer.center());
        }
        return ok;
    }
    // removing a point cannot change containment of an open set
    if (ki == K::Punctured) return domain_subset(inner.base(), outer, probe_count);

    // sampled fallback: boundary and interior probes of `inner` must lie in closure(outer)
    try {
        auto bs = boundary_sample(inner, std::max(32, probe_count / inner.boundary_component_count()));
        for (const auto& p : bs) {
            if (!contains(outer, p.z)) {
                // allow points exactly on the boundary of outer
                Cplx nudge = p.z * (1.0 - 1e-9);
                if (!contains(outer, nudge)) return false;
            }
        }
    } catch (const UnsupportedDomain&) {
        return false;
    }
    return true;
}

}  // namespace metriclab
