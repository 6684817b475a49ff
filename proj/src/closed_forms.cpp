#include "metriclab/closed_forms.hpp"

#include <cmath>

#include "metriclab/errors.hpp"

namespace metriclab {

bool has_closed_form(const Domain& d) {
    switch (d.kind()) {
        case Domain::Kind::Disk:
        case Domain::Kind::HalfPlane:
        case Domain::Kind::Strip:
        case Domain::Kind::PuncturedDisk:
        case Domain::Kind::Annulus:
            return true;
        default:
            return false;
    }
}

DensityValue hyperbolic_closed_form(const Domain& d, Cplx z) {
    if (!contains(d, z))
        throw PointOutsideDomain("hyperbolic_closed_form: point not in " + d.describe());
    switch (d.kind()) {
        case Domain::Kind::Disk: {
            double R = d.radius();
            double r = std::abs(z - d.center());
            return {2.0 * R / (R * R - r * r), DensitySource::closed_form};
        }
        case Domain::Kind::HalfPlane:
            return {1.0 / boundary_distance(d, z), DensitySource::closed_form};
        case Domain::Kind::Strip: {
            double a = d.width();
            return {(M_PI / a) / std::sin(M_PI * z.imag() / a), DensitySource::closed_form};
        }
        case Domain::Kind::PuncturedDisk: {
            double rho = std::abs(z - d.center()) / d.radius();
            // 1/(|w| log(1/|w|)) on the unit punctured disk, rescaled by 1/R
            return {1.0 / (rho * std::log(1.0 / rho)) / d.radius(), DensitySource::closed_form};
        }
        case Domain::Kind::Annulus: {
            double q = d.inner_radius() / d.outer_radius();
            double rho = std::abs(z - d.center()) / d.outer_radius();
            double v = M_PI / (rho * std::log(1.0 / q) *
                               std::sin(M_PI * std::log(rho) / std::log(q)));
            return {v / d.outer_radius(), DensitySource::closed_form};
        }
        default:
            throw UnsupportedDomain("no closed-form hyperbolic density for " + d.describe());
    }
}

DensityFn hyperbolic_closed_form_fn(const Domain& d) {
    if (!has_closed_form(d))
        throw UnsupportedDomain("no closed-form hyperbolic density for " + d.describe());
    return [d](Cplx z) { return hyperbolic_closed_form(d, z).value; };
}

}  // namespace metriclab
