#pragma once

#include "metriclab/analytic_map.hpp"
#include "metriclab/domain.hpp"

namespace metriclab {

enum class DensitySource { closed_form, pde, transported, extremal_bound };

struct DensityValue {
    double value = 0.0;
    DensitySource source = DensitySource::closed_form;
};

// Hyperbolic density with curvature -1 normalization (lambda_D(0) = 2) for
// the catalog: Disk, HalfPlane, Strip, PuncturedDisk, Annulus. Throws
// UnsupportedDomain otherwise and PointOutsideDomain when z is not interior.
DensityValue hyperbolic_closed_form(const Domain& d, Cplx z);

// convenience: the density of d as a function
DensityFn hyperbolic_closed_form_fn(const Domain& d);

// whether hyperbolic_closed_form supports d
bool has_closed_form(const Domain& d);

}  // namespace metriclab
