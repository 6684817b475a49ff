#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include "metriclab/closed_forms.hpp"
#include "metriclab/mesh.hpp"

namespace metriclab {

enum class Scheme { Compact4, FivePoint };

struct SolveOptions {
    double tol = 1e-8;      // scaled residual max |Delta u - e^{2u}| * h^2
    int max_iters = 200;
    int max_halvings = 30;
    Scheme scheme = Scheme::Compact4;
};

// Sampled conformal density on a mesh. Values are stored as u = log(lambda);
// interpolation is bilinear in u on the Cartesian part and bilinear in
// (log rho, phi) on polar patches, so node values are reproduced exactly and
// the puncture blow-up interpolates cleanly.
class DensityField {
public:
    DensityField(std::shared_ptr<const MeshGrid> grid, std::vector<double> log_values,
                 double residual_norm, DensitySource source);

    const MeshGrid& grid() const { return *grid_; }
    std::shared_ptr<const MeshGrid> grid_ptr() const { return grid_; }
    const std::vector<double>& log_values() const { return log_values_; }

    double residual_norm() const { return residual_norm_; }
    int newton_iterations() const { return newton_iterations_; }
    bool used_fallback() const { return used_fallback_; }
    DensitySource source() const { return source_; }

    double value_at_node(std::size_t i) const { return std::exp(log_values_[i]); }

    // interpolated density; throws PointOutsideDomain outside the meshed region
    double eval(Cplx z) const;
    double eval_log(Cplx z) const;

    // CSV columns: re,im,lambda
    void write_csv(std::ostream& os) const;

    friend DensityField solve(const MeshGrid& grid, const SolveOptions& opt);
    friend DensityField field_from_function(std::shared_ptr<const MeshGrid> grid,
                                            const DensityFn& fn, DensitySource source);

private:
    std::shared_ptr<const MeshGrid> grid_;
    std::vector<double> log_values_;
    double residual_norm_ = 0.0;
    int newton_iterations_ = 0;
    bool used_fallback_ = false;
    DensitySource source_ = DensitySource::pde;
};

// Solve the curvature equation Delta u = e^{2u}, u = log lambda, on the grid:
// collar nodes carry Dirichlet data u = -log boundary_distance, polar patches
// carry the log-polar discretization with an asymptotic closure at the
// innermost ring. Damped Newton from u0 = -log boundary_distance; nonlinear
// Gauss-Seidel fallback when a step stalls. Throws DidNotConverge.
DensityField solve(const MeshGrid& grid, const SolveOptions& opt = {});

// convenience: mesh + solve
DensityField solve_domain(const Domain& d, double h, const SolveOptions& opt = {},
                          const MeshOptions& mopt = {});

// sample a known density onto a grid (exact fields for oracles, closed forms,
// diagonal extremal fields)
DensityField field_from_function(std::shared_ptr<const MeshGrid> grid, const DensityFn& fn,
                                 DensitySource source = DensitySource::closed_form);

// module-level operation: interpolated density as a DensityValue
DensityValue field_eval(const DensityField& f, Cplx z);

}  // namespace metriclab
