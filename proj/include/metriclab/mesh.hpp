#pragma once

#include <optional>
#include <vector>

#include "metriclab/domain.hpp"

namespace metriclab {

// Roles of mesh nodes in the Liouville solve.
//   CartSolve  - Cartesian node carrying a discrete curvature equation
//   CartCollar - Cartesian node within 1.5h of the (non-puncture) boundary,
//                Dirichlet data u = -log boundary_distance
//   CartGhost  - Cartesian node next to a puncture cut, value interpolated
//                from the polar patch
//   PolarGhost - outermost patch ring, value interpolated from the Cartesian grid
//   PolarSolve - patch ring node carrying the log-polar curvature equation
enum class NodeRole { CartSolve, CartCollar, CartGhost, PolarGhost, PolarSolve };

struct MeshNode {
    Cplx z;
    NodeRole role;
    int ix = -1, iy = -1;   // Cartesian lattice index
    int patch = -1;         // patch index for polar nodes
    int ring = -1, kphi = -1;
    double bdist = 0.0;     // distance to the full boundary (punctures included)
};

// Log-polar patch around a puncture: rings at t_j = t0 - j*dt,
// j = 0..n_rings-1, with n_phi equally spaced angles per ring.
struct PolarPatch {
    Cplx center;
    double t0 = 0.0;      // log of outermost ring radius
    double dt = 0.0;
    int n_rings = 0;
    int n_phi = 0;
    int base_node = 0;    // node id of (ring 0, kphi 0)

    double rho_top() const { return std::exp(t0); }
    double rho_min() const { return std::exp(t0 - dt * (n_rings - 1)); }
    double ring_radius(int j) const { return std::exp(t0 - dt * j); }
    int node_id(int j, int k) const { return base_node + j * n_phi + k; }
};

struct MeshOptions {
    int n_phi = 64;                 // angular resolution of polar patches
    double collar_width = 1.5;      // in units of h
    double cut_radius = 4.4;        // Cartesian nodes are dropped below this, in units of h
    double patch_top = 8.0;         // rho_top in units of h
    double rho_min_divisor = 64.0;  // rho_min = h / divisor
    double clearance_factor = 0.4;  // patch must fit in this fraction of the clearance
};

// Interpolation stencil: value = sum_i weight[i] * u[node[i]].
struct InterpStencil {
    std::vector<int> node;
    std::vector<double> weight;
    bool complete = false;
};

class MeshGrid {
public:
    const Domain& domain() const { return domain_; }
    double spacing() const { return h_; }
    const std::vector<MeshNode>& nodes() const { return nodes_; }
    const std::vector<PolarPatch>& patches() const { return patches_; }
    std::size_t cartesian_count() const { return n_cartesian_; }

    // Cartesian node lookup; -1 when the lattice position carries no node
    int cart_node(int ix, int iy) const;

    // bilinear stencil of the Cartesian cell containing z (incomplete when a
    // corner is missing)
    InterpStencil cart_stencil(Cplx z) const;

    // biquadratic 3x3 stencil centered at the nearest lattice node
    InterpStencil cart_stencil_quadratic(Cplx z) const;

    // log-polar bilinear stencil within patch p (angle periodic); incomplete
    // when log|z - c| falls outside the ring range
    InterpStencil polar_stencil(int p, Cplx z) const;

    // patch whose inner region covers z (|z-c| < coverage_factor * rho_top); -1 if none
    int patch_covering(Cplx z, double coverage_factor = 0.5) const;

    friend MeshGrid mesh(const Domain& d, double h, std::optional<Cplx> puncture_focus,
                         const MeshOptions& opt);

private:
    Domain domain_ = Domain::unit_disk();
    double h_ = 0.0;
    Cplx lattice_origin_{0.0, 0.0};
    int nx_ = 0, ny_ = 0;
    std::vector<MeshNode> nodes_;
    std::vector<int> cart_index_;  // nx*ny lattice -> node id or -1
    std::vector<PolarPatch> patches_;
    std::size_t n_cartesian_ = 0;
};

// Build a grid of target spacing h covering the bounded domain d. Punctures
// (and the optional focus, which must be a puncture) receive log-polar
// patches. Throws MeshTooCoarse when fewer than 100 interior nodes result or
// when a puncture has insufficient clearance for the patch at this spacing;
// UnsupportedDomain for unbounded domains.
MeshGrid mesh(const Domain& d, double h, std::optional<Cplx> puncture_focus = std::nullopt,
              const MeshOptions& opt = {});

}  // namespace metriclab
