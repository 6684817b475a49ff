#pragma once

#include <string>
#include <vector>

#include "metriclab/extremal.hpp"
#include "metriclab/liouville.hpp"

namespace metriclab {

struct PathResult {
    double value = 0.0;
    std::vector<Cplx> path;  // polyline from w1 to w2, all vertices inside the domain
    std::string density_id;
};

enum class DiagonalMode { bounds, cheap };

struct PathConfig {
    int smoothing_passes = 1;
    double endpoint_radius = 1.6;   // connection radius for query points, in h units
    ExtremalConfig extremal{};      // used by bounds-mode diagonal fields
    int eta_radial_samples = 8;     // extraction samples for multiply connected bases
};

// Diagonal field delta(w) = C_Omega^{Y,w}(w) sampled on a grid over Omega:
// `cheap` evaluates the inclusion candidate eta_Y(w) (a certified lower bound
// for delta when Omega is contained in Y), `bounds` runs the optimizer per
// node. Nodes closer than 2 spacings to the boundary take the ratio-scaled
// value of the nearest interior node.
DensityField diagonal_density_field(const Domain& omega, const Domain& base, int resolution,
                                    DiagonalMode mode, const PathConfig& cfg = {},
                                    DensityCache* cache = nullptr);

// Shortest-path distance on the 8-neighbor grid graph of the field's mesh,
// edge weight = mean endpoint density x length, followed by a local
// shortcut-smoothing pass that never increases the integral. Query points are
// joined to nearby grid nodes, so the returned path starts and ends exactly
// at them. Symmetric by construction (queries are canonically ordered).
PathResult distance(const DensityField& field, Cplx w1, Cplx w2, const PathConfig& cfg = {});

// Distance over a field of Hurwitz densities eta_Y: closed form for simply
// connected bases, radially sampled extraction values for annuli.
PathResult hurwitz_distance(const Domain& base, Cplx w1, Cplx w2, int resolution,
                            const PathConfig& cfg = {}, DensityCache* cache = nullptr);

struct MetricAxiomReport {
    int triples = 0;
    int symmetry_violations = 0;
    int triangle_violations = 0;
    double worst_triangle_margin = 0.0;  // min of (d(a,b)+d(b,c)-d(a,c))/d(a,c)
    double min_distance = 0.0;           // min pairwise distance seen (positivity)
    std::vector<std::string> notes;
};

// Pseudo-metric axioms on sampled triples: exact symmetry, triangle inequality
// within 1% of graph discretization slack. Violations are reported, never thrown.
MetricAxiomReport metric_axiom_check(const DensityField& field, int n_triples,
                                     std::uint64_t seed, const PathConfig& cfg = {});

}  // namespace metriclab
