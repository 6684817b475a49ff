#include "metriclab/liouville.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <ostream>

#include "metriclab/errors.hpp"

namespace metriclab {

namespace {

// per-phi closure at the innermost patch ring: match the radial ODE solution
// u = -t - log(C - t) through (t_J, u_J) and step it one ring inward
inline double closure_level(double u_J, double t_J) {
    return t_J + std::exp(-(u_J + t_J));
}

inline double closure_value(double C, double t_next) { return -t_next - std::log(C - t_next); }

struct Assembly {
    const MeshGrid& grid;
    const SolveOptions& opt;
    std::vector<int> eq_of_node;       // -1 for Dirichlet nodes
    std::vector<int> node_of_eq;
    std::vector<double> dirichlet_u;   // collar values
    std::vector<InterpStencil> ghost_stencil;  // per node (only ghosts filled)
    std::vector<int> ghost_patch;              // patch id for CartGhost nodes
    std::vector<double> ghost_shift;   // log-singularity correction per ghost row
    int n_eq = 0;

    explicit Assembly(const MeshGrid& g, const SolveOptions& o) : grid(g), opt(o) {
        const auto& nodes = g.nodes();
        eq_of_node.assign(nodes.size(), -1);
        dirichlet_u.assign(nodes.size(), 0.0);
        ghost_stencil.resize(nodes.size());
        ghost_patch.assign(nodes.size(), -1);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (nodes[i].role == NodeRole::CartCollar) {
                dirichlet_u[i] = -std::log(nodes[i].bdist);
            } else {
                eq_of_node[i] = n_eq++;
                node_of_eq.push_back(static_cast<int>(i));
            }
        }
        // precompute interpolation stencils for ghost rows; both directions
        // interpolate v = u + log rho (the log blow-up removed), which turns
        // into a constant shift of the linear row
        ghost_shift.assign(nodes.size(), 0.0);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const MeshNode& nd = nodes[i];
            if (nd.role != NodeRole::CartGhost && nd.role != NodeRole::PolarGhost) continue;
            int best = -1;
            if (nd.role == NodeRole::CartGhost) {
                double bestd = 1e300;
                for (std::size_t p = 0; p < g.patches().size(); ++p) {
                    double dd = std::abs(nd.z - g.patches()[p].center);
                    if (dd < bestd) bestd = dd, best = static_cast<int>(p);
                }
                ghost_patch[i] = best;
                ghost_stencil[i] = g.polar_stencil(best, nd.z);
                if (!ghost_stencil[i].complete)
                    throw MeshTooCoarse("liouville: ghost node has no polar stencil");
            } else {
                double bestd = 1e300;
                for (std::size_t p = 0; p < g.patches().size(); ++p) {
                    double dd = std::abs(nd.z - g.patches()[p].center);
                    if (dd < bestd) bestd = dd, best = static_cast<int>(p);
                }
                ghost_patch[i] = best;
                ghost_stencil[i] = g.cart_stencil(nd.z);
                if (!ghost_stencil[i].complete)
                    throw MeshTooCoarse("liouville: patch rim has no Cartesian stencil");
            }
            Cplx c = g.patches()[static_cast<std::size_t>(ghost_patch[i])].center;
            const InterpStencil& s = ghost_stencil[i];
            double shift = -std::log(std::abs(nd.z - c));
            for (int q = 0; q < 4; ++q)
                shift += s.weight[q] *
                         std::log(std::abs(g.nodes()[static_cast<std::size_t>(s.node[q])].z - c));
            ghost_shift[i] = shift;
        }
    }

    double u_at(const std::vector<double>& u, int node) const {
        return eq_of_node[node] >= 0 ? u[node] : dirichlet_u[node];
    }

    // residual of one solved node; also emits Jacobian entries when trip != nullptr
    double residual(const std::vector<double>& u, int i,
                    std::vector<Eigen::Triplet<double>>* trip) const {
        const MeshNode& nd = grid.nodes()[static_cast<std::size_t>(i)];
        const double h = grid.spacing();
        const int row = eq_of_node[i];
        auto add = [&](int node, double v) {
            if (trip == nullptr) return;
            int col = eq_of_node[node];
            if (col >= 0) trip->emplace_back(row, col, v);
        };

        switch (nd.role) {
            case NodeRole::CartSolve: {
                int ax[4] = {grid.cart_node(nd.ix + 1, nd.iy), grid.cart_node(nd.ix - 1, nd.iy),
                             grid.cart_node(nd.ix, nd.iy + 1), grid.cart_node(nd.ix, nd.iy - 1)};
                for (int q : ax)
                    if (q < 0) throw MeshTooCoarse("liouville: broken Cartesian stencil");
                double uc = u_at(u, i);
                if (opt.scheme == Scheme::FivePoint) {
                    double lap = -4.0 * uc;
                    for (int q : ax) lap += u_at(u, q);
                    double f = std::exp(2.0 * uc);
                    double res = lap / (h * h) - f;
                    add(i, -4.0 / (h * h) - 2.0 * f);
                    for (int q : ax) add(q, 1.0 / (h * h));
                    return res;
                }
                int dg[4] = {
                    grid.cart_node(nd.ix + 1, nd.iy + 1), grid.cart_node(nd.ix - 1, nd.iy + 1),
                    grid.cart_node(nd.ix + 1, nd.iy - 1), grid.cart_node(nd.ix - 1, nd.iy - 1)};
                for (int q : dg)
                    if (q < 0) throw MeshTooCoarse("liouville: broken Cartesian stencil");
                double s_ax = 0, s_dg = 0, s_f = 0;
                for (int q : ax) s_ax += u_at(u, q);
                for (int q : dg) s_dg += u_at(u, q);
                double fc = std::exp(2.0 * uc);
                double res = (4.0 * s_ax + s_dg - 20.0 * uc) / (6.0 * h * h) - (2.0 / 3.0) * fc;
                for (int q : ax) {
                    double fq = std::exp(2.0 * u_at(u, q));
                    s_f += fq;
                    add(q, 4.0 / (6.0 * h * h) - fq / 6.0);
                }
                res -= s_f / 12.0;
                add(i, -20.0 / (6.0 * h * h) - (4.0 / 3.0) * fc);
                for (int q : dg) add(q, 1.0 / (6.0 * h * h));
                return res;
            }
            case NodeRole::CartGhost:
            case NodeRole::PolarGhost: {
                const InterpStencil& s = ghost_stencil[i];
                double res = u_at(u, i) - ghost_shift[i];
                add(i, 1.0);
                for (int q = 0; q < 4; ++q) {
                    res -= s.weight[q] * u_at(u, s.node[q]);
                    add(s.node[q], -s.weight[q]);
                }
                return res;
            }
            case NodeRole::PolarSolve: {
                const PolarPatch& pp = grid.patches()[static_cast<std::size_t>(nd.patch)];
                double dt = pp.dt;
                double dphi = 2.0 * M_PI / pp.n_phi;
                double t_j = pp.t0 - dt * nd.ring;
                int up = pp.node_id(nd.ring - 1, nd.kphi);
                int left = pp.node_id(nd.ring, (nd.kphi + pp.n_phi - 1) % pp.n_phi);
                int right = pp.node_id(nd.ring, (nd.kphi + 1) % pp.n_phi);
                double uc = u_at(u, i);
                double f = std::exp(2.0 * (t_j + uc));
                double radial, d_radial_dc = -2.0 / (dt * dt);
                if (nd.ring < pp.n_rings - 1) {
                    int down = pp.node_id(nd.ring + 1, nd.kphi);
                    radial = (u_at(u, up) + u_at(u, down) - 2.0 * uc) / (dt * dt);
                    add(down, 1.0 / (dt * dt));
                } else {
                    // innermost ring: virtual ring from the radial asymptotic
                    double C = closure_level(uc, t_j);
                    double u_virt = closure_value(C, t_j - dt);
                    radial = (u_at(u, up) + u_virt - 2.0 * uc) / (dt * dt);
                    double dvirt = (C - t_j) / (C - (t_j - dt));
                    d_radial_dc += dvirt / (dt * dt);
                }
                double angular =
                    (u_at(u, left) + u_at(u, right) - 2.0 * uc) / (dphi * dphi);
                add(i, d_radial_dc - 2.0 / (dphi * dphi) - 2.0 * f);
                add(up, 1.0 / (dt * dt));
                add(left, 1.0 / (dphi * dphi));
                add(right, 1.0 / (dphi * dphi));
                return radial + angular - f;
            }
            default:
                return 0.0;
        }
    }

    // scale factor: residual * scale^2 is the mesh-independent residual
    double scale2(int i) const {
        const MeshNode& nd = grid.nodes()[static_cast<std::size_t>(i)];
        if (nd.role == NodeRole::PolarSolve) {
            const PolarPatch& pp = grid.patches()[static_cast<std::size_t>(nd.patch)];
            double s = std::min(pp.dt, 2.0 * M_PI / pp.n_phi);
            return s * s;
        }
        if (nd.role == NodeRole::CartGhost || nd.role == NodeRole::PolarGhost) return 1.0;
        return grid.spacing() * grid.spacing();
    }

    double scaled_norm(const std::vector<double>& u) const {
        double m = 0.0;
        for (int e = 0; e < n_eq; ++e) {
            int i = node_of_eq[static_cast<std::size_t>(e)];
            const MeshNode& nd = grid.nodes()[static_cast<std::size_t>(i)];
            double r = residual(u, i, nullptr);
            if (nd.role == NodeRole::CartGhost || nd.role == NodeRole::PolarGhost)
                m = std::max(m, std::abs(r));  // interpolation identities
            else
                m = std::max(m, std::abs(r) * scale2(i));
        }
        return m;
    }
};

}  // namespace

DensityField::DensityField(std::shared_ptr<const MeshGrid> grid, std::vector<double> log_values,
                           double residual_norm, DensitySource source)
    : grid_(std::move(grid)),
      log_values_(std::move(log_values)),
      residual_norm_(residual_norm),
      source_(source) {}

double DensityField::eval_log(Cplx z) const {
    const MeshGrid& g = *grid_;
    if (!contains(g.domain(), z))
        throw PointOutsideDomain("field eval outside domain");
    int p = g.patch_covering(z, 0.5);
    if (p >= 0) {
        const PolarPatch& pp = g.patches()[static_cast<std::size_t>(p)];
        double rho = std::abs(z - pp.center);
        if (rho < pp.rho_min()) {
            // below the innermost ring: radial asymptotic through ring J
            double t = std::log(rho);
            double t_J = pp.t0 - pp.dt * (pp.n_rings - 1);
            double phi = std::arg(z - pp.center);
            if (phi < 0) phi += 2.0 * M_PI;
            double kf = phi * pp.n_phi / (2.0 * M_PI);
            int k = static_cast<int>(std::floor(kf)) % pp.n_phi;
            double a = kf - std::floor(kf);
            double uJ = (1.0 - a) * log_values_[pp.node_id(pp.n_rings - 1, k)] +
                        a * log_values_[pp.node_id(pp.n_rings - 1, (k + 1) % pp.n_phi)];
            double C = closure_level(uJ, t_J);
            return closure_value(C, t);
        }
        InterpStencil s = g.polar_stencil(p, z);
        if (s.complete) {
            double v = 0;
            for (int q = 0; q < 4; ++q) v += s.weight[q] * log_values_[s.node[q]];
            return v;
        }
    }
    InterpStencil s = g.cart_stencil(z);
    if (!s.complete) {
        // near a cut the Cartesian cell may be broken; fall back to the patch
        int q = g.patch_covering(z, 1.0);
        if (q >= 0) {
            InterpStencil ps = g.polar_stencil(q, z);
            if (ps.complete) {
                double v = 0;
                for (int t = 0; t < 4; ++t) v += ps.weight[t] * log_values_[ps.node[t]];
                return v;
            }
        }
        throw PointOutsideDomain("field eval outside the meshed region");
    }
    double v = 0;
    for (int q = 0; q < 4; ++q) v += s.weight[q] * log_values_[s.node[q]];
    return v;
}

double DensityField::eval(Cplx z) const { return std::exp(eval_log(z)); }

void DensityField::write_csv(std::ostream& os) const {
    os << "re,im,lambda\n";
    char buf[128];
    const auto& nodes = grid_->nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", nodes[i].z.real(),
                      nodes[i].z.imag(), std::exp(log_values_[i]));
        os << buf;
    }
}

DensityValue field_eval(const DensityField& f, Cplx z) {
    return {f.eval(z), f.source()};
}

DensityField field_from_function(std::shared_ptr<const MeshGrid> grid, const DensityFn& fn,
                                 DensitySource source) {
    std::vector<double> u(grid->nodes().size());
    for (std::size_t i = 0; i < grid->nodes().size(); ++i) {
        double v = fn(grid->nodes()[i].z);
        if (!(v > 0.0) || !std::isfinite(v))
            throw ConfigError("field_from_function: density must be positive and finite");
        u[i] = std::log(v);
    }
    return DensityField(std::move(grid), std::move(u), 0.0, source);
}

DensityField solve(const MeshGrid& grid, const SolveOptions& opt) {
    Assembly asmbl(grid, opt);
    const auto& nodes = grid.nodes();

    Domain core = without_punctures(grid.domain());

    // initial guess: boundary-distance density, puncture asymptotic on patches
    std::vector<double> u(nodes.size(), 0.0);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const MeshNode& nd = nodes[i];
        if (nd.role == NodeRole::PolarGhost || nd.role == NodeRole::PolarSolve) {
            const PolarPatch& pp = grid.patches()[static_cast<std::size_t>(nd.patch)];
            double rho = std::abs(nd.z - pp.center);
            double cap = boundary_distance(core, pp.center);
            u[i] = -std::log(rho * std::log(2.0 * cap / rho));
        } else {
            u[i] = -std::log(nd.bdist);
        }
    }
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (asmbl.eq_of_node[i] < 0) u[i] = asmbl.dirichlet_u[i];

    const int n = asmbl.n_eq;
    Eigen::VectorXd F(n), du(n);
    std::vector<Eigen::Triplet<double>> trip;
    bool fallback_used = false;

    double norm = asmbl.scaled_norm(u);
    int iter = 0;
    for (; iter < opt.max_iters && norm > opt.tol; ++iter) {
        trip.clear();
        for (int e = 0; e < n; ++e) {
            int i = asmbl.node_of_eq[static_cast<std::size_t>(e)];
            F(e) = asmbl.residual(u, i, &trip);
        }
        Eigen::SparseMatrix<double> J(n, n);
        J.setFromTriplets(trip.begin(), trip.end());
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(J);
        if (lu.info() != Eigen::Success)
            throw DidNotConverge(iter, norm, "liouville: Jacobian factorization failed");
        du = lu.solve(-F);

        double alpha = 1.0;
        std::vector<double> trial(u);
        double best = norm;
        bool accepted = false;
        for (int halving = 0; halving <= opt.max_halvings; ++halving) {
            for (int e = 0; e < n; ++e)
                trial[static_cast<std::size_t>(asmbl.node_of_eq[static_cast<std::size_t>(e)])] =
                    u[static_cast<std::size_t>(asmbl.node_of_eq[static_cast<std::size_t>(e)])] +
                    alpha * du(e);
            double tn = asmbl.scaled_norm(trial);
            if (tn < best * (1.0 - 1e-4 * alpha)) {
                u = trial;
                norm = tn;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            // Newton stalled: nonlinear Gauss-Seidel sweeps on the solved nodes
            fallback_used = true;
            for (int sweep = 0; sweep < 50 && norm > opt.tol; ++sweep) {
                for (int e = 0; e < n; ++e) {
                    int i = asmbl.node_of_eq[static_cast<std::size_t>(e)];
                    const MeshNode& nd = nodes[static_cast<std::size_t>(i)];
                    if (nd.role == NodeRole::CartGhost || nd.role == NodeRole::PolarGhost) {
                        const InterpStencil& s = asmbl.ghost_stencil[i];
                        double v = asmbl.ghost_shift[i];
                        for (int q = 0; q < 4; ++q)
                            v += s.weight[q] * (asmbl.eq_of_node[s.node[q]] >= 0
                                                    ? u[s.node[q]]
                                                    : asmbl.dirichlet_u[s.node[q]]);
                        u[static_cast<std::size_t>(i)] = v;
                        continue;
                    }
                    // scalar Newton on node i
                    for (int it2 = 0; it2 < 3; ++it2) {
                        double r = asmbl.residual(u, i, nullptr);
                        double eps = 1e-7;
                        u[static_cast<std::size_t>(i)] += eps;
                        double r2 = asmbl.residual(u, i, nullptr);
                        u[static_cast<std::size_t>(i)] -= eps;
                        double drdu = (r2 - r) / eps;
                        if (std::abs(drdu) < 1e-30) break;
                        double step = -r / drdu;
                        step = std::clamp(step, -0.5, 0.5);
                        u[static_cast<std::size_t>(i)] += step;
                    }
                }
                norm = asmbl.scaled_norm(u);
            }
        }
    }

    if (norm > opt.tol)
        throw DidNotConverge(iter, norm,
                             "liouville: residual " + std::to_string(norm) + " after " +
                                 std::to_string(iter) + " iterations");

    auto grid_ptr = std::make_shared<const MeshGrid>(grid);
    DensityField f(grid_ptr, std::move(u), norm, DensitySource::pde);
    f.newton_iterations_ = iter;
    f.used_fallback_ = fallback_used;
    return f;
}

DensityField solve_domain(const Domain& d, double h, const SolveOptions& opt,
                          const MeshOptions& mopt) {
    MeshGrid g = mesh(d, h, std::nullopt, mopt);
    return solve(g, opt);
}

}  // namespace metriclab
