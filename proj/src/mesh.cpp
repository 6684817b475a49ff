#include "metriclab/mesh.hpp"

#include <algorithm>
#include <cmath>

#include "metriclab/errors.hpp"

namespace metriclab {

int MeshGrid::cart_node(int ix, int iy) const {
    if (ix < 0 || iy < 0 || ix >= nx_ || iy >= ny_) return -1;
    return cart_index_[static_cast<std::size_t>(iy) * nx_ + ix];
}

InterpStencil MeshGrid::cart_stencil(Cplx z) const {
    InterpStencil s;
    double fx = (z.real() - lattice_origin_.real()) / h_ - 0.5;
    double fy = (z.imag() - lattice_origin_.imag()) / h_ - 0.5;
    int ix = static_cast<int>(std::floor(fx));
    int iy = static_cast<int>(std::floor(fy));
    double ax = fx - ix, ay = fy - iy;
    int ids[4] = {cart_node(ix, iy), cart_node(ix + 1, iy), cart_node(ix, iy + 1),
                  cart_node(ix + 1, iy + 1)};
    double w[4] = {(1 - ax) * (1 - ay), ax * (1 - ay), (1 - ax) * ay, ax * ay};
    for (int i = 0; i < 4; ++i) {
        if (ids[i] < 0 && w[i] > 1e-14) return s;  // incomplete
        if (ids[i] < 0) continue;
        s.node.push_back(ids[i]);
        s.weight.push_back(w[i]);
    }
    s.complete = true;
    return s;
}

InterpStencil MeshGrid::cart_stencil_quadratic(Cplx z) const {
    InterpStencil s;
    double fx = (z.real() - lattice_origin_.real()) / h_ - 0.5;
    double fy = (z.imag() - lattice_origin_.imag()) / h_ - 0.5;
    int ix = static_cast<int>(std::lround(fx));
    int iy = static_cast<int>(std::lround(fy));
    double xi = fx - ix, et = fy - iy;  // in [-1/2, 1/2]
    double wx[3] = {0.5 * xi * (xi - 1.0), 1.0 - xi * xi, 0.5 * xi * (xi + 1.0)};
    double wy[3] = {0.5 * et * (et - 1.0), 1.0 - et * et, 0.5 * et * (et + 1.0)};
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
            int id = cart_node(ix + dx, iy + dy);
            double w = wx[dx + 1] * wy[dy + 1];
            if (id < 0) {
                if (std::abs(w) > 1e-14) return s;  // incomplete
                continue;
            }
            s.node.push_back(id);
            s.weight.push_back(w);
        }
    s.complete = true;
    return s;
}

InterpStencil MeshGrid::polar_stencil(int p, Cplx z) const {
    InterpStencil s;
    const PolarPatch& pp = patches_[p];
    Cplx rel = z - pp.center;
    double rho = std::abs(rel);
    if (!(rho > 0.0)) return s;
    double t = std::log(rho);
    double jf = (pp.t0 - t) / pp.dt;  // ring coordinate, increasing inward
    if (jf < 0.0 && jf > -1e-9) jf = 0.0;
    double jmax = static_cast<double>(pp.n_rings - 1);
    if (jf > jmax && jf < jmax + 1e-9) jf = jmax;
    if (jf < 0.0 || jf > jmax) return s;
    int j = std::min(static_cast<int>(std::floor(jf)), pp.n_rings - 2);
    double aj = jf - j;
    double phi = std::arg(rel);
    if (phi < 0) phi += 2.0 * M_PI;
    double kf = phi * pp.n_phi / (2.0 * M_PI);
    int k = static_cast<int>(std::floor(kf)) % pp.n_phi;
    double ak = kf - std::floor(kf);
    int k1 = (k + 1) % pp.n_phi;
    s.node = {pp.node_id(j, k), pp.node_id(j, k1), pp.node_id(j + 1, k), pp.node_id(j + 1, k1)};
    s.weight = {(1 - aj) * (1 - ak), (1 - aj) * ak, aj * (1 - ak), aj * ak};
    s.complete = true;
    return s;
}

int MeshGrid::patch_covering(Cplx z, double coverage_factor) const {
    for (std::size_t p = 0; p < patches_.size(); ++p) {
        if (std::abs(z - patches_[p].center) < coverage_factor * patches_[p].rho_top())
            return static_cast<int>(p);
    }
    return -1;
}

MeshGrid mesh(const Domain& d, double h, std::optional<Cplx> puncture_focus,
              const MeshOptions& opt) {
    if (!(h > 0.0)) throw ConfigError("mesh: spacing must be positive");
    if (!d.bounded())
        throw UnsupportedDomain("mesh: unbounded domains are handled via closed forms only");

    std::vector<Cplx> centers = d.punctures();
    if (puncture_focus) {
        bool known = false;
        for (Cplx c : centers)
            if (std::abs(c - *puncture_focus) < 1e-14) known = true;
        if (!known)
            throw ConfigError("mesh: puncture focus must be a puncture of the domain");
    }

    // collar classification uses the boundary without punctures; the patches
    // handle the blow-up at punctures themselves
    Domain core = without_punctures(d);

    MeshGrid g;
    g.domain_ = d;
    g.h_ = h;

    Cplx lo, hi;
    d.bounding_box(lo, hi);
    g.lattice_origin_ = lo;
    g.nx_ = static_cast<int>(std::ceil((hi.real() - lo.real()) / h));
    g.ny_ = static_cast<int>(std::ceil((hi.imag() - lo.imag()) / h));
    if (g.nx_ <= 0 || g.ny_ <= 0) throw MeshTooCoarse("mesh: empty lattice");

    // patch geometry checks
    const double rho_top = opt.patch_top * h;
    for (std::size_t a = 0; a < centers.size(); ++a) {
        double clearance = boundary_distance(core, centers[a]);
        for (std::size_t b = 0; b < centers.size(); ++b)
            if (a != b) clearance = std::min(clearance, std::abs(centers[a] - centers[b]) / 2.0);
        if (rho_top > opt.clearance_factor * clearance)
            throw MeshTooCoarse("mesh: puncture clearance " + std::to_string(clearance) +
                                " too small for patch at spacing " + std::to_string(h));
    }

    auto in_cut = [&](Cplx z) {
        for (Cplx c : centers)
            if (std::abs(z - c) < opt.cut_radius * h) return true;
        return false;
    };

    g.cart_index_.assign(static_cast<std::size_t>(g.nx_) * g.ny_, -1);
    for (int iy = 0; iy < g.ny_; ++iy) {
        for (int ix = 0; ix < g.nx_; ++ix) {
            Cplx z = lo + Cplx((ix + 0.5) * h, (iy + 0.5) * h);
            if (!contains(d, z)) continue;
            if (in_cut(z)) continue;
            MeshNode node;
            node.z = z;
            node.ix = ix;
            node.iy = iy;
            node.bdist = boundary_distance(d, z);
            double core_bd = boundary_distance(core, z);
            node.role = core_bd < opt.collar_width * h ? NodeRole::CartCollar : NodeRole::CartSolve;
            g.cart_index_[static_cast<std::size_t>(iy) * g.nx_ + ix] =
                static_cast<int>(g.nodes_.size());
            g.nodes_.push_back(node);
        }
    }
    g.n_cartesian_ = g.nodes_.size();
    if (g.n_cartesian_ < 100)
        throw MeshTooCoarse("mesh: only " + std::to_string(g.n_cartesian_) +
                            " interior nodes; need at least 100");

    // mark Cartesian ghosts: solve nodes whose 9-point stencil touches a cut position
    for (std::size_t i = 0; i < g.n_cartesian_; ++i) {
        MeshNode& node = g.nodes_[i];
        if (node.role != NodeRole::CartSolve) continue;
        bool ghost = false;
        for (int dy = -1; dy <= 1 && !ghost; ++dy)
            for (int dx = -1; dx <= 1 && !ghost; ++dx) {
                if (dx == 0 && dy == 0) continue;
                if (g.cart_node(node.ix + dx, node.iy + dy) >= 0) continue;
                Cplx zn = node.z + Cplx(dx * h, dy * h);
                if (in_cut(zn) && contains(d, zn)) ghost = true;
            }
        if (ghost) node.role = NodeRole::CartGhost;
    }

    // polar patches; quarter-log2 ring spacing keeps the dyadic radii on the
    // ladder while holding radial interpolation error near the rim small
    const double dt = 0.125 * std::log(2.0);
    for (Cplx c : centers) {
        PolarPatch pp;
        pp.center = c;
        pp.t0 = std::log(rho_top);
        pp.dt = dt;
        double t_min = std::log(h / opt.rho_min_divisor);
        pp.n_rings = static_cast<int>(std::lround((pp.t0 - t_min) / dt)) + 1;
        pp.n_phi = opt.n_phi;
        pp.base_node = static_cast<int>(g.nodes_.size());
        for (int j = 0; j < pp.n_rings; ++j) {
            double rho = pp.ring_radius(j);
            for (int k = 0; k < pp.n_phi; ++k) {
                double phi = 2.0 * M_PI * k / pp.n_phi;
                MeshNode node;
                node.z = c + std::polar(rho, phi);
                node.patch = static_cast<int>(g.patches_.size());
                node.ring = j;
                node.kphi = k;
                node.role = j == 0 ? NodeRole::PolarGhost : NodeRole::PolarSolve;
                node.bdist = boundary_distance(d, node.z);
                g.nodes_.push_back(node);
            }
        }
        g.patches_.push_back(pp);
    }

    return g;
}

}  // namespace metriclab
