#include "metriclab/pathmetric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "metriclab/errors.hpp"
#include "metriclab/rng.hpp"

namespace metriclab {

namespace {

// trapezoid integral of the field along the segment [a, b] with step <= h/2
double integrate_segment(const DensityField& field, Cplx a, Cplx b) {
    double len = std::abs(b - a);
    if (len == 0.0) return 0.0;
    int n = std::max(1, static_cast<int>(std::ceil(len / (0.5 * field.grid().spacing()))));
    double acc = 0.0;
    double prev = field.eval(a);
    for (int i = 1; i <= n; ++i) {
        Cplx p = a + (b - a) * (static_cast<double>(i) / n);
        double cur = field.eval(p);
        acc += 0.5 * (prev + cur) * (len / n);
        prev = cur;
    }
    return acc;
}

bool segment_inside(const Domain& d, Cplx a, Cplx b, double step) {
    double len = std::abs(b - a);
    int n = std::max(2, static_cast<int>(std::ceil(len / step)));
    for (int i = 0; i <= n; ++i) {
        Cplx p = a + (b - a) * (static_cast<double>(i) / n);
        if (!contains(d, p)) return false;
    }
    return true;
}

struct Graph {
    const DensityField& field;
    const MeshGrid& grid;
    std::vector<int> cart_nodes;          // node ids participating in the graph
    std::vector<int> graph_index;         // node id -> graph vertex or -1

    explicit Graph(const DensityField& f) : field(f), grid(f.grid()) {
        graph_index.assign(grid.nodes().size(), -1);
        for (std::size_t i = 0; i < grid.cartesian_count(); ++i) {
            graph_index[i] = static_cast<int>(cart_nodes.size());
            cart_nodes.push_back(static_cast<int>(i));
        }
    }

    double node_density(int vertex) const {
        return field.value_at_node(static_cast<std::size_t>(cart_nodes[vertex]));
    }
    Cplx node_pos(int vertex) const {
        return grid.nodes()[static_cast<std::size_t>(cart_nodes[vertex])].z;
    }
};

}  // namespace

DensityField diagonal_density_field(const Domain& omega, const Domain& base, int resolution,
                                    DiagonalMode mode, const PathConfig& cfg,
                                    DensityCache* cache) {
    if (resolution < 32) throw ConfigError("diagonal_density_field: resolution must be >= 32");
    if (!domain_subset(omega, base))
        throw UnsupportedDomain(
            "diagonal_density_field: the inclusion-based construction needs omega inside the base");
    Cplx lo, hi;
    omega.bounding_box(lo, hi);
    double h = std::max(hi.real() - lo.real(), hi.imag() - lo.imag()) / resolution;
    auto grid = std::make_shared<const MeshGrid>(mesh(omega, h));

    if (!base.simply_connected() || !has_closed_form(base))
        throw UnsupportedDomain("diagonal_density_field: base must be a simply connected "
                                "catalog domain");
    DensityFn eta_base = hyperbolic_closed_form_fn(base);  // eta = lambda on such bases

    const auto& nodes = grid->nodes();
    std::vector<double> value(nodes.size(), 0.0);

    if (mode == DiagonalMode::cheap) {
        for (std::size_t i = 0; i < nodes.size(); ++i) value[i] = eta_base(nodes[i].z);
    } else {
        DensityCache local;
        DensityCache* cc = cache ? cache : &local;
        std::vector<char> direct(nodes.size(), 0);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (nodes[i].bdist < 2.0 * h) continue;
            Cplx w = nodes[i].z;
            CandidateFamily fam = make_family(omega, base, w, w, cfg.extremal, cc);
            LowerResult lr = cara_lower(omega, base, w, w, fam, cfg.extremal, cc);
            if (!lr.has_witness || !(lr.value > 0.0))
                throw ConfigError("diagonal_density_field: no certified candidate at a node");
            value[i] = lr.value;
            direct[i] = 1;
        }
        // near-boundary nodes: scale the cheap value by the nearest computed
        // node's bounds/cheap ratio, which keeps bounds >= cheap
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (direct[i]) continue;
            double best = 1e300;
            std::size_t arg = 0;
            bool found = false;
            for (std::size_t j = 0; j < nodes.size(); ++j) {
                if (!direct[j]) continue;
                double dd = std::abs(nodes[i].z - nodes[j].z);
                if (dd < best) best = dd, arg = j, found = true;
            }
            if (!found) throw ConfigError("diagonal_density_field: no interior nodes");
            double ratio = value[arg] / eta_base(nodes[arg].z);
            value[i] = eta_base(nodes[i].z) * std::max(1.0, ratio);
        }
    }

    std::vector<double> logv(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) logv[i] = std::log(value[i]);
    return DensityField(grid, std::move(logv), 0.0, DensitySource::extremal_bound);
}

PathResult distance(const DensityField& field, Cplx w1, Cplx w2, const PathConfig& cfg) {
    const Domain& dom = field.grid().domain();
    if (!contains(dom, w1) || !contains(dom, w2))
        throw PointOutsideDomain("distance: query point outside the domain");

    // canonical ordering makes distance(a,b) and distance(b,a) bit-identical
    bool swapped = std::make_pair(w2.real(), w2.imag()) < std::make_pair(w1.real(), w1.imag());
    Cplx a = swapped ? w2 : w1;
    Cplx b = swapped ? w1 : w2;

    PathResult out;
    out.density_id = dom.label();
    if (std::abs(a - b) == 0.0) {
        out.value = 0.0;
        out.path = {w1, w2};
        return out;
    }

    Graph g(field);
    const double h = field.grid().spacing();
    const int n = static_cast<int>(g.cart_nodes.size());
    // vertices: grid nodes, then a = n, b = n+1
    const int source = n, target = n + 1;

    // endpoint connections
    std::vector<std::pair<int, double>> src_edges, tgt_edges;
    double da = field.eval(a), db = field.eval(b);
    double radius = cfg.endpoint_radius * h;
    for (int rep = 0; rep < 3 && (src_edges.empty() || tgt_edges.empty()); ++rep) {
        src_edges.clear();
        tgt_edges.clear();
        for (int v = 0; v < n; ++v) {
            Cplx p = g.node_pos(v);
            double dist_a = std::abs(p - a), dist_b = std::abs(p - b);
            if (dist_a <= radius)
                src_edges.push_back({v, 0.5 * (da + g.node_density(v)) * dist_a});
            if (dist_b <= radius)
                tgt_edges.push_back({v, 0.5 * (db + g.node_density(v)) * dist_b});
        }
        radius *= 1.8;
    }
    if (src_edges.empty() || tgt_edges.empty())
        throw Disconnected("distance: query point has no nearby grid nodes");

    // Dijkstra over the 8-neighbor grid plus endpoint edges
    std::vector<double> dist(static_cast<std::size_t>(n) + 2,
                             std::numeric_limits<double>::infinity());
    std::vector<int> prev(static_cast<std::size_t>(n) + 2, -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[source] = 0.0;
    heap.push({0.0, source});
    const MeshGrid& grid = field.grid();
    while (!heap.empty()) {
        auto [d0, v] = heap.top();
        heap.pop();
        if (d0 > dist[static_cast<std::size_t>(v)]) continue;
        if (v == target) break;
        auto relax = [&](int u, double w) {
            double nd = d0 + w;
            if (nd < dist[static_cast<std::size_t>(u)]) {
                dist[static_cast<std::size_t>(u)] = nd;
                prev[static_cast<std::size_t>(u)] = v;
                heap.push({nd, u});
            }
        };
        if (v == source) {
            for (auto [u, w] : src_edges) relax(u, w);
            continue;
        }
        // target edges
        for (auto [u, w] : tgt_edges)
            if (u == v) relax(target, w);
        const MeshNode& node = grid.nodes()[static_cast<std::size_t>(g.cart_nodes[v])];
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0) continue;
                int nid = grid.cart_node(node.ix + dx, node.iy + dy);
                if (nid < 0) continue;
                int u = g.graph_index[static_cast<std::size_t>(nid)];
                if (u < 0) continue;
                double len = h * std::sqrt(static_cast<double>(dx * dx + dy * dy));
                relax(u, 0.5 * (g.node_density(v) + g.node_density(u)) * len);
            }
    }
    if (!std::isfinite(dist[static_cast<std::size_t>(target)]))
        throw Disconnected("distance: no grid path between the query points");

    // reconstruct polyline
    std::vector<Cplx> path;
    for (int v = target; v != -1; v = prev[static_cast<std::size_t>(v)]) {
        if (v == target)
            path.push_back(b);
        else if (v == source)
            path.push_back(a);
        else
            path.push_back(g.node_pos(v));
    }
    std::reverse(path.begin(), path.end());

    // local shortcut smoothing; rejects any step that leaves the domain or
    // increases the integral
    for (int pass = 0; pass < cfg.smoothing_passes; ++pass) {
        bool changed = true;
        int guard = 0;
        while (changed && guard++ < 64) {
            changed = false;
            for (std::size_t i = 1; i + 1 < path.size(); ++i) {
                if (!segment_inside(dom, path[i - 1], path[i + 1], 0.25 * h)) continue;
                try {
                    double direct = integrate_segment(field, path[i - 1], path[i + 1]);
                    double via = integrate_segment(field, path[i - 1], path[i]) +
                                 integrate_segment(field, path[i], path[i + 1]);
                    if (direct <= via) {
                        path.erase(path.begin() + static_cast<std::ptrdiff_t>(i));
                        changed = true;
                    }
                } catch (const PointOutsideDomain&) {
                    continue;
                }
            }
        }
    }

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
        total += integrate_segment(field, path[i], path[i + 1]);
    out.value = total;
    if (swapped) std::reverse(path.begin(), path.end());
    out.path = std::move(path);
    return out;
}

PathResult hurwitz_distance(const Domain& base, Cplx w1, Cplx w2, int resolution,
                            const PathConfig& cfg, DensityCache* cache) {
    Cplx lo, hi;
    base.bounding_box(lo, hi);
    double h = std::max(hi.real() - lo.real(), hi.imag() - lo.imag()) / resolution;
    auto grid = std::make_shared<const MeshGrid>(mesh(base, h));

    DensityFn eta_fn;
    if (base.simply_connected() && has_closed_form(base)) {
        eta_fn = hyperbolic_closed_form_fn(base);
    } else if (base.kind() == Domain::Kind::Annulus) {
        // eta of an annulus is rotation invariant: sample it radially by
        // extraction and interpolate the ratio to the hyperbolic density
        DensityCache local;
        DensityCache* cc = cache ? cache : &local;
        HurwitzConfig hcfg = cfg.extremal.hurwitz;
        double clear = 10.0 * hcfg.spacing * 1.05;
        double rin = base.inner_radius() + clear;
        double rout = base.outer_radius() - clear;
        if (rin >= rout)
            throw UnsupportedDomain("hurwitz_distance: annulus too thin for extraction spacing");
        int m = std::max(4, cfg.eta_radial_samples);
        std::vector<double> radii(static_cast<std::size_t>(m)), ratio(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
            double rho = rin + (rout - rin) * i / (m - 1);
            Cplx w = base.center() + Cplx(rho, 0.0);
            HurwitzValue ev = hurwitz_density(base, w, hcfg, cc);
            radii[static_cast<std::size_t>(i)] = rho;
            ratio[static_cast<std::size_t>(i)] =
                ev.eta / hyperbolic_closed_form(base, w).value;
        }
        Domain ann = base;
        eta_fn = [ann, radii, ratio](Cplx z) {
            double rho = std::abs(z - ann.center());
            double q;
            if (rho <= radii.front())
                q = ratio.front();
            else if (rho >= radii.back())
                q = ratio.back();
            else {
                std::size_t i = 1;
                while (radii[i] < rho) ++i;
                double t = (rho - radii[i - 1]) / (radii[i] - radii[i - 1]);
                q = (1.0 - t) * ratio[i - 1] + t * ratio[i];
            }
            return q * hyperbolic_closed_form(ann, z).value;
        };
    } else {
        throw UnsupportedDomain("hurwitz_distance: base must be simply connected catalog or an annulus");
    }

    DensityField field = field_from_function(grid, eta_fn, DensitySource::transported);
    PathResult r = distance(field, w1, w2, cfg);
    r.density_id = "eta_" + base.label();
    return r;
}

MetricAxiomReport metric_axiom_check(const DensityField& field, int n_triples,
                                     std::uint64_t seed, const PathConfig& cfg) {
    MetricAxiomReport rep;
    rep.triples = n_triples;
    rep.worst_triangle_margin = std::numeric_limits<double>::infinity();
    rep.min_distance = std::numeric_limits<double>::infinity();

    const auto& nodes = field.grid().nodes();
    double h = field.grid().spacing();
    std::vector<Cplx> pool;
    for (std::size_t i = 0; i < field.grid().cartesian_count(); ++i)
        if (nodes[i].bdist >= 2.0 * h) pool.push_back(nodes[i].z);
    if (pool.size() < 3) throw ConfigError("metric_axiom_check: too few interior nodes");

    Cplx lo, hi;
    field.grid().domain().bounding_box(lo, hi);
    double sep = 0.08 * std::abs(hi - lo);

    Rng rng(seed);
    for (int t = 0; t < n_triples; ++t) {
        Cplx a, b, c;
        int guard = 0;
        do {
            a = pool[rng.next_u64() % pool.size()];
            b = pool[rng.next_u64() % pool.size()];
            c = pool[rng.next_u64() % pool.size()];
        } while ((std::abs(a - b) < sep || std::abs(b - c) < sep || std::abs(a - c) < sep) &&
                 guard++ < 400);
        double dab = distance(field, a, b, cfg).value;
        double dba = distance(field, b, a, cfg).value;
        double dbc = distance(field, b, c, cfg).value;
        double dac = distance(field, a, c, cfg).value;
        if (dab != dba) {
            ++rep.symmetry_violations;
            rep.notes.push_back("symmetry violated");
        }
        rep.min_distance = std::min({rep.min_distance, dab, dbc, dac});
        double margin = (dab + dbc - dac) / std::max(dac, 1e-300);
        rep.worst_triangle_margin = std::min(rep.worst_triangle_margin, margin);
        if (margin < -0.01) {
            ++rep.triangle_violations;
            rep.notes.push_back("triangle inequality violated beyond 1%");
        }
    }
    return rep;
}

}  // namespace metriclab
