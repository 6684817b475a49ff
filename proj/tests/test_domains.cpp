#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "metriclab/errors.hpp"
#include "metriclab/mesh.hpp"
#include "metriclab/rng.hpp"

using namespace metriclab;

TEST_CASE("contains on the catalog") {
    CHECK(contains(Domain::disk(0.0, 1.0), Cplx(0.5, 0.0)));
    CHECK_FALSE(contains(Domain::annulus(0.25, 1.0, 0.0), Cplx(0.1, 0.0)));
    Domain pd = Domain::punctured(Domain::disk(0.0, 1.0), Cplx(0.3, 0.0));
    CHECK_FALSE(contains(pd, Cplx(0.3, 0.0)));
    CHECK(contains(pd, Cplx(0.31, 0.0)));
    CHECK(contains(Domain::strip(1.0), Cplx(5.0, 0.5)));
    CHECK_FALSE(contains(Domain::strip(1.0), Cplx(0.0, -0.1)));
}

TEST_CASE("boundary_distance on the catalog") {
    CHECK(boundary_distance(Domain::disk(0.0, 1.0), Cplx(0.5, 0.0)) == doctest::Approx(0.5));
    CHECK(boundary_distance(Domain::annulus(0.25, 1.0, 0.0), Cplx(0.5, 0.0)) ==
          doctest::Approx(0.25));
    Domain pd = Domain::punctured(Domain::disk(0.0, 1.0), Cplx(0.0, 0.0));
    CHECK(boundary_distance(pd, Cplx(0.1, 0.0)) == doctest::Approx(0.1));
    CHECK_THROWS_AS(boundary_distance(Domain::disk(0.0, 1.0), Cplx(2.0, 0.0)),
                    PointOutsideDomain);
}

TEST_CASE("contains agrees with the analytic inequality at random points") {
    Rng rng(7);
    Domain ann = Domain::annulus(0.4, 1.3, Cplx(0.2, -0.1));
    Domain disk = Domain::disk(Cplx(-0.5, 0.3), 0.8);
    for (int i = 0; i < 10000; ++i) {
        Cplx z(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
        double ra = std::abs(z - ann.center());
        CHECK(contains(ann, z) == (ra > 0.4 && ra < 1.3));
        CHECK(contains(disk, z) == (std::abs(z - disk.center()) < 0.8));
    }
}

TEST_CASE("boundary samples lie on the boundary with positive orientation") {
    Domain disk = Domain::disk(0.0, 1.0);
    auto bs = boundary_sample(disk, 4);
    REQUIRE(bs.size() == 4);
    for (int k = 0; k < 4; ++k) {
        Cplx expect = std::polar(1.0, M_PI * k / 2.0);
        CHECK(std::abs(bs[k].z - expect) < 1e-12);
        // counterclockwise: tangent = i * position
        CHECK(std::abs(bs[k].tangent - Cplx(0, 1) * expect) < 1e-12);
    }

    Domain ann = Domain::annulus(0.25, 1.0, 0.0);
    auto as = boundary_sample(ann, 64);
    REQUIRE(as.size() == 128);
    for (const auto& p : as) {
        double r = std::abs(p.z);
        if (p.component == 0) {
            CHECK(std::abs(r - 1.0) < 1e-12);
            CHECK(std::abs(p.tangent - Cplx(0, 1) * p.z / r) < 1e-12);
        } else {
            CHECK(std::abs(r - 0.25) < 1e-12);
            // inner circle runs clockwise
            CHECK(std::abs(p.tangent + Cplx(0, 1) * p.z / r) < 1e-12);
        }
    }
}

TEST_CASE("strip boundary truncation window is contour-safe") {
    // the zero-counting integrand of a strip-to-disk map decays exponentially
    // along the lines, so the truncated window must already be converged:
    // doubling the sample count (and hence refining the same window) and
    // integrating h'/h gives winding 1 to 1e-9
    Domain s = Domain::strip(1.0);
    auto winding = [&](int n) {
        auto bs = boundary_sample(s, n);
        Cplx acc = 0.0;
        for (const auto& p : bs) {
            // Riemann map of the strip with its zero at 0.5i
            Cplx t = std::exp(M_PI * p.z);
            Cplx t0 = std::exp(M_PI * Cplx(0.0, 0.5));
            Cplx h = (t - t0) / (t - std::conj(t0));
            Cplx dh = (M_PI * t * (t0 - std::conj(t0))) /
                      ((t - std::conj(t0)) * (t - std::conj(t0)));
            acc += dh / h * p.tangent * p.ds;
        }
        return acc / Cplx(0.0, 2.0 * M_PI);
    };
    Cplx a = winding(8192);
    Cplx b = winding(16384);
    CHECK(std::abs(a - Cplx(1.0, 0.0)) < 1e-9);
    CHECK(std::abs(a - b) < 1e-9);
}

TEST_CASE("boundary_distance is 1-Lipschitz along interior segments") {
    Rng rng(11);
    Domain doms[] = {Domain::disk(0.0, 1.0), Domain::annulus(0.3, 1.0, 0.0),
                     Domain::punctured(Domain::disk(0.0, 1.0), Cplx(0.2, 0.2))};
    for (const Domain& d : doms) {
        int done = 0;
        while (done < 300) {
            Cplx a(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
            Cplx b(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
            if (!contains(d, a) || !contains(d, b)) continue;
            bool inside = true;
            for (int t = 1; t < 16; ++t)
                if (!contains(d, a + (b - a) * (t / 16.0))) inside = false;
            if (!inside) continue;
            ++done;
            double da = boundary_distance(d, a), db = boundary_distance(d, b);
            CHECK(std::abs(da - db) <= std::abs(a - b) + 1e-9);
        }
    }
}

TEST_CASE("mesh: node count tracks the domain area") {
    MeshGrid g = mesh(Domain::disk(0.0, 1.0), 0.05);
    double expect = M_PI / (0.05 * 0.05);
    CHECK(std::abs(static_cast<double>(g.cartesian_count()) - expect) < 0.1 * expect);
    CHECK(g.patches().empty());
}

TEST_CASE("mesh: punctured disk gets a polar patch with dyadic radii") {
    Domain pd = Domain::punctured(Domain::disk(0.0, 1.0), 0.0);
    MeshGrid g = mesh(pd, 0.05, Cplx(0.0, 0.0));
    REQUIRE(g.patches().size() == 1);
    const PolarPatch& p = g.patches()[0];
    CHECK(p.rho_min() == doctest::Approx(0.05 / 64.0));
    for (int k = 0; k <= 6; ++k) {
        double target = 0.05 * std::pow(2.0, -k);
        bool found = false;
        for (int j = 0; j < p.n_rings; ++j)
            if (std::abs(p.ring_radius(j) - target) < 1e-12 * target) found = true;
        CHECK(found);
    }
}

TEST_CASE("mesh: degenerate spacing is rejected") {
    CHECK_THROWS_AS(mesh(Domain::disk(0.0, 1.0), 10.0), MeshTooCoarse);
    CHECK_THROWS_AS(mesh(Domain::strip(1.0), 0.05), UnsupportedDomain);
}

TEST_CASE("generic membership-only domains are rejected by contour operations") {
    GenericSpec spec;
    spec.membership = [](Cplx z) { return std::abs(z) < 1.0; };
    spec.boundary_distance = [](Cplx z) { return 1.0 - std::abs(z); };
    spec.bbox_lo = {-1.0, -1.0};
    spec.bbox_hi = {1.0, 1.0};
    Domain g = Domain::generic(spec, "blob");
    CHECK(contains(g, Cplx(0.5, 0.0)));
    CHECK_THROWS_AS(boundary_sample(g, 64), UnsupportedDomain);
}

TEST_CASE("domain_subset catalog cases") {
    CHECK(domain_subset(Domain::annulus(0.25, 1.0, 0.0), Domain::unit_disk()));
    CHECK(domain_subset(Domain::unit_disk(), Domain::unit_disk()));
    CHECK_FALSE(domain_subset(Domain::disk(0.0, 2.0), Domain::unit_disk()));
    CHECK(domain_subset(Domain::punctured(Domain::disk(0.0, 1.0), 0.0), Domain::unit_disk()));
}
