#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "metriclab/errors.hpp"
#include "metriclab/hurwitz.hpp"
#include "metriclab/liouville.hpp"

using namespace metriclab;

namespace {

// max relative error of a solved field against a reference density, over
// nodes at boundary distance >= cutoff
double max_rel_error(const DensityField& f, const DensityFn& ref, double cutoff) {
    double worst = 0.0;
    const auto& nodes = f.grid().nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].bdist < cutoff) continue;
        double expect = ref(nodes[i].z);
        worst = std::max(worst, std::abs(f.value_at_node(i) - expect) / expect);
    }
    return worst;
}

}  // namespace

TEST_CASE("disk solve matches the closed form within 2% away from the boundary") {
    DensityField f = solve_domain(Domain::unit_disk(), 0.02);
    DensityFn ref = hyperbolic_closed_form_fn(Domain::unit_disk());
    CHECK(max_rel_error(f, ref, 0.1) < 0.02);
    // center value reproduces the normalization anchor within 1%
    CHECK(std::abs(f.eval(0.0) - 2.0) / 2.0 < 0.01);
}

TEST_CASE("annulus solve matches the closed form within 2%") {
    Domain ann = Domain::annulus(0.25, 1.0, 0.0);
    DensityField f = solve_domain(ann, 0.02);
    CHECK(max_rel_error(f, hyperbolic_closed_form_fn(ann), 0.1) < 0.02);
}

TEST_CASE("punctured disk solve resolves the blow-up within 3% on 0.01 <= |z| <= 0.9") {
    Domain pd = Domain::punctured(Domain::disk(0.0, 1.0), 0.0);
    MeshGrid g = mesh(pd, 0.02, Cplx(0.0, 0.0));
    DensityField f = solve(g);
    DensityFn ref = hyperbolic_closed_form_fn(Domain::punctured_disk(0.0, 1.0));
    double worst = 0.0;
    // sweep radii across both the patch and the Cartesian region
    for (double rho = 0.01; rho <= 0.9; rho *= 1.17) {
        for (int k = 0; k < 16; ++k) {
            Cplx z = std::polar(rho, 2.0 * M_PI * k / 16.0);
            double expect = ref(z);
            worst = std::max(worst, std::abs(f.eval(z) - expect) / expect);
        }
    }
    CHECK(worst < 0.03);
}

TEST_CASE("convergence order: halving the spacing at least halves the disk error") {
    DensityFn ref = hyperbolic_closed_form_fn(Domain::unit_disk());
    DensityField coarse = solve_domain(Domain::unit_disk(), 0.04);
    DensityField fine = solve_domain(Domain::unit_disk(), 0.02);
    double e_coarse = max_rel_error(coarse, ref, 0.1);
    double e_fine = max_rel_error(fine, ref, 0.1);
    CHECK(e_coarse / e_fine >= 2.0);
}

TEST_CASE("domain monotonicity: annulus density dominates the enclosing disk density") {
    Domain ann = Domain::annulus(0.25, 1.0, 0.0);
    DensityField f = solve_domain(ann, 0.025);
    DensityFn disk = hyperbolic_closed_form_fn(Domain::unit_disk());
    const auto& nodes = f.grid().nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        // restricted to the accuracy-certified region: closer to the boundary
        // the collar data error (about d/2) exceeds the 1% slack
        if (nodes[i].bdist < 0.1) continue;
        CHECK(f.value_at_node(i) >= disk(nodes[i].z) * (1.0 - 0.01));
    }
}

TEST_CASE("determinism: identical mesh and tolerance give bit-identical fields") {
    Domain ann = Domain::annulus(0.3, 1.0, 0.0);
    MeshGrid g = mesh(ann, 0.03);
    DensityField a = solve(g);
    DensityField b = solve(g);
    REQUIRE(a.log_values().size() == b.log_values().size());
    CHECK(std::memcmp(a.log_values().data(), b.log_values().data(),
                      a.log_values().size() * sizeof(double)) == 0);
}

TEST_CASE("field_eval reproduces node values and interpolates") {
    DensityField f = solve_domain(Domain::unit_disk(), 0.05);
    const auto& nodes = f.grid().nodes();
    // node reproduction
    std::size_t probe = nodes.size() / 2;
    CHECK(f.eval(nodes[probe].z) == doctest::Approx(f.value_at_node(probe)).epsilon(1e-12));
    // disk field at 0.5 within 2% of 8/3
    CHECK(std::abs(f.eval(Cplx(0.5, 0.0)) - 8.0 / 3.0) / (8.0 / 3.0) < 0.02);
    CHECK_THROWS_AS(f.eval(Cplx(2.0, 0.0)), PointOutsideDomain);
    DensityValue dv = field_eval(f, Cplx(0.5, 0.0));
    CHECK(dv.source == DensitySource::pde);
}

TEST_CASE("bilinear interpolation: equal corners reproduce the common value") {
    MeshGrid g = mesh(Domain::disk(0.0, 1.0), 0.1);
    auto grid = std::make_shared<const MeshGrid>(g);
    DensityField f = field_from_function(grid, [](Cplx) { return 3.5; });
    CHECK(f.eval(Cplx(0.012, 0.034)) == doctest::Approx(3.5).epsilon(1e-13));
}

TEST_CASE("solver reports non-convergence instead of fabricating") {
    SolveOptions opt;
    opt.max_iters = 0;
    opt.tol = 1e-10;
    CHECK_THROWS_AS(solve_domain(Domain::unit_disk(), 0.05, opt), DidNotConverge);
}
