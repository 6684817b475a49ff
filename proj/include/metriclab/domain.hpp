#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace metriclab {

using Cplx = std::complex<double>;

// One sample on an oriented boundary curve: position, unit tangent oriented
// positively with respect to the domain, and the arclength element it
// represents, so that contour integrals are sum(f(z) * tangent * ds).
struct BoundaryPoint {
    Cplx z;
    Cplx tangent;
    int component = 0;
    double ds = 0.0;
};

// A parametrized boundary curve gamma : [0,1) -> C with derivative,
// positively oriented (domain on the left).
struct BoundaryCurve {
    std::function<Cplx(double)> point;
    std::function<Cplx(double)> derivative;
    bool closed = true;
};

struct GenericSpec {
    std::function<bool(Cplx)> membership;
    std::function<double(Cplx)> boundary_distance;
    std::vector<BoundaryCurve> curves;  // may be empty: evaluation-only domain
    bool simply_connected = false;
    Cplx bbox_lo{0.0, 0.0};
    Cplx bbox_hi{0.0, 0.0};
};

// Plane domain catalog. Values are immutable after construction.
class Domain {
public:
    enum class Kind { Disk, HalfPlane, Strip, Annulus, PuncturedDisk, Punctured, Generic, WholePlane };

    // --- constructors -----------------------------------------------------
    static Domain disk(Cplx center, double radius, std::string label = "disk");
    static Domain unit_disk();  // Disk(0,1), label "unit_disk"
    // half-plane through `origin` with inward unit normal `inward_normal`
    static Domain half_plane(Cplx origin, Cplx inward_normal, std::string label = "halfplane");
    static Domain upper_half_plane();
    static Domain strip(double width, std::string label = "strip");  // 0 < Im z < width
    static Domain annulus(double inner, double outer, Cplx center, std::string label = "annulus");
    static Domain punctured_disk(Cplx center, double radius, std::string label = "punctured_disk");
    static Domain punctured(Domain base, Cplx puncture, std::string label = "");
    static Domain generic(GenericSpec spec, std::string label = "generic");
    static Domain whole_plane();  // only to exercise the empty-family convention

    Kind kind() const { return kind_; }
    const std::string& label() const { return label_; }

    Cplx center() const { return center_; }
    double radius() const { return radius_; }        // Disk, PuncturedDisk
    double inner_radius() const { return inner_; }   // Annulus
    double outer_radius() const { return radius_; }  // Annulus
    double width() const { return width_; }          // Strip
    Cplx hp_origin() const { return center_; }       // HalfPlane
    Cplx hp_normal() const { return normal_; }       // HalfPlane
    const Domain& base() const { return *base_; }    // Punctured
    Cplx puncture() const { return puncture_; }      // Punctured
    const GenericSpec& generic_spec() const { return *generic_; }

    bool is_whole_plane() const { return kind_ == Kind::WholePlane; }
    bool bounded() const;
    bool simply_connected() const;

    // all puncture points, recursively (PuncturedDisk contributes its center)
    std::vector<Cplx> punctures() const;

    // axis-aligned bounding box of a bounded domain
    void bounding_box(Cplx& lo, Cplx& hi) const;

    // number of boundary components reachable for contour integration
    int boundary_component_count() const;

    std::string describe() const;

private:
    Domain() = default;

    Kind kind_ = Kind::Disk;
    std::string label_;
    Cplx center_{0.0, 0.0};
    double radius_ = 1.0;
    double inner_ = 0.0;
    double width_ = 1.0;
    Cplx normal_{0.0, 1.0};
    Cplx puncture_{0.0, 0.0};
    std::shared_ptr<const Domain> base_;
    std::shared_ptr<const GenericSpec> generic_;
};

// --- operations ------------------------------------------------------------

// true iff z is interior to d; punctures are excluded
bool contains(const Domain& d, Cplx z);

// Euclidean distance from z to the complement of d; punctures count as
// boundary points. Throws PointOutsideDomain unless contains(d, z).
double boundary_distance(const Domain& d, Cplx z);

// n samples per boundary component with unit tangents, positively oriented.
// Points satisfy the boundary equation to 1e-12. For a Strip the two lines
// are truncated at a window wide enough that the omitted tails contribute
// < 1e-9 to the contour integrals used here.
// Throws UnsupportedDomain for Generic domains without curves and for the
// whole plane.
std::vector<BoundaryPoint> boundary_sample(const Domain& d, int n_per_component);

// catalog subset test (analytic where possible, sampled fallback)
bool domain_subset(const Domain& inner, const Domain& outer, int probe_count = 512);

// the domain with all punctures filled back in
Domain without_punctures(const Domain& d);

}  // namespace metriclab
