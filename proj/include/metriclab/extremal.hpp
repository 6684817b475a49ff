#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "metriclab/analytic_map.hpp"
#include "metriclab/hurwitz.hpp"

namespace metriclab {

struct ExtremalConfig {
    int laurent_degree = 3;        // Laurent degree m for annuli, polynomial degree otherwise
    int restarts = 5;
    int max_iters = 400;
    int boundary_samples = 512;    // per boundary component
    double margin = 1e-6;          // rescale safety factor
    std::uint64_t seed = 20240601;
    HurwitzConfig hurwitz{};       // for eta via extraction when needed
    std::vector<Cplx> warm_start;  // optional extra start point (basis-padded)
    std::string trace_csv;         // when set, append optimizer trace rows here
};

// candidate map evaluator: value and derivative at z
using MapEval = std::function<std::pair<Cplx, Cplx>(Cplx)>;

// Number of s-points of h in omega by the argument principle: trapezoid
// winding of h'/(h-s) over the oriented boundary samples. For punctured
// domains the contour runs over the base boundary and s-points sitting at
// punctures are subtracted. Throws BoundaryTooClose when |h-s| < 1e-6 at a
// sample, NonIntegerWinding when the integral is > 0.1 from an integer.
int count_s_points(const MapEval& h, const Domain& omega, Cplx s, int n_per_component = 512);
int count_s_points(const AnalyticMap& h, const Domain& omega, Cplx s, int n_per_component = 512);

// Candidate h(z) = post( seed(z) * exp(sum_k theta_k (z-center)^k) / rescale ),
// or the inclusion map when `inclusion` is set.
struct Candidate {
    bool inclusion = false;
    AnalyticMap seed = AnalyticMap::identity();
    Cplx center{0.0, 0.0};
    std::vector<int> powers;
    std::vector<Cplx> theta;
    double log_rescale = 0.0;
    std::optional<AnalyticMap> post;

    // rescaled pre-stage (maps into the closed unit disk when admissible)
    std::pair<Cplx, Cplx> pre(Cplx z) const;
    // full candidate value/derivative
    std::pair<Cplx, Cplx> eval(Cplx z) const;
    MapEval as_eval() const {
        return [c = *this](Cplx z) { return c.eval(z); };
    }
};

// Parametrized admissible family for the Caratheodory-side supremum.
struct CandidateFamily {
    Domain omega = Domain::unit_disk();
    Domain base = Domain::unit_disk();
    Cplx w{0.0, 0.0}, s{0.0, 0.0};

    bool empty = false;             // Liouville convention: no holomorphic family at all
    bool has_exp_poly = false;      // seed/post shape available
    bool inclusion_available = false;

    AnalyticMap seed = AnalyticMap::identity();
    Cplx center{0.0, 0.0};          // Laurent expansion center
    std::vector<int> powers;
    std::optional<AnalyticMap> post;
    double post_deriv0 = 1.0;       // |post'(0)|
    double eta_base_s = 0.0;        // eta_Y(s)
    double eta_base_error = 0.0;
};

CandidateFamily make_family(const Domain& omega, const Domain& base, Cplx s, Cplx w,
                            const ExtremalConfig& cfg, DensityCache* cache = nullptr);

// Certificate that h lies in H^s_w(omega, base): h(w) = s within 1e-9, exactly
// one s-point by winding count, and the pre-stage boundary modulus at most 1
// (inclusion candidates instead certify omega subset base). Returns false when
// the winding count is not certifiable.
bool admissibility_check(const Candidate& h, const Domain& omega, const Domain& base, Cplx w,
                         Cplx s, int n_samples = 512);

enum class UpperSource { hurwitz_bound, schwarz_pick_bound, min_of_both, none };

struct LowerResult {
    double value = 0.0;
    bool empty_family = false;
    bool has_witness = false;
    Candidate witness;
};

struct UpperResult {
    double value = std::numeric_limits<double>::infinity();
    UpperSource source = UpperSource::none;
    double error = 0.0;  // uncertainty inherited from extraction-based eta
};

// Certified lower and upper estimates of the Caratheodory density of the
// Hurwitz metric C_Omega^{Y,s}(w).
struct BoundPair {
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    bool empty_family = false;
    bool has_witness = false;
    Candidate witness;
    UpperSource upper_source = UpperSource::none;
    double lower_error = 0.0;
    double upper_error = 0.0;
};

// Maximize eta_Y(h(w)) |h'(w)| over certified candidates by Nelder-Mead with
// deterministic restarts. Every reported value is backed by a passing
// admissibility_check; optimizer failure degrades to the best certified value.
LowerResult cara_lower(const Domain& omega, const Domain& base, Cplx s, Cplx w,
                       const CandidateFamily& family, const ExtremalConfig& cfg,
                       DensityCache* cache = nullptr);

// min of the Hurwitz bound eta_Omega(w) (any base) and the Schwarz-Pick bound
// lambda_Omega(w) (base = unit disk, s = 0 only)
UpperResult cara_upper(const Domain& omega, const Domain& base, Cplx s, Cplx w,
                       const ExtremalConfig& cfg, DensityCache* cache = nullptr);

BoundPair cara_bounds(const Domain& omega, const Domain& base, Cplx s, Cplx w,
                      const ExtremalConfig& cfg, DensityCache* cache = nullptr);

struct KobayashiBound {
    double value = std::numeric_limits<double>::infinity();
    bool empty_family = true;
    std::vector<Cplx> witness;  // c, theta_1..theta_K
};

// Upper-bound estimator for the Kobayashi density of the Hurwitz metric
// eta_Omega^Y(w): minimize eta_Y(s)/|h'(s)| over certified candidates
// h : Y -> Omega with a single w-point at s.
KobayashiBound kobayashi_upper(const Domain& omega, const Domain& base, Cplx w,
                               const ExtremalConfig& cfg, DensityCache* cache = nullptr);

}  // namespace metriclab
