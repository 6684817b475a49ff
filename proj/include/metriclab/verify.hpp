#pragma once

#include <string>
#include <vector>

#include "metriclab/extremal.hpp"
#include "metriclab/jsonio.hpp"
#include "metriclab/pathmetric.hpp"

namespace metriclab {

enum class CheckStatus { pass, fail, inconclusive };

// One named numerical check of a paper statement. margin is the worst
// slack-adjusted headroom over the subchecks (>= -tolerance means pass);
// inconclusive marks inequalities whose measured margin sits inside the
// combined error bars.
struct CheckResult {
    std::string check_id;
    CheckStatus status = CheckStatus::fail;
    double margin = 0.0;
    double tolerance = 0.0;
    ordered_json artifacts = ordered_json::object();
    std::string note;
};

// A config fully determines a run: seeds and tolerances are explicit.
struct RunConfig {
    std::uint64_t seed = 20240601;
    double tol_scale = 1.0;          // negative flips the harness to all-fail (sanity)
    double spacing = 0.025;          // PDE spacing for check solves
    double extraction_spacing = 0.02;
    int distance_grid = 96;
    int points = 3;                  // test points per check
    int pairs = 3;                   // distance pairs for the metric check
    int triples = 6;                 // triples for the axiom check
    int degree = 3;                  // optimizer exponent-basis degree
    int restarts = 5;
    int max_iters = 400;
    int boundary_samples = 512;
    double margin_rescale = 1e-6;
    int threads = 1;
    std::vector<std::string> checks;  // empty = the 11 statement checks
    std::string output_dir;

    ExtremalConfig extremal() const;
};

RunConfig run_config_from_json(const ordered_json& j);
ordered_json run_config_to_json(const RunConfig& c);

// the default 11 statement checks, in execution order
std::vector<std::string> default_checks();

// Execute every enabled check; deterministic given the config seed; a check
// that throws becomes a fail result with the error attached. The suite never
// aborts early.
std::vector<CheckResult> run_suite(const RunConfig& config);

// Thm 3.9 instance at the level of certified bounds:
// cara_lower(Omega2, Y, c, f(a)) * |f'(a)| <= cara_bounds(Omega1, Y, c, a).upper.
// Throws InadmissibleTestMap unless f has the single-preimage property at a.
CheckResult check_distance_decreasing(const AnalyticMap& f, const Domain& omega1,
                                      const Domain& omega2, const Domain& base, Cplx c, Cplx a,
                                      const RunConfig& cfg, DensityCache* cache = nullptr);

ordered_json report_to_json(const RunConfig& config, const std::vector<CheckResult>& results);

// exit code convention: 0 all pass, 2 any fail, 3 inconclusive and none fail
int suite_exit_code(const std::vector<CheckResult>& results);

}  // namespace metriclab
