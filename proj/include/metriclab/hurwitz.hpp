#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "metriclab/liouville.hpp"

namespace metriclab {

enum class HurwitzMethod { simply_connected, extraction };

struct HurwitzValue {
    double radius = 0.0;          // r_Y(w)
    double eta = 0.0;             // 2 / r_Y(w)
    HurwitzMethod method = HurwitzMethod::simply_connected;
    double error_estimate = 0.0;  // absolute uncertainty on eta
};

struct HurwitzConfig {
    double spacing = 0.02;  // mesh spacing for the punctured solve
    SolveOptions solve{};
    MeshOptions mesh{};
    int n_angles = 64;      // angular samples for analytic fields
};

// Memo for density computations within one logical evaluation, so repeated
// queries of the same (domain, point) return the identical double.
class DensityCache {
public:
    std::optional<double> get(const std::string& key) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = map_.find(key);
        if (it == map_.end()) return std::nullopt;
        return it->second;
    }
    void put(const std::string& key, double v) {
        std::lock_guard<std::mutex> lock(mu_);
        map_[key] = v;
    }
    std::optional<HurwitzValue> get_hurwitz(const std::string& key) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = hmap_.find(key);
        if (it == hmap_.end()) return std::nullopt;
        return it->second;
    }
    void put_hurwitz(const std::string& key, const HurwitzValue& v) {
        std::lock_guard<std::mutex> lock(mu_);
        hmap_[key] = v;
    }

private:
    std::mutex mu_;
    std::map<std::string, double> map_;
    std::map<std::string, HurwitzValue> hmap_;
};

struct ExtractionResult {
    double log_r = 0.0;
    double error_estimate = 0.0;            // uncertainty on log r
    std::vector<double> s_values;           // s(rho) per radius
    std::vector<double> radii;
};

// Recover log r_Y(w) from the near-puncture asymptotics
// lambda(zeta) ~ 1/(|zeta-w| log(r/|zeta-w|)): for each radius rho the
// angular mean s(rho) of 1/(rho lambda) + log rho tends to log r; the
// returned value extrapolates rho -> 0 (linear fit in 1/log(1/rho), then in
// rho). Throws ExtractionUnstable when the s(rho) sequence is non-monotone
// beyond 3x the fit residual, ConfigError for fewer than 4 radii.
ExtractionResult puncture_extraction(const DensityFn& lambda, Cplx w,
                                     const std::vector<double>& radii, int n_angles = 64);

// Same, reading a solved field with a polar patch at w; radii default to the
// patch rings at spacing/2 .. spacing/32.
ExtractionResult puncture_extraction(const DensityField& field, Cplx w,
                                     std::vector<double> radii = {});

// Hyperbolic density of d at z: closed form for the catalog, Liouville solve
// for bounded non-catalog domains.
double hyperbolic_density(const Domain& d, Cplx z, const HurwitzConfig& cfg = {},
                          DensityCache* cache = nullptr);

// Hurwitz density eta_Y(w) = 2/r_Y(w). Simply connected catalog domains take
// the shortcut eta = lambda_Y; otherwise the puncture Y \ {w} is solved and
// r is extracted from the asymptotics.
HurwitzValue hurwitz_density(const Domain& Y, Cplx w, const HurwitzConfig& cfg = {},
                             DensityCache* cache = nullptr);

// default extraction radii for a field with a patch at w
std::vector<double> default_extraction_radii(double spacing);

}  // namespace metriclab
