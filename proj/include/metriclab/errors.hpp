#pragma once

#include <stdexcept>
#include <string>

namespace metriclab {

struct PointOutsideDomain : std::runtime_error {
    explicit PointOutsideDomain(const std::string& what) : std::runtime_error(what) {}
};

struct UnsupportedDomain : std::runtime_error {
    explicit UnsupportedDomain(const std::string& what) : std::runtime_error(what) {}
};

struct MeshTooCoarse : std::runtime_error {
    explicit MeshTooCoarse(const std::string& what) : std::runtime_error(what) {}
};

struct DidNotConverge : std::runtime_error {
    DidNotConverge(int iterations_, double residual_, const std::string& what)
        : std::runtime_error(what), iterations(iterations_), residual(residual_) {}
    int iterations;
    double residual;
};

struct NonConformalMap : std::runtime_error {
    explicit NonConformalMap(const std::string& what) : std::runtime_error(what) {}
};

struct BoundaryTooClose : std::runtime_error {
    explicit BoundaryTooClose(const std::string& what) : std::runtime_error(what) {}
};

struct NonIntegerWinding : std::runtime_error {
    explicit NonIntegerWinding(const std::string& what) : std::runtime_error(what) {}
};

struct ExtractionUnstable : std::runtime_error {
    explicit ExtractionUnstable(const std::string& what) : std::runtime_error(what) {}
};

struct Disconnected : std::runtime_error {
    explicit Disconnected(const std::string& what) : std::runtime_error(what) {}
};

struct InadmissibleTestMap : std::runtime_error {
    explicit InadmissibleTestMap(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace metriclab
