#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "metriclab/domain.hpp"

namespace metriclab {

// Holomorphic map catalog with analytic derivatives. Derivatives always come
// from the catalog plus the chain rule, never from finite differences.
class AnalyticMap {
public:
    enum class Kind { Mobius, Exp, Log, Power, Affine, Composition };

    struct Eval {
        Cplx value;
        Cplx derivative;
    };

    // (az + b) / (cz + d), ad - bc != 0
    static AnalyticMap mobius(Cplx a, Cplx b, Cplx c, Cplx d);
    static AnalyticMap exp_map();
    static AnalyticMap log_map(int branch = 0);
    static AnalyticMap power(double exponent);
    static AnalyticMap affine(Cplx scale, Cplx shift);
    static AnalyticMap identity();
    // composition in mathematical order: maps[0] is applied last
    static AnalyticMap compose(std::vector<AnalyticMap> maps);

    // disk automorphism z -> (z - a)/(1 - conj(a) z), sends a to 0
    static AnalyticMap mobius_to_zero(Cplx a);
    // inverse of the above, sends 0 to s
    static AnalyticMap mobius_from_zero(Cplx s);
    // upper half-plane -> unit disk, i -> 0
    static AnalyticMap cayley();

    Kind kind() const { return kind_; }

    Eval eval(Cplx z) const;
    Cplx operator()(Cplx z) const { return eval(z).value; }

    // analytic inverse of an injective catalog map
    AnalyticMap inverse() const;

    // attach source/target domains; spot-checks at `probes` random source
    // points that the map lands in the target and (for conformal use) that
    // the derivative does not vanish
    AnalyticMap& with_domains(Domain source, Domain target, int probes = 1000,
                              std::uint64_t seed = 7);

    const std::optional<Domain>& source() const { return source_; }
    const std::optional<Domain>& target() const { return target_; }

private:
    AnalyticMap() = default;

    Kind kind_ = Kind::Affine;
    Cplx a_{1.0, 0.0}, b_{0.0, 0.0}, c_{0.0, 0.0}, d_{1.0, 0.0};
    double exponent_ = 1.0;
    int branch_ = 0;
    std::shared_ptr<const std::vector<AnalyticMap>> parts_;  // application order
    std::optional<Domain> source_;
    std::optional<Domain> target_;
};

// Riemann map of a simply connected catalog domain onto the unit disk.
// Returns nullopt for domains outside the catalog.
std::optional<AnalyticMap> riemann_to_unit_disk(const Domain& d);

// density as a function of position (curvature -1 normalization)
using DensityFn = std::function<double(Cplx)>;

// Push a conformal density forward through an injective conformal map:
// the result rho satisfies rho(m(z)) * |m'(z)| = lambda_source(z).
// Throws NonConformalMap when the derivative vanishes at a probe point of
// the source domain (when one is attached) or at evaluation time.
DensityFn transport(const AnalyticMap& m, DensityFn lambda_source, int probes = 1000,
                    std::uint64_t seed = 11);

}  // namespace metriclab
