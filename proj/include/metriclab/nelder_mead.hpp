#pragma once

#include <algorithm>
#include <functional>
#include <vector>

namespace metriclab {

struct NelderMeadResult {
    std::vector<double> x;
    double f = 0.0;
    int iterations = 0;
};

// Standard Nelder-Mead simplex minimization with deterministic tie-breaking.
// `trace` (optional) receives (iteration, best f) pairs.
inline NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& fn, std::vector<double> x0,
    double step, int max_iters, double ftol = 1e-12,
    const std::function<void(int, double)>& trace = {}) {
    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
    const std::size_t n = x0.size();

    struct Vertex {
        std::vector<double> x;
        double f;
    };
    std::vector<Vertex> simplex;
    simplex.reserve(n + 1);
    simplex.push_back({x0, fn(x0)});
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> x = x0;
        x[i] += step;
        simplex.push_back({x, fn(x)});
    }

    auto order = [&] {
        std::stable_sort(simplex.begin(), simplex.end(),
                         [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    };
    order();

    int iter = 0;
    for (; iter < max_iters; ++iter) {
        if (simplex.back().f - simplex.front().f < ftol) break;
        if (trace) trace(iter, simplex.front().f);

        std::vector<double> centroid(n, 0.0);
        for (std::size_t v = 0; v < n; ++v)
            for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[v].x[i] / n;

        auto blend = [&](double coeff) {
            std::vector<double> x(n);
            for (std::size_t i = 0; i < n; ++i)
                x[i] = centroid[i] + coeff * (simplex.back().x[i] - centroid[i]);
            return x;
        };

        std::vector<double> xr = blend(-alpha);
        double fr = fn(xr);
        if (fr < simplex.front().f) {
            std::vector<double> xe = blend(-gamma);
            double fe = fn(xe);
            if (fe < fr)
                simplex.back() = {xe, fe};
            else
                simplex.back() = {xr, fr};
        } else if (fr < simplex[n - 1].f) {
            simplex.back() = {xr, fr};
        } else {
            std::vector<double> xc = blend(rho);
            double fc = fn(xc);
            if (fc < simplex.back().f) {
                simplex.back() = {xc, fc};
            } else {
                for (std::size_t v = 1; v <= n; ++v) {
                    for (std::size_t i = 0; i < n; ++i)
                        simplex[v].x[i] =
                            simplex[0].x[i] + sigma * (simplex[v].x[i] - simplex[0].x[i]);
                    simplex[v].f = fn(simplex[v].x);
                }
            }
        }
        order();
    }
    return {simplex.front().x, simplex.front().f, iter};
}

}  // namespace metriclab
