#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>

#include <fmt/format.h>

#include "jlt/errors.hpp"
#include "jlt/finite_gap_set.hpp"

namespace jlt {

struct QuadratureOptions {
    double rel_tol = 1e-10;
    std::size_t initial_nodes = 16;
    std::size_t max_nodes = std::size_t{1} << 20;
};

/**
 * Integrates  ∫_band g(t) / sqrt((t - lo)(hi - t)) dt  for smooth g.
 *
 * The substitution t = mid + half·cos θ turns this into ∫_0^π g dθ, which is
 * evaluated by the n-point Gauss–Chebyshev rule. n doubles until two
 * successive estimates agree to `rel_tol`.
 */
template <class Smooth>
double chebyshev_band_integral(const Band& band, Smooth&& g, const QuadratureOptions& opts = {}) {
    const double mid = band.mid();
    const double half = band.half_width();
    auto rule = [&](std::size_t n) {
        double sum = 0.0;
        const double h = std::numbers::pi / static_cast<double>(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double theta = (static_cast<double>(j) + 0.5) * h;
            sum += g(mid + half * std::cos(theta));
        }
        return sum * h;
    };

    std::size_t n = opts.initial_nodes;
    double older = 0.0;
    double previous = rule(n);
    while (2 * n <= opts.max_nodes) {
        n *= 2;
        const double current = rule(n);
        if (std::abs(current - previous) <= opts.rel_tol * std::abs(current)) return current;
        older = previous;
        previous = current;
    }
    throw NumericError(fmt::format("band quadrature on [{}, {}] did not converge with {} nodes",
                                   band.lo, band.hi, n),
                       older, previous);
}

/// Starting node count that resolves a singularity at distance `dist` from the band.
inline QuadratureOptions resolving(const QuadratureOptions& opts, const Band& band, double dist) {
    QuadratureOptions out = opts;
    const double wanted = dist > 0.0 ? 2.0 * band.half_width() / dist : 0.0;
    while (static_cast<double>(out.initial_nodes) < wanted && 4 * out.initial_nodes <= out.max_nodes)
        out.initial_nodes *= 2;
    return out;
}

}  // namespace jlt
