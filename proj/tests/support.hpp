#pragma once

// Shared generators and test-only oracles.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "jlt/finite_gap_set.hpp"
#include "jlt/reflectionless.hpp"

namespace jlt::testing {

/// N bands with random widths and gaps, starting near -3.
inline FiniteGapSet random_gap_set(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> width(0.2, 1.5);
    std::uniform_real_distribution<double> gap(0.1, 1.0);
    std::vector<Band> bands;
    double x = -3.0 + gap(rng);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = width(rng);
        bands.push_back({x, x + w});
        x += w + gap(rng);
    }
    return FiniteGapSet(std::move(bands));
}

inline std::vector<double> random_gammas(std::mt19937_64& rng, const FiniteGapSet& e) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> g;
    const auto bands = e.bands();
    for (std::size_t j = 0; j + 1 < bands.size(); ++j)
        g.push_back(bands[j].hi + u(rng) * (bands[j + 1].lo - bands[j].hi));
    return g;
}

inline ReflectionlessMeasure random_measure(std::mt19937_64& rng, std::size_t n) {
    auto e = random_gap_set(rng, n);
    auto g = random_gammas(rng, e);
    return ReflectionlessMeasure(std::move(e), std::move(g));
}

/// Composite Simpson rule on [a, b] with n (even) panels; independent of the library's rules.
template <class F>
auto simpson(F&& f, double a, double b, int n) {
    const double h = (b - a) / n;
    auto sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h);
    return sum * (h / 3.0);
}

/// ∫_{-2}^{2} g(t) dt / (π sqrt(4 - t^2)) via t = 2 cos θ and Simpson in θ.
template <class F>
auto semicircle_integral(F&& g, int n = 20000) {
    return simpson([&](double th) { return g(2.0 * std::cos(th)); }, 0.0, std::numbers::pi, n) /
           std::numbers::pi;
}

}  // namespace jlt::testing
