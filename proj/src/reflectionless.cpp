#include "jlt/reflectionless.hpp"

#include <cmath>

#include <fmt/format.h>

#include "jlt/errors.hpp"

namespace jlt {

ReflectionlessMeasure::ReflectionlessMeasure(FiniteGapSet set, std::vector<double> gammas)
    : set_(std::move(set)), gammas_(std::move(gammas)) {
    const auto bands = set_.bands();
    if (gammas_.size() + 1 != bands.size())
        throw UsageError(fmt::format("need {} gap parameters, got {}", bands.size() - 1,
                                     gammas_.size()));
    for (std::size_t j = 0; j < gammas_.size(); ++j) {
        const double g = gammas_[j];
        if (!(bands[j].hi <= g && g <= bands[j + 1].lo))
            throw UsageError(fmt::format("gamma_{} = {} outside its gap [{}, {}]", j + 1, g,
                                         bands[j].hi, bands[j + 1].lo));
    }
}

cplx ReflectionlessMeasure::m_function(cplx z) const {
    if (set_.contains(z)) throw DomainError("m-function evaluated on E");
    cplx num = -1.0;
    for (double g : gammas_) num *= (z - g);
    cplx den = 1.0;
    for (double e : set_.edges()) den *= std::sqrt(z - e);
    return num / den;
}

double ReflectionlessMeasure::band_factor(std::size_t k, double t) const {
    const auto bands = set_.bands();
    double f = 1.0;
    for (std::size_t j = 0; j < k; ++j)
        f *= std::abs(t - gammas_[j]) /
             std::sqrt(std::abs(t - bands[j].lo) * std::abs(t - bands[j].hi));
    for (std::size_t j = k + 1; j < bands.size(); ++j)
        f *= std::abs(t - gammas_[j - 1]) /
             std::sqrt(std::abs(t - bands[j].lo) * std::abs(t - bands[j].hi));
    return f;
}

double ReflectionlessMeasure::density(double t) const {
    const int k = set_.interior_band(t);
    if (k < 0) throw DomainError(fmt::format("density requested at t = {} outside band interiors", t));
    const auto& b = set_.bands()[static_cast<std::size_t>(k)];
    return band_factor(static_cast<std::size_t>(k), t) /
           (std::numbers::pi * std::sqrt((t - b.lo) * (b.hi - t)));
}

double ReflectionlessMeasure::moment_integral(cplx z, double p, const QuadratureOptions& opts) const {
    if (set_.contains(z)) throw DomainError("moment integral evaluated on E");
    if (!(p >= 1.0)) throw UsageError("moment integral needs p >= 1");
    double total = 0.0;
    for (std::size_t k = 0; k < set_.band_count(); ++k) {
        const auto& band = set_.bands()[k];
        const auto local = resolving(opts, band, band.distance(z));
        total += chebyshev_band_integral(
            band, [&](double t) { return band_factor(k, t) * std::pow(std::abs(t - z), -p); },
            local);
    }
    return total / std::numbers::pi;
}

double moment_envelope(cplx z, const FiniteGapSet& e, double p) {
    return 1.0 / (pow0(dist_to_set(z, e), p - 1.0) * std::sqrt(dist_to_edges(z, e)) *
                  std::sqrt(1.0 + std::abs(z)));
}

double log_moment_envelope(cplx z, const FiniteGapSet& e, double eps) {
    return 1.0 / (pow0(dist_to_set(z, e), eps) * std::sqrt(dist_to_edges(z, e)) *
                  pow0(1.0 + std::abs(z), 0.5 - eps));
}

double moment_ratio(const ReflectionlessMeasure& mu, cplx z, double p, double eps,
                    const QuadratureOptions& opts) {
    if (p > 1.0) return mu.moment_integral(z, p, opts) / moment_envelope(z, mu.set(), p);
    if (p == 1.0) {
        if (!(eps > 0.0)) throw UsageError("the p = 1 envelope needs eps > 0");
        return mu.moment_integral(z, 1.0, opts) / log_moment_envelope(z, mu.set(), eps);
    }
    throw UsageError("moment ratio needs p >= 1");
}

double band_integral_ratio(const Band& band, cplx z, double p, const QuadratureOptions& opts) {
    const double d = band.distance(z);
    if (d == 0.0) throw DomainError("band integral evaluated on the band");
    const double integral = chebyshev_band_integral(
        band, [&](double t) { return std::pow(std::abs(t - z), -p); }, resolving(opts, band, d));
    return integral * pow0(d, p - 1.0) * std::sqrt(std::abs(z - band.lo) * std::abs(z - band.hi));
}

}  // namespace jlt
